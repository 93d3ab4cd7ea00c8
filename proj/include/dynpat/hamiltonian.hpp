#pragma once

// Finite tight-binding matrices over generated patterns.
//
// Every emitted matrix carries h_{nm} = exp(-beta |p_n - p_m|) for pairs within
// the hopping cutoff and an onsite term of exactly 1.

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dynpat/errors.hpp"
#include "dynpat/pattern.hpp"

namespace dynpat {

struct HoppingRule {
  double beta = 1.0;
  double cutoff_dist = 7.0;

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("hopping beta must be > 0");
    if (!(cutoff_dist > 0.0) || !std::isfinite(cutoff_dist)) throw ValidationError("hopping cutoff must be > 0");
  }

  /// Bound on the dropped tail 2 e^{-beta c} / (1 - e^{-beta}).
  [[nodiscard]] double truncation_error() const {
    return 2.0 * std::exp(-beta * cutoff_dist) / (1.0 - std::exp(-beta));
  }
};

struct BoundaryCondition {
  enum class Kind { PeriodicApproximant, DirichletHalf };
  Kind kind = Kind::PeriodicApproximant;
  std::array<int, 2> period{0, 0};  // per-axis period; 0 on an open axis
  int cut_axis = -1;
  int cut_offset = 0;
  int far_end = 0;  // first label past the open end of the cut axis
};

struct HamiltonianMatrix {
  Eigen::MatrixXd entries;
  std::vector<Label> labels;  // row i <-> labels[i]
  int label_dim = 1;
  BoundaryCondition bc;
  double truncation_error = 0.0;

  [[nodiscard]] int dim() const { return static_cast<int>(entries.rows()); }

  [[nodiscard]] int index_of(const Label& n) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == n) return static_cast<int>(i);
    }
    return -1;
  }
};

inline constexpr double kMinSeparation = 1e-6;

namespace detail {

/// Lattice of translation vectors used for periodic images (0, 1 or 2 vectors).
class ImageLattice {
 public:
  explicit ImageLattice(std::vector<Vec3> periods) : periods_(std::move(periods)) {
    if (periods_.empty()) return;
    Eigen::MatrixXd basis(3, static_cast<Eigen::Index>(periods_.size()));
    for (std::size_t a = 0; a < periods_.size(); ++a) basis.col(static_cast<Eigen::Index>(a)) = periods_[a];
    gram_ = basis.transpose() * basis;
    basis_ = basis;
    gram_inverse_ = gram_.inverse();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_);
    sigma_min_ = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
    if (!(sigma_min_ > 0.0)) throw ValidationError("degenerate period vectors");
  }

  /// Calls fn(distance) for every image of displacement delta within cutoff,
  /// skipping the zero image when skip_self is set.
  template <class Fn>
  void for_each_image(const Vec3& delta, double cutoff, bool skip_self, Fn&& fn) const {
    if (periods_.empty()) {
      if (!skip_self) {
        const double dist = delta.norm();
        if (dist <= cutoff) fn(dist);
      }
      return;
    }
    const Eigen::VectorXd centre = -(gram_inverse_ * (basis_.transpose() * delta));
    std::array<long, 2> c0{0, 0};
    Vec3 reduced = delta;
    for (std::size_t a = 0; a < periods_.size(); ++a) {
      c0[a] = std::lround(centre[static_cast<Eigen::Index>(a)]);
      reduced += static_cast<double>(c0[a]) * periods_[a];
    }
    const long reach = static_cast<long>(std::ceil((cutoff + reduced.norm()) / sigma_min_)) + 1;
    const long reach2 = periods_.size() == 2 ? reach : 0;
    for (long i = -reach; i <= reach; ++i) {
      for (long j = -reach2; j <= reach2; ++j) {
        const long a = c0[0] + i;
        const long b = periods_.size() == 2 ? c0[1] + j : 0;
        if (skip_self && a == 0 && b == 0) continue;
        Vec3 v = delta + static_cast<double>(a) * periods_[0];
        if (periods_.size() == 2) v += static_cast<double>(b) * periods_[1];
        const double dist = v.norm();
        if (dist <= cutoff) fn(dist);
      }
    }
  }

 private:
  std::vector<Vec3> periods_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd gram_inverse_;
  double sigma_min_ = 0.0;
};

/// Builds the upper triangle and mirrors it, so the result is bit-symmetric.
inline Eigen::MatrixXd assemble(const std::vector<Vec3>& pts, const ImageLattice& images,
                                const HoppingRule& hop) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  double closest = std::numeric_limits<double>::infinity();
  images.for_each_image(Vec3::Zero(), hop.cutoff_dist, true,
                        [&](double dist) { closest = std::min(closest, dist); });
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double sum = 0.0;
      images.for_each_image(pts[static_cast<std::size_t>(j)] - pts[static_cast<std::size_t>(i)],
                            hop.cutoff_dist, false, [&](double dist) {
                              closest = std::min(closest, dist);
                              sum += std::exp(-hop.beta * dist);
                            });
      h(i, j) = sum;
    }
  }
  if (closest < kMinSeparation) {
    throw ValidationError("pattern is not Delone: two sites closer than " + std::to_string(kMinSeparation));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) h(j, i) = h(i, j);
  }
  return h;
}

inline void require_commensurate(const PatternSpec& spec, int axis, int size) {
  const Frequency rho = rotation_number(spec, axis);
  if (!rho.exact) {
    throw ValidationError("periodic boundary needs a rational frequency on axis " + std::to_string(axis + 1));
  }
  if (size < 1 || size % rho.exact->den != 0) {
    throw ValidationError("size " + std::to_string(size) + " is incommensurate with rotation number " +
                          rho.exact->str() + " on axis " + std::to_string(axis + 1));
  }
}

}  // namespace detail

/// Periodic approximant on labels [0, L_1) (x [0, L_2)). Off-diagonal entries
/// sum over every periodic image within the cutoff; with L larger than twice the
/// cutoff this is the minimum-image convention.
inline HamiltonianMatrix build_bulk_pbc(const PatternSpec& raw_spec, std::array<int, 2> sizes,
                                        const HoppingRule& hop) {
  hop.validate();
  const PatternSpec spec = normalized(raw_spec);
  const int d = spec.label_dim();
  for (int axis = 0; axis < d; ++axis) {
    detail::require_commensurate(spec, axis, sizes[static_cast<std::size_t>(axis)]);
  }
  const Window gen = d == 1 ? Window::line(0, sizes[0]) : Window::box({0, 0}, {sizes[0], sizes[1]});
  const PointPattern pattern = generate(spec, gen);

  std::vector<Vec3> periods;
  for (int axis = 0; axis < d; ++axis) {
    Label end{0, 0};
    end[static_cast<std::size_t>(axis)] = sizes[static_cast<std::size_t>(axis)];
    periods.push_back(pattern.at(end));
  }

  HamiltonianMatrix out;
  out.label_dim = d;
  const Window sites = d == 1 ? Window::line(0, sizes[0] - 1) : Window::box({0, 0}, {sizes[0] - 1, sizes[1] - 1});
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    out.labels.push_back(sites.label(i));
    pts.push_back(pattern.at(out.labels.back()));
  }
  out.entries = detail::assemble(pts, detail::ImageLattice(periods), hop);
  out.bc.kind = BoundaryCondition::Kind::PeriodicApproximant;
  out.bc.period = {sizes[0], d == 2 ? sizes[1] : 0};
  out.truncation_error = hop.truncation_error();
  return out;
}

inline HamiltonianMatrix build_bulk_pbc(const PatternSpec& spec, int size, const HoppingRule& hop) {
  return build_bulk_pbc(spec, {size, 1}, hop);
}

/// Dirichlet restriction to labels [k, far_end) along the cut axis; the other
/// axis of a 2D pattern stays periodic with period sizes[uncut].
inline HamiltonianMatrix build_half_space_to(const PatternSpec& raw_spec, int cut_axis, int k, int far_end,
                                             std::array<int, 2> sizes, const HoppingRule& hop) {
  hop.validate();
  const PatternSpec spec = normalized(raw_spec);
  const int d = spec.label_dim();
  if (cut_axis < 0 || cut_axis >= d) throw ValidationError("cut axis out of range");
  if (far_end <= k) throw ValidationError("half-space restriction is empty");
  const int uncut = 1 - cut_axis;
  if (d == 2) detail::require_commensurate(spec, uncut, sizes[static_cast<std::size_t>(uncut)]);

  Window gen;
  const int lo = std::min(0, k);
  const int hi = std::max(0, far_end - 1);
  if (d == 1) {
    gen = Window::line(lo, hi);
  } else {
    Label wlo{0, 0};
    Label whi{0, 0};
    wlo[static_cast<std::size_t>(cut_axis)] = lo;
    whi[static_cast<std::size_t>(cut_axis)] = hi;
    whi[static_cast<std::size_t>(uncut)] = sizes[static_cast<std::size_t>(uncut)];
    gen = Window::box(wlo, whi);
  }
  const PointPattern pattern = generate(spec, gen);

  std::vector<Vec3> periods;
  HamiltonianMatrix out;
  out.label_dim = d;
  Window sites;
  if (d == 1) {
    sites = Window::line(k, far_end - 1);
  } else {
    Label end{0, 0};
    end[static_cast<std::size_t>(uncut)] = sizes[static_cast<std::size_t>(uncut)];
    periods.push_back(pattern.at(end));
    Label slo{0, 0};
    Label shi{0, 0};
    slo[static_cast<std::size_t>(cut_axis)] = k;
    shi[static_cast<std::size_t>(cut_axis)] = far_end - 1;
    shi[static_cast<std::size_t>(uncut)] = sizes[static_cast<std::size_t>(uncut)] - 1;
    sites = Window::box(slo, shi);
    out.bc.period[static_cast<std::size_t>(uncut)] = sizes[static_cast<std::size_t>(uncut)];
  }
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    out.labels.push_back(sites.label(i));
    pts.push_back(pattern.at(out.labels.back()));
  }
  out.entries = detail::assemble(pts, detail::ImageLattice(periods), hop);
  out.bc.kind = BoundaryCondition::Kind::DirichletHalf;
  out.bc.cut_axis = cut_axis;
  out.bc.cut_offset = k;
  out.bc.far_end = far_end;
  out.truncation_error = hop.truncation_error();
  return out;
}

/// Half-space matrix with sizes[cut_axis] layers starting at the cut k.
inline HamiltonianMatrix build_half_space(const PatternSpec& spec, int cut_axis, int k, std::array<int, 2> sizes,
                                          const HoppingRule& hop) {
  const int depth = sizes[static_cast<std::size_t>(cut_axis < 0 || cut_axis > 1 ? 0 : cut_axis)];
  if (depth < 1) throw ValidationError("half-space restriction is empty");
  return build_half_space_to(spec, cut_axis, k, k + depth, sizes, hop);
}

inline HamiltonianMatrix build_half_space(const PatternSpec& spec, int k, int size, const HoppingRule& hop) {
  return build_half_space(spec, 0, k, {size, 1}, hop);
}

/// One half-space matrix per cut offset, in the order given.
inline std::vector<HamiltonianMatrix> build_bundle(const PatternSpec& spec, int cut_axis, const std::vector<int>& cuts,
                                                   std::array<int, 2> sizes, const HoppingRule& hop) {
  if (cuts.empty()) throw ValidationError("bundle needs at least one cut");
  std::vector<HamiltonianMatrix> out;
  out.reserve(cuts.size());
  for (int k : cuts) out.push_back(build_half_space(spec, cut_axis, k, sizes, hop));
  return out;
}

/// Coordinate-list dump of the nonzero entries, one "row col value" per line.
inline void write_matrix_coo(std::ostream& os, const HamiltonianMatrix& h) {
  char buf[64];
  os << "row,col,value\n";
  for (Eigen::Index i = 0; i < h.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.entries.cols(); ++j) {
      const double v = h.entries(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << i << ',' << j << ',' << buf << '\n';
    }
  }
}

}  // namespace dynpat
