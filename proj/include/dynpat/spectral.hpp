#pragma once

// Exact diagonalization, integrated density of states and butterfly sweeps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dynpat/errors.hpp"
#include "dynpat/hamiltonian.hpp"
#include "dynpat/parallel.hpp"
#include "dynpat/pattern.hpp"
#include "dynpat/rational.hpp"

namespace dynpat {

struct EigenSystem {
  std::vector<double> values;  // ascending
  Eigen::MatrixXd vectors;     // column i pairs with values[i]; empty unless requested
};

inline constexpr double kResidualTolerance = 1e-8;

/// Dense symmetric eigensolve. The residual |Hv - lv| is spot-checked on the
/// lowest, middle and highest eigenpairs against 1e-8 |H|.
inline EigenSystem eigen_sym(const Eigen::MatrixXd& h, bool keep_vectors = false) {
  if (h.rows() != h.cols()) throw ValidationError("eigensolver needs a square matrix");
  if (h.rows() == 0) return {};
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < h.cols(); ++j) {
      if (h(i, j) != h(j, i)) throw ValidationError("eigensolver needs a symmetric matrix");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXd& vec = es.eigenvectors();
  const double norm = std::max(std::abs(lam[0]), std::abs(lam[lam.size() - 1]));
  for (Eigen::Index i : {Eigen::Index{0}, lam.size() / 2, lam.size() - 1}) {
    const double residual = (h * vec.col(i) - lam[i] * vec.col(i)).norm();
    if (!(residual <= kResidualTolerance * std::max(norm, 1e-300))) {
      throw NumericalError("eigenpair residual " + std::to_string(residual) + " exceeds tolerance");
    }
  }
  EigenSystem out;
  out.values.assign(lam.data(), lam.data() + lam.size());
  if (keep_vectors) out.vectors = vec;
  return out;
}

inline EigenSystem eigen_sym(const HamiltonianMatrix& h, bool keep_vectors = false) {
  return eigen_sym(h.entries, keep_vectors);
}

inline std::vector<double> eigvals_sym(const HamiltonianMatrix& h) { return eigen_sym(h.entries).values; }
inline std::vector<double> eigvals_sym(const Eigen::MatrixXd& h) { return eigen_sym(h).values; }

struct SpectrumRecord {
  std::vector<Rational> alpha;
  int omega_index = 0;
  HullPoint omega{0.0, 0.0};
  std::vector<double> eigenvalues;  // ascending
  int dim = 0;
  BoundaryCondition bc;
};

/// Fraction of sorted eigenvalues <= e.
inline double ids_at(double e, std::span<const double> sorted) {
  if (sorted.empty()) return 0.0;
  const auto count = std::upper_bound(sorted.begin(), sorted.end(), e) - sorted.begin();
  return static_cast<double>(count) / static_cast<double>(sorted.size());
}

inline double ids_at(double e, const SpectrumRecord& s) { return ids_at(e, s.eigenvalues); }

/// Multiset union of several spectra, ascending.
inline std::vector<double> merge(std::span<const SpectrumRecord> records) {
  std::vector<double> out;
  for (const auto& r : records) out.insert(out.end(), r.eigenvalues.begin(), r.eigenvalues.end());
  std::sort(out.begin(), out.end());
  return out;
}

struct GapRecord {
  double gap_lo = 0.0;
  double gap_hi = 0.0;
  double ids = 0.0;
  double width = 0.0;
  std::string key;  // sweep point the gap belongs to

  [[nodiscard]] double mid() const { return 0.5 * (gap_lo + gap_hi); }
};

inline constexpr double kDefaultMinWidth = 0.01;

/// Gaps between consecutive eigenvalues at least min_width * span wide, with
/// the IDS taken at each gap's midpoint. Sorted by energy.
inline std::vector<GapRecord> detect_gaps(std::span<const double> sorted, double min_width,
                                          const std::string& key = {}) {
  if (!(min_width > 0.0 && min_width < 1.0)) throw ValidationError("min_width must lie in (0, 1)");
  std::vector<GapRecord> out;
  if (sorted.size() < 2) return out;
  const double span = sorted.back() - sorted.front();
  if (!(span > 0.0)) return out;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double w = sorted[i] - sorted[i - 1];
    if (w >= min_width * span) {
      GapRecord g;
      g.gap_lo = sorted[i - 1];
      g.gap_hi = sorted[i];
      g.width = w;
      g.ids = ids_at(g.mid(), sorted);
      g.key = key;
      out.push_back(g);
    }
  }
  return out;
}

/// Site count per axis for a rotation-number denominator q: the smallest
/// multiple of q that is at least min_periods * q and whose d-th power reaches
/// the floor.
struct SizeRule {
  int floor = 100;
  int min_periods = 1;

  [[nodiscard]] int sites_for(std::int64_t q, int label_dim) const {
    if (q < 1) throw ValidationError("denominator must be positive");
    std::int64_t l = q * std::max(1, min_periods);
    auto reaches = [&](std::int64_t v) { return label_dim == 1 ? v >= floor : v * v >= floor; };
    while (!reaches(l)) l += q;
    return static_cast<int>(l);
  }
};

/// ω samples (u + j)/M inside the cell [0, L_hull/q) that one orbit step
/// tiles; the second hull coordinate uses a golden-ratio sequence.
inline std::vector<HullPoint> omega_grid(const PatternSpec& raw_spec, int samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError("need at least one omega sample");
  const PatternSpec spec = normalized(raw_spec);
  std::mt19937_64 rng(seed);
  const double u0 = detail::unit_draw(rng);
  const double u1 = detail::unit_draw(rng);
  std::array<double, 2> cell{1.0, 1.0};
  for (int axis = 0; axis < spec.label_dim(); ++axis) {
    const Frequency rho = rotation_number(spec, axis);
    const double len = hull_length(spec, axis);
    cell[static_cast<std::size_t>(axis)] = rho.exact ? len / static_cast<double>(rho.exact->den) : len;
  }
  std::vector<HullPoint> out;
  const double golden = std::numbers::phi - 1.0;
  for (int j = 0; j < samples; ++j) {
    HullPoint w{(u0 + j) / samples * cell[0], 0.0};
    if (spec.label_dim() == 2) w[1] = detail::wrap(u1 + j * golden, 1.0) * cell[1];
    out.push_back(w);
  }
  return out;
}

struct SweepConfig {
  PatternSpec pattern;
  HoppingRule hopping;
  int q_max = 8;
  SizeRule sizes;
  int omega_samples = 8;
  std::uint64_t seed = 1;
  int parallelism = 1;
  double min_width = kDefaultMinWidth;
};

struct SweepPoint {
  Rational alpha;     // frequency used on every swept axis
  Rational rotation;  // alpha / hull length
  int size = 0;       // sites per axis
  std::vector<SpectrumRecord> records;  // one per omega sample
  std::vector<double> merged;
  std::vector<GapRecord> gaps;
  double truncation_error = 0.0;
};

/// Frequencies visited by a sweep. For circle hulls these are the reduced
/// fractions with q <= q_max; for two-circle hulls the rotation number runs over
/// those fractions and the frequency is rho / (1 - rho), kept when in (0, 1).
inline std::vector<std::pair<Rational, Rational>> sweep_frequencies(const PatternSpec& spec, int q_max) {
  if (q_max < 2) throw ValidationError("q_max must be at least 2");
  std::vector<std::pair<Rational, Rational>> out;
  for (const Rational& f : reduced_fractions(q_max)) {
    if (spec.two_circle_hull()) {
      if (f.num == 0 || 2 * f.num >= f.den) continue;
      out.emplace_back(Rational(f.num, f.den - f.num), f);
    } else {
      out.emplace_back(f, f);
    }
  }
  return out;
}

namespace detail {

inline PatternSpec with_frequency(PatternSpec spec, const Rational& a) {
  for (auto& f : spec.alpha) f = Frequency::rational(a);
  if (spec.label_dim() == 2 && spec.alpha.size() == 1) spec.alpha.push_back(spec.alpha[0]);
  return spec;
}

}  // namespace detail

/// Spectra at a list of frequencies, each merged over the omega grid. Points
/// keep the order given and records are ordered by omega index, whatever the
/// parallelism.
inline std::vector<SweepPoint> spectra_at(const SweepConfig& cfg, const std::vector<Rational>& alphas,
                                          const std::vector<int>& sizes) {
  if (alphas.size() != sizes.size()) throw ValidationError("one size per frequency expected");
  std::vector<SweepPoint> points(alphas.size());
  std::vector<PatternSpec> specs;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    specs.push_back(normalized(detail::with_frequency(cfg.pattern, alphas[i])));
    points[i].alpha = alphas[i];
    points[i].rotation = *rotation_number(specs[i]).exact;
    points[i].size = sizes[i];
    points[i].records.resize(static_cast<std::size_t>(cfg.omega_samples));
    points[i].truncation_error = cfg.hopping.truncation_error();
  }
  const auto m = static_cast<std::size_t>(cfg.omega_samples);
  std::vector<std::vector<HullPoint>> grids;
  for (const auto& s : specs) grids.push_back(omega_grid(s, cfg.omega_samples, cfg.seed));

  parallel_for(points.size() * m, cfg.parallelism, [&](std::size_t task) {
    const std::size_t i = task / m;
    const std::size_t j = task % m;
    PatternSpec spec = specs[i];
    spec.omega = grids[i][j];
    const int l = points[i].size;
    const HamiltonianMatrix h = build_bulk_pbc(spec, {l, spec.label_dim() == 2 ? l : 1}, cfg.hopping);
    SpectrumRecord& rec = points[i].records[j];
    rec.alpha.assign(static_cast<std::size_t>(spec.label_dim()), alphas[i]);
    rec.omega_index = static_cast<int>(j);
    rec.omega = spec.omega;
    rec.eigenvalues = eigvals_sym(h);
    rec.dim = h.dim();
    rec.bc = h.bc;
  });

  for (auto& p : points) {
    p.merged = merge(p.records);
    p.gaps = detect_gaps(p.merged, cfg.min_width, p.alpha.str());
  }
  return points;
}

/// Butterfly sweep over every reduced frequency with denominator <= q_max,
/// ordered by (q, p) of the swept rotation number.
inline std::vector<SweepPoint> butterfly_sweep(const SweepConfig& cfg) {
  normalized(cfg.pattern.two_circle_hull() ? detail::with_frequency(cfg.pattern, Rational(1, 2)) : cfg.pattern);
  std::vector<Rational> alphas;
  std::vector<int> sizes;
  for (const auto& [alpha, rho] : sweep_frequencies(cfg.pattern, cfg.q_max)) {
    alphas.push_back(alpha);
    sizes.push_back(cfg.sizes.sites_for(rho.den, cfg.pattern.label_dim()));
  }
  return spectra_at(cfg, alphas, sizes);
}

}  // namespace dynpat
