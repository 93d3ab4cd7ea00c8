#pragma once

// Gap-label arithmetic: angle matrices, Pfaffian traces, integer label fits and
// the edge predicate.
//
// Labels are indexed by the even subsets J of the algebra generators {1..n},
// ordered by size and then lexicographically. For d-dimensional labels the
// generator list puts the hull generators first and the shift generators last,
// so a cut along label axis j (1-based) corresponds to generator n - d + j. In
// the 1D case a cut along the chain is generator 2.
//
// Pfaffian signs are kept as computed; the integer coefficients absorb them.
// For the 4x4 angle matrix with theta_13 = a and theta_24 = b the traces are
//   J = {}        -> 1
//   J = {1,3}     -> a
//   J = {2,4}     -> b
//   J = {1,2,3,4} -> -a b

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dynpat/errors.hpp"
#include "dynpat/pattern.hpp"
#include "dynpat/spectral.hpp"

namespace dynpat {

struct ThetaMatrix {
  Eigen::MatrixXd entries;
  PatternKind source = PatternKind::ExampleI;
  int label_dim = 1;

  [[nodiscard]] int size() const { return static_cast<int>(entries.rows()); }
};

inline ThetaMatrix make_theta(int n) {
  ThetaMatrix t;
  t.entries = Eigen::MatrixXd::Zero(n, n);
  return t;
}

inline void set_angle(ThetaMatrix& t, int i, int j, double v) {
  t.entries(i - 1, j - 1) = v;
  t.entries(j - 1, i - 1) = -v;
}

/// Angle matrix for a pattern kind. Two-circle hulls use alpha / (1 + alpha).
inline ThetaMatrix theta_for(const PatternSpec& raw_spec) {
  const PatternSpec spec = normalized(raw_spec);
  ThetaMatrix t;
  if (spec.label_dim() == 1) {
    t = make_theta(2);
    set_angle(t, 1, 2, rotation_number(spec, 0).value);
  } else {
    t = make_theta(4);
    set_angle(t, 1, 3, rotation_number(spec, 0).value);
    set_angle(t, 2, 4, rotation_number(spec, 1).value);
  }
  t.source = spec.kind;
  t.label_dim = spec.label_dim();
  return t;
}

/// Pfaffian by expansion along the first row; the empty matrix has Pfaffian 1.
inline double pfaffian(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("Pfaffian needs a square matrix");
  const Eigen::Index n = m.rows();
  if (n % 2 != 0) throw ValidationError("Pfaffian needs an even-sized matrix");
  if (n == 0) return 1.0;
  if (n == 2) return m(0, 1);
  double total = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    if (m(0, j) == 0.0) continue;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 1; k < n; ++k) {
      if (k != j) keep.push_back(k);
    }
    const auto s = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd minor(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = 0; b < s; ++b) {
        minor(a, b) = m(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
      }
    }
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * m(0, j) * pfaffian(minor);
  }
  return total;
}

using Subset = std::vector<int>;  // 1-based generator indices, ascending

/// Even-cardinality subsets of {1..n}, by size then lexicographic.
inline std::vector<Subset> even_subsets(int n) {
  std::vector<Subset> out;
  for (int k = 0; k <= n; k += 2) {
    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
      Subset s;
      for (int i = 0; i < n; ++i) {
        if (pick[static_cast<std::size_t>(i)]) s.push_back(i + 1);
      }
      out.push_back(s);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

inline std::string subset_name(const Subset& s) {
  if (s.empty()) return "c_empty";
  std::string out = "c_";
  for (int i : s) out += std::to_string(i);
  return out;
}

/// Pfaffian of the principal submatrix on J.
inline double subset_trace(const ThetaMatrix& t, const Subset& s) {
  const auto k = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      sub(a, b) = t.entries(s[static_cast<std::size_t>(a)] - 1, s[static_cast<std::size_t>(b)] - 1);
    }
  }
  return pfaffian(sub);
}

struct LabelTuple {
  std::vector<Subset> subsets;
  std::vector<int> coeffs;  // aligned with subsets
  double value = 0.0;
  double residual = 0.0;

  [[nodiscard]] int coeff(const Subset& s) const {
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      if (subsets[i] == s) return coeffs[i];
    }
    return 0;
  }
  [[nodiscard]] int l1() const {
    int sum = 0;
    for (int c : coeffs) sum += std::abs(c);
    return sum;
  }
};

namespace detail {

struct TraceBasis {
  std::vector<Subset> all;           // every even subset, fixed order
  std::vector<std::size_t> active;   // positions with nonzero trace
  std::vector<double> traces;        // trace per active position
};

inline TraceBasis trace_basis(const ThetaMatrix& t) {
  TraceBasis b;
  b.all = even_subsets(t.size());
  for (std::size_t i = 0; i < b.all.size(); ++i) {
    const double tr = subset_trace(t, b.all[i]);
    if (tr != 0.0) {
      b.active.push_back(i);
      b.traces.push_back(tr);
    }
  }
  return b;
}

/// Visits every coefficient vector over the active subsets with |c| <= max_coeff.
/// The constant term c_empty (always active, first) ranges over |c| <=
/// max(max_coeff, n_degrees) so the integers 0..N are always reachable.
template <class Fn>
void for_each_tuple(const TraceBasis& b, int max_coeff, int n_degrees, Fn&& fn) {
  const std::size_t k = b.active.size();
  std::vector<int> bound(k, max_coeff);
  if (k > 0 && b.active[0] == 0) bound[0] = std::max(max_coeff, n_degrees);
  std::vector<int> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = -bound[i];
  if (k == 0) {
    fn(c, 0.0);
    return;
  }
  for (;;) {
    double v = 0.0;
    for (std::size_t i = 0; i < k; ++i) v += c[i] * b.traces[i];
    fn(c, v);
    std::size_t i = 0;
    while (i < k && c[i] == bound[i]) {
      c[i] = -bound[i];
      ++i;
    }
    if (i == k) return;
    ++c[i];
  }
}

inline LabelTuple expand(const TraceBasis& b, const std::vector<int>& active_coeffs, double value) {
  LabelTuple t;
  t.subsets = b.all;
  t.coeffs.assign(b.all.size(), 0);
  for (std::size_t i = 0; i < b.active.size(); ++i) t.coeffs[b.active[i]] = active_coeffs[i];
  t.value = value;
  return t;
}

}  // namespace detail

struct PredictedValue {
  double value = 0.0;
  std::vector<LabelTuple> tuples;
};

inline constexpr double kValueMergeTolerance = 1e-12;

/// All values sum_J c_J Pf(Theta_J) with |c_J| <= max_coeff inside [0, N]
/// (the constant term may also reach N),
/// grouping tuples whose values agree to 1e-12. Subsets whose Pfaffian
/// vanishes contribute nothing and are held at coefficient 0.
inline std::vector<PredictedValue> predicted_ids_set(const ThetaMatrix& t, int max_coeff, int n_degrees = 1) {
  if (max_coeff < 0) throw ValidationError("max_coeff must be >= 0");
  const auto basis = detail::trace_basis(t);
  std::vector<LabelTuple> hits;
  detail::for_each_tuple(basis, max_coeff, n_degrees, [&](const std::vector<int>& c, double v) {
    if (v >= -kValueMergeTolerance && v <= n_degrees + kValueMergeTolerance) {
      hits.push_back(detail::expand(basis, c, v));
    }
  });
  std::sort(hits.begin(), hits.end(), [](const LabelTuple& a, const LabelTuple& b) { return a.value < b.value; });
  std::vector<PredictedValue> out;
  for (auto& h : hits) {
    if (!out.empty() && std::abs(h.value - out.back().value) <= kValueMergeTolerance) {
      out.back().tuples.push_back(std::move(h));
    } else {
      out.push_back({h.value, {std::move(h)}});
    }
  }
  for (auto& p : out) {
    std::sort(p.tuples.begin(), p.tuples.end(), [](const LabelTuple& a, const LabelTuple& b) {
      if (a.l1() != b.l1()) return a.l1() < b.l1();
      return a.coeffs < b.coeffs;
    });
  }
  return out;
}

struct LabelFit {
  LabelTuple best;
  std::vector<LabelTuple> alternatives;  // every tuple tied with the best residual
  bool ambiguous = false;
};

inline constexpr int kDefaultMaxCoeff = 5;
inline constexpr double kDefaultFitTolerance = 1e-6;
inline constexpr double kResidualTie = 1e-12;

/// Tuple minimizing |ids - sum c_J Pf(Theta_J)|; ties (within 1e-12) go to the
/// smallest sum |c_J| and then to the lexicographically smallest coefficients.
inline LabelFit fit_labels(double ids, const ThetaMatrix& t, int max_coeff = kDefaultMaxCoeff,
                           double tol = kDefaultFitTolerance, int n_degrees = 1) {
  if (!(tol > 0.0)) throw ValidationError("fit tolerance must be > 0");
  if (max_coeff < 0) throw ValidationError("max_coeff must be >= 0");
  if (!(ids >= -tol && ids <= n_degrees + tol)) throw ValidationError("IDS value outside [0, N]");
  const auto basis = detail::trace_basis(t);
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<LabelTuple> pool;
  detail::for_each_tuple(basis, max_coeff, n_degrees, [&](const std::vector<int>& c, double v) {
    const double r = std::abs(ids - v);
    if (r > tol || r > best_residual + kResidualTie) return;
    if (r < best_residual - kResidualTie) {
      // drop candidates that are no longer tied with the best
      pool.erase(std::remove_if(pool.begin(), pool.end(),
                                [&](const LabelTuple& x) { return x.residual > r + kResidualTie; }),
                 pool.end());
    }
    best_residual = std::min(best_residual, r);
    LabelTuple lt = detail::expand(basis, c, v);
    lt.residual = r;
    pool.push_back(std::move(lt));
  });
  if (pool.empty()) {
    throw NumericalError("no label tuple within tolerance " + std::to_string(tol) + " of IDS " +
                         std::to_string(ids));
  }
  std::sort(pool.begin(), pool.end(), [](const LabelTuple& a, const LabelTuple& b) {
    if (a.l1() != b.l1()) return a.l1() < b.l1();
    return a.coeffs < b.coeffs;
  });
  LabelFit fit;
  fit.best = pool.front();
  fit.alternatives = std::move(pool);
  fit.ambiguous = fit.alternatives.size() > 1;
  return fit;
}

/// Algebra generator index (1-based) of a cut along label axis `axis` (1-based).
inline int cut_generator(const ThetaMatrix& t, int axis) { return t.size() - t.label_dim + axis; }

struct EdgePrediction {
  bool edge = false;
  bool conjectural = false;
  std::string reason;
};

inline EdgePrediction predict_edge(const LabelTuple& label, int cut_generator_index, PatternKind kind) {
  EdgePrediction p;
  if (kind == PatternKind::CutProject) {
    p.reason = "hull is a Cantor set; its K1 group is trivial, so no topological edge spectrum";
    return p;
  }
  for (std::size_t i = 0; i < label.subsets.size(); ++i) {
    const auto& s = label.subsets[i];
    if (label.coeffs[i] != 0 && std::find(s.begin(), s.end(), cut_generator_index) != s.end()) {
      p.edge = true;
      p.reason = subset_name(s) + " = " + std::to_string(label.coeffs[i]) + " involves cut generator " +
                 std::to_string(cut_generator_index);
      break;
    }
  }
  if (!p.edge) {
    p.reason = "no nonzero coefficient involves cut generator " + std::to_string(cut_generator_index);
  }
  if (kind == PatternKind::IdealBilayer) {
    p.conjectural = true;
    p.reason += " (ideal bilayer K-theory is conjectural)";
  }
  return p;
}

struct ContinuityResult {
  double slope = 0.0;
  double intercept = 0.0;
  int slope_int = 0;
  int intercept_int = 0;
  double residual = 0.0;  // max |ids - (n + m theta)| over the track
  bool ok = false;
};

inline constexpr double kContinuityTolerance = 1e-6;

/// Least-squares line through (theta, ids); the integer-rounded line must fit
/// every point to 1e-6.
inline ContinuityResult label_continuity(std::span<const double> theta, std::span<const double> ids) {
  if (theta.size() != ids.size()) throw ValidationError("theta and ids must have equal length");
  if (theta.size() < 3) throw ValidationError("gap track too short for a continuity check");
  const auto n = static_cast<double>(theta.size());
  const double mx = std::accumulate(theta.begin(), theta.end(), 0.0) / n;
  const double my = std::accumulate(ids.begin(), ids.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    sxx += (theta[i] - mx) * (theta[i] - mx);
    sxy += (theta[i] - mx) * (ids[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("gap track needs distinct frequencies");
  ContinuityResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.slope_int = static_cast<int>(std::lround(r.slope));
  r.intercept_int = static_cast<int>(std::lround(r.intercept));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    r.residual = std::max(r.residual, std::abs(ids[i] - (r.intercept_int + r.slope_int * theta[i])));
  }
  r.ok = r.residual < kContinuityTolerance;
  return r;
}

/// Checks the rounded line against a fitted label (c_empty, c_12).
inline bool continuity_matches(const ContinuityResult& r, const LabelTuple& label) {
  return r.ok && label.coeff({}) == r.intercept_int && label.coeff({1, 2}) == r.slope_int;
}

struct GapTrack {
  std::vector<std::size_t> point;  // sweep point index per step
  std::vector<GapRecord> gaps;
};

/// Links gaps of consecutive sweep points whose energy intervals overlap. A gap
/// continues the track whose last gap it overlaps the most.
inline std::vector<GapTrack> track_gaps(std::span<const std::vector<GapRecord>> per_point) {
  std::vector<GapTrack> done;
  std::vector<GapTrack> open;
  for (std::size_t i = 0; i < per_point.size(); ++i) {
    std::vector<GapTrack> next;
    std::vector<bool> used(open.size(), false);
    for (const auto& g : per_point[i]) {
      double best = 0.0;
      std::size_t pick = open.size();
      for (std::size_t t = 0; t < open.size(); ++t) {
        if (used[t]) continue;
        const GapRecord& last = open[t].gaps.back();
        const double overlap = std::min(last.gap_hi, g.gap_hi) - std::max(last.gap_lo, g.gap_lo);
        if (overlap > best) {
          best = overlap;
          pick = t;
        }
      }
      GapTrack track;
      if (pick < open.size()) {
        used[pick] = true;
        track = open[pick];
      }
      track.point.push_back(i);
      track.gaps.push_back(g);
      next.push_back(std::move(track));
    }
    for (std::size_t t = 0; t < open.size(); ++t) {
      if (!used[t]) done.push_back(std::move(open[t]));
    }
    open = std::move(next);
  }
  for (auto& t : open) done.push_back(std::move(t));
  std::stable_sort(done.begin(), done.end(), [](const GapTrack& a, const GapTrack& b) {
    if (a.point.front() != b.point.front()) return a.point.front() < b.point.front();
    return a.gaps.front().gap_lo < b.gaps.front().gap_lo;
  });
  return done;
}

}  // namespace dynpat
