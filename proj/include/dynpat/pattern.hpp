#pragma once

// Dynamically generated point patterns over Z^d (d = 1, 2).
//
// A pattern is produced from a rotation on a flat hull together with one
// generator function per signed lattice direction:
//
//   p_0 = 0,   p_{n+e} = p_n + Gamma_e(tau_n omega).
//
// Hull coordinates are flat: [0, 1) for the circle/torus kinds, and
// [0, 1 + alpha) for the two-circle kinds (ExampleII, ExampleIV, IdealBilayer),
// where the large circle has length 1 and the small circle length alpha. In
// the two-circle layout the small circle occupies (0, alpha] and the large
// circle (alpha, 1 + alpha], so the crossing J sits at 0 and J' at alpha.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "dynpat/errors.hpp"
#include "dynpat/rational.hpp"

namespace dynpat {

enum class PatternKind { ExampleI, ExampleII, ExampleIII, ExampleIV, CutProject, IdealBilayer };

inline std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::ExampleI: return "ExampleI";
    case PatternKind::ExampleII: return "ExampleII";
    case PatternKind::ExampleIII: return "ExampleIII";
    case PatternKind::ExampleIV: return "ExampleIV";
    case PatternKind::CutProject: return "CutProject";
    case PatternKind::IdealBilayer: return "IdealBilayer";
  }
  return "?";
}

inline PatternKind parse_kind(std::string_view name) {
  for (auto k : {PatternKind::ExampleI, PatternKind::ExampleII, PatternKind::ExampleIII,
                 PatternKind::ExampleIV, PatternKind::CutProject, PatternKind::IdealBilayer}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown pattern kind '" + std::string(name) + "'");
}

/// Rotation frequency in [0, 1). Rational frequencies keep their exact value so
/// that orbits close exactly on the hull.
struct Frequency {
  double value = 0.0;
  std::optional<Rational> exact;

  static Frequency rational(Rational q) { return {q.value(), q}; }
  static Frequency rational(std::int64_t p, std::int64_t q) { return rational(Rational(p, q)); }
  static Frequency real(double v) { return {v, std::nullopt}; }
};

using Vec3 = Eigen::Vector3d;
using Label = std::array<int, 2>;
using HullPoint = std::array<double, 2>;

/// Signed lattice generator sign * e_{axis+1}.
struct Generator {
  int axis = 0;
  int sign = 1;
};

struct PatternSpec {
  PatternKind kind = PatternKind::ExampleI;
  std::vector<Frequency> alpha{Frequency::real(0.0)};
  double r = 0.4;
  double g = 0.01;
  double delta = 0.2;
  double delta_prime = 0.4;
  double spacing_a = 1.0;
  double spacing_b = 0.618;
  HullPoint omega{0.0, 0.0};

  [[nodiscard]] int label_dim() const {
    return (kind == PatternKind::ExampleIII || kind == PatternKind::ExampleIV) ? 2 : 1;
  }

  [[nodiscard]] int ambient_dim() const {
    switch (kind) {
      case PatternKind::ExampleI:
      case PatternKind::CutProject: return 1;
      case PatternKind::ExampleII:
      case PatternKind::IdealBilayer:
      case PatternKind::ExampleIII: return 2;
      case PatternKind::ExampleIV: return 3;
    }
    return 1;
  }

  /// True for the kinds whose hull is two glued circles of lengths 1 and alpha.
  [[nodiscard]] bool two_circle_hull() const {
    return kind == PatternKind::ExampleII || kind == PatternKind::ExampleIV ||
           kind == PatternKind::IdealBilayer;
  }
};

namespace detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces x into [0, period).
inline double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

inline double hull_length(const PatternSpec& spec, int axis) {
  const Frequency& a = spec.alpha[static_cast<std::size_t>(axis)];
  if (!spec.two_circle_hull()) return 1.0;
  if (a.exact) return static_cast<double>(a.exact->den + a.exact->num) /
                      static_cast<double>(a.exact->den);
  return 1.0 + a.value;
}

/// n * alpha reduced modulo the hull length, exact for rational alpha.
inline double orbit_offset(const PatternSpec& spec, int axis, std::int64_t n) {
  const Frequency& a = spec.alpha[static_cast<std::size_t>(axis)];
  const double length = hull_length(spec, axis);
  if (a.exact) {
    const std::int64_t p = a.exact->num;
    const std::int64_t q = a.exact->den;
    const std::int64_t modulus = spec.two_circle_hull() ? q + p : q;
    std::int64_t rem = (n % modulus) * p % modulus;
    if (rem < 0) rem += modulus;
    return static_cast<double>(rem) / static_cast<double>(q);
  }
  return wrap(static_cast<double>(n) * a.value, length);
}

inline double rotate_axis(const PatternSpec& spec, int axis, double x, std::int64_t n) {
  return wrap(x + orbit_offset(spec, axis, n), hull_length(spec, axis));
}

inline Label unit(int axis, int sign) {
  Label e{0, 0};
  e[static_cast<std::size_t>(axis)] = sign;
  return e;
}

/// Small-circle membership for the ideal step profiles. Orbit points that hit a
/// crossing exactly may land a rounding error to either side of it; they are
/// assigned as if exact (J large, J' small).
inline constexpr double kCrossingTolerance = 1e-12;

inline bool on_small_circle(double t, double alpha) {
  return t > kCrossingTolerance && t <= alpha + kCrossingTolerance;
}

/// Vertical profile of the two-circle loop (1D bilayer kinds), evaluated on the
/// representative window centred on the small circle.
inline double curve_height(const PatternSpec& spec, double t) {
  const double alpha = spec.alpha[0].value;
  const double length = hull_length(spec, 0);
  if (spec.g == 0.0) return on_small_circle(t, alpha) ? -0.5 * spec.delta : 0.5 * spec.delta;
  if (t >= 0.5 * alpha + 0.5 * length) t -= length;
  const double g = spec.g;
  const double gp = std::pow(g, 1.1);
  return 0.5 * spec.delta *
         (std::tanh((t + 1.0) / g) - std::tanh((t - gp) / g) + std::tanh((t - alpha) / g));
}

/// One-axis factor of the ExampleIV surface, in the coordinate where the large
/// circle is (0, 1) and the small circle (1, 1 + alpha).
inline double surface_profile(const PatternSpec& spec, int axis, double x) {
  const double alpha = spec.alpha[static_cast<std::size_t>(axis)].value;
  const double u = wrap(x + 1.0, hull_length(spec, axis));
  if (spec.g == 0.0) return on_small_circle(wrap(x, hull_length(spec, axis)), alpha) ? -1.0 : 1.0;
  const double g = spec.g;
  const double gp = std::pow(g, 1.1);
  return std::tanh(u / g) - std::tanh((u - 1.0 - gp) / g) + std::tanh((u - 1.0 - alpha) / g);
}

inline double surface_height(const PatternSpec& spec, const HullPoint& w) {
  const double outer = (2.0 * spec.delta + spec.delta_prime) / 4.0;
  const double inner = spec.delta_prime / 4.0;
  return outer * surface_profile(spec, 0, w[0]) - inner * surface_profile(spec, 1, w[1]);
}

/// Horizontal step on a two-circle hull: min{alpha, d_+(x'), d_-(x')} where x'
/// is the landing point and d_+/- the distances to J' in either direction.
inline double two_circle_step(const PatternSpec& spec, int axis, double landed) {
  const double alpha = spec.alpha[static_cast<std::size_t>(axis)].value;
  const double length = hull_length(spec, axis);
  const double d_plus = wrap(alpha - landed, length);
  const double d_minus = wrap(landed - alpha, length);
  return std::min({alpha, d_plus, d_minus});
}

inline double sine_step(const PatternSpec& spec, double from, double to) {
  return 1.0 + spec.r * (std::sin(kTwoPi * to) - std::sin(kTwoPi * from));
}

/// Gamma_{+e_axis}(omega).
inline Vec3 forward_gamma(const PatternSpec& spec, int axis, const HullPoint& w) {
  const double x = w[static_cast<std::size_t>(axis)];
  const double landed = rotate_axis(spec, axis, x, 1);
  Vec3 out = Vec3::Zero();
  switch (spec.kind) {
    case PatternKind::ExampleI:
    case PatternKind::ExampleIII:
      out[axis] = sine_step(spec, x, landed);
      break;
    case PatternKind::CutProject:
      // the orbit wraps past the hull origin exactly when the Sturmian bit is 1
      out[0] = landed < x ? spec.spacing_b : spec.spacing_a;
      break;
    case PatternKind::ExampleII:
    case PatternKind::IdealBilayer:
      out[0] = two_circle_step(spec, 0, landed);
      out[1] = curve_height(spec, landed) - curve_height(spec, x);
      break;
    case PatternKind::ExampleIV: {
      HullPoint moved = w;
      moved[static_cast<std::size_t>(axis)] = landed;
      out[axis] = two_circle_step(spec, axis, landed);
      out[2] = surface_height(spec, moved) - surface_height(spec, w);
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Validates a spec and returns its normalized form: omega reduced onto the
/// hull, a single frequency duplicated for the 2D kinds, and g forced to 0 for
/// IdealBilayer.
inline PatternSpec normalized(PatternSpec spec) {
  const int d = spec.label_dim();
  if (spec.alpha.empty()) throw ValidationError("pattern spec needs at least one frequency");
  if (d == 2 && spec.alpha.size() == 1) spec.alpha.push_back(spec.alpha[0]);
  if (static_cast<int>(spec.alpha.size()) != d) {
    throw ValidationError(std::string(to_string(spec.kind)) + " takes " + std::to_string(d) +
                          " frequency value(s)");
  }
  for (const auto& a : spec.alpha) {
    if (!std::isfinite(a.value) || a.value < 0.0 || a.value >= 1.0) {
      throw ValidationError("frequency must lie in [0, 1)");
    }
    if (spec.two_circle_hull() && a.value <= 0.0) {
      throw ValidationError("two-circle hull needs a positive small-circle length");
    }
  }
  if (spec.kind == PatternKind::ExampleI || spec.kind == PatternKind::ExampleIII) {
    if (!(spec.r >= 0.0 && spec.r < 0.5)) throw ValidationError("amplitude r must satisfy 0 <= r < 1/2");
  }
  if (spec.kind == PatternKind::IdealBilayer) spec.g = 0.0;
  if (!(spec.g >= 0.0) || !std::isfinite(spec.g)) throw ValidationError("smoothing g must be >= 0");
  if (!std::isfinite(spec.delta) || !std::isfinite(spec.delta_prime)) {
    throw ValidationError("layer separations must be finite");
  }
  if (spec.kind == PatternKind::CutProject && !(spec.spacing_a > 0.0 && spec.spacing_b > 0.0)) {
    throw ValidationError("cut-and-project spacings must be positive");
  }
  for (int axis = 0; axis < 2; ++axis) {
    auto& w = spec.omega[static_cast<std::size_t>(axis)];
    if (!std::isfinite(w)) throw ValidationError("omega must be finite");
    w = axis < d || (spec.kind == PatternKind::ExampleIV) ? detail::wrap(w, detail::hull_length(spec, std::min(axis, d - 1))) : 0.0;
  }
  return spec;
}

/// Flat-hull circumference along one axis.
inline double hull_length(const PatternSpec& spec, int axis = 0) { return detail::hull_length(spec, axis); }

/// Rotation number alpha / hull_length; exact when alpha is rational.
inline Frequency rotation_number(const PatternSpec& spec, int axis = 0) {
  const Frequency& a = spec.alpha[static_cast<std::size_t>(axis)];
  if (!spec.two_circle_hull()) return a;
  if (a.exact) return Frequency::rational(a.exact->num, a.exact->den + a.exact->num);
  return Frequency::real(a.value / (1.0 + a.value));
}

/// tau_n omega.
inline HullPoint rotate(const PatternSpec& spec, const HullPoint& omega, const Label& n) {
  HullPoint out = omega;
  for (int axis = 0; axis < spec.label_dim(); ++axis) {
    const auto a = static_cast<std::size_t>(axis);
    out[a] = detail::rotate_axis(spec, axis, omega[a], n[a]);
  }
  return out;
}

/// Gamma_e(omega) for a signed generator. Gamma_{-e} is defined through the
/// inverse relation Gamma_{-e} = -Gamma_e o tau_{-e}.
inline Vec3 gamma(const PatternSpec& spec, Generator e, const HullPoint& omega) {
  if (e.axis < 0 || e.axis >= spec.label_dim() || (e.sign != 1 && e.sign != -1)) {
    throw ValidationError("generator (" + std::to_string(e.sign) + " e_" + std::to_string(e.axis + 1) +
                          ") is not defined for " + std::string(to_string(spec.kind)));
  }
  if (e.sign > 0) return detail::forward_gamma(spec, e.axis, omega);
  return -detail::forward_gamma(spec, e.axis, rotate(spec, omega, detail::unit(e.axis, -1)));
}

inline std::vector<Generator> generators(int label_dim) {
  std::vector<Generator> out;
  for (int axis = 0; axis < label_dim; ++axis) {
    out.push_back({axis, 1});
    out.push_back({axis, -1});
  }
  return out;
}

struct ConsistencyReport {
  double max_residual = 0.0;
  std::size_t samples = 0;
  bool passed = true;
};

inline constexpr double kConsistencyTolerance = 1e-12;

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Checks both generator relations at pseudorandom hull points. The commutation
/// relation is checked for generators along different axes (for e' = +-e it
/// reduces to the inverse relation).
inline ConsistencyReport check_consistency(const PatternSpec& raw_spec, std::size_t samples,
                                           std::uint64_t seed = 0x5eedULL) {
  if (samples < 1) throw ValidationError("consistency check needs at least one sample");
  const PatternSpec spec = normalized(raw_spec);
  const int d = spec.label_dim();
  const auto gens = generators(d);
  std::mt19937_64 rng(seed);
  ConsistencyReport report;
  report.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    HullPoint w{0.0, 0.0};
    for (int axis = 0; axis < d; ++axis) {
      w[static_cast<std::size_t>(axis)] = detail::unit_draw(rng) * hull_length(spec, axis);
    }
    for (const auto& e : gens) {
      const Label ue = detail::unit(e.axis, e.sign);
      const Label back = detail::unit(e.axis, -e.sign);
      const Vec3 inverse =
          gamma(spec, {e.axis, -e.sign}, w) + gamma(spec, e, rotate(spec, w, back));
      report.max_residual = std::max(report.max_residual, inverse.cwiseAbs().maxCoeff());
      for (const auto& f : gens) {
        if (f.axis == e.axis) continue;
        const Label uf = detail::unit(f.axis, f.sign);
        const Vec3 lhs = gamma(spec, f, w) + gamma(spec, e, rotate(spec, w, uf));
        const Vec3 rhs = gamma(spec, e, w) + gamma(spec, f, rotate(spec, w, ue));
        report.max_residual = std::max(report.max_residual, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    }
  }
  report.passed = report.max_residual <= kConsistencyTolerance;
  return report;
}

/// Inclusive label box containing the labels of a finite pattern.
struct Window {
  int dim = 1;
  Label lo{0, 0};
  Label hi{0, 0};

  static Window line(int lo, int hi) { return {1, {lo, 0}, {hi, 0}}; }
  static Window box(Label lo, Label hi) { return {2, lo, hi}; }

  [[nodiscard]] int extent(int axis) const {
    const auto a = static_cast<std::size_t>(axis);
    return axis < dim ? hi[a] - lo[a] + 1 : 1;
  }
  [[nodiscard]] bool empty() const { return extent(0) <= 0 || extent(1) <= 0; }
  [[nodiscard]] std::size_t size() const {
    return empty() ? 0 : static_cast<std::size_t>(extent(0)) * static_cast<std::size_t>(extent(1));
  }
  [[nodiscard]] bool contains(const Label& n) const {
    for (int axis = 0; axis < dim; ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      if (n[a] < lo[a] || n[a] > hi[a]) return false;
    }
    return dim == 2 || n[1] == 0;
  }
  /// Row-major position, axis 1 fastest.
  [[nodiscard]] std::size_t index(const Label& n) const {
    const auto i0 = static_cast<std::size_t>(n[0] - lo[0]);
    if (dim == 1) return i0;
    return i0 + static_cast<std::size_t>(n[1] - lo[1]) * static_cast<std::size_t>(extent(0));
  }
  [[nodiscard]] Label label(std::size_t i) const {
    if (dim == 1) return {lo[0] + static_cast<int>(i), 0};
    const auto w = static_cast<std::size_t>(extent(0));
    return {lo[0] + static_cast<int>(i % w), lo[1] + static_cast<int>(i / w)};
  }
  [[nodiscard]] Window shifted(const Label& k) const {
    Window out = *this;
    for (int axis = 0; axis < dim; ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      out.lo[a] -= k[a];
      out.hi[a] -= k[a];
    }
    return out;
  }
};

/// Finite window of a generated pattern. Positions are stored once, as generated
/// from the seed label; relabeling only moves the origin, so shifting by k and
/// back by -k restores the original values bit for bit.
class PointPattern {
 public:
  PointPattern(PatternSpec spec, Window window, std::shared_ptr<const std::vector<Vec3>> raw)
      : spec_(std::move(spec)), window_(window), raw_window_(window), raw_(std::move(raw)) {}

  [[nodiscard]] const PatternSpec& spec() const { return spec_; }
  [[nodiscard]] const Window& window() const { return window_; }
  [[nodiscard]] int label_dim() const { return window_.dim; }
  [[nodiscard]] int ambient_dim() const { return spec_.ambient_dim(); }
  [[nodiscard]] std::size_t size() const { return window_.size(); }
  [[nodiscard]] bool contains(const Label& n) const { return window_.contains(n); }

  /// p_n, relative to the point labelled 0.
  [[nodiscard]] Vec3 at(const Label& n) const {
    if (!window_.contains(n)) {
      throw ValidationError("label (" + std::to_string(n[0]) + "," + std::to_string(n[1]) +
                            ") outside pattern window");
    }
    return raw_at(add(n, origin_)) - raw_at(origin_);
  }
  [[nodiscard]] Vec3 at(int n) const { return at(Label{n, 0}); }

  /// Points in window order (axis 1 fastest).
  [[nodiscard]] std::vector<Vec3> points() const {
    std::vector<Vec3> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(window_.label(i)));
    return out;
  }

  /// Relabels so that the point with label k becomes the new origin.
  [[nodiscard]] PointPattern shifted(const Label& k) const {
    if (!window_.contains(k)) throw ValidationError("shift label lies outside the pattern window (window underflow)");
    PointPattern out = *this;
    out.origin_ = add(origin_, k);
    out.window_ = window_.shifted(k);
    out.spec_.omega = rotate(spec_, spec_.omega, k);
    return out;
  }

 private:
  static Label add(const Label& a, const Label& b) { return {a[0] + b[0], a[1] + b[1]}; }
  [[nodiscard]] const Vec3& raw_at(const Label& n) const { return (*raw_)[raw_window_.index(n)]; }

  PatternSpec spec_;
  Window window_;
  Window raw_window_;
  Label origin_{0, 0};
  std::shared_ptr<const std::vector<Vec3>> raw_;
};

/// Endpoint of a generator path starting at p_0 = 0.
inline Vec3 point_along_path(const PatternSpec& raw_spec, std::span<const Generator> path) {
  const PatternSpec spec = normalized(raw_spec);
  Vec3 p = Vec3::Zero();
  Label n{0, 0};
  for (const auto& e : path) {
    p += gamma(spec, e, rotate(spec, spec.omega, n));
    n[static_cast<std::size_t>(e.axis)] += e.sign;
  }
  return p;
}

/// Generates every point of the window, walking axis 1 from the origin and then
/// axis 2 from each point of that row. Refuses specs whose generators fail the
/// consistency relations.
inline PointPattern generate(const PatternSpec& raw_spec, const Window& window) {
  const PatternSpec spec = normalized(raw_spec);
  if (window.dim != spec.label_dim()) throw ValidationError("window dimension does not match the pattern");
  if (!window.contains({0, 0})) throw ValidationError("window must contain label 0");
  const auto consistency = check_consistency(spec, 16);
  if (!consistency.passed) {
    throw NumericalError("generator consistency residual " + std::to_string(consistency.max_residual) +
                         " exceeds tolerance; refusing to emit pattern");
  }

  auto raw = std::make_shared<std::vector<Vec3>>(window.size(), Vec3::Zero());
  auto& pts = *raw;
  auto step = [&](const Label& from, Generator e) {
    Label to = from;
    to[static_cast<std::size_t>(e.axis)] += e.sign;
    pts[window.index(to)] = pts[window.index(from)] + gamma(spec, e, rotate(spec, spec.omega, from));
  };
  for (int n = 0; n < window.hi[0]; ++n) step({n, 0}, {0, 1});
  for (int n = 0; n > window.lo[0]; --n) step({n, 0}, {0, -1});
  if (window.dim == 2) {
    for (int n1 = window.lo[0]; n1 <= window.hi[0]; ++n1) {
      for (int n2 = 0; n2 < window.hi[1]; ++n2) step({n1, n2}, {1, 1});
      for (int n2 = 0; n2 > window.lo[1]; --n2) step({n1, n2}, {1, -1});
    }
  }
  return PointPattern(spec, window, std::move(raw));
}

/// p'_n = p_{n+k} - p_k; the new pattern is seeded at tau_k omega.
inline PointPattern shift_relabel(const PointPattern& pattern, const Label& k) { return pattern.shifted(k); }
inline PointPattern shift_relabel(const PointPattern& pattern, int k) { return pattern.shifted({k, 0}); }

/// D = d * max_{e, omega} |Gamma_e(omega)|, estimated on a dense hull grid with
/// a small relative margin for the grid spacing.
inline double lipschitz_constant(const PatternSpec& raw_spec) {
  const PatternSpec spec = normalized(raw_spec);
  const int d = spec.label_dim();
  const int per_axis = d == 1 ? 8192 : 256;
  double best = 0.0;
  const auto gens = generators(d);
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < (d == 2 ? per_axis : 1); ++j) {
      HullPoint w{(i + 0.5) / per_axis * hull_length(spec, 0), 0.0};
      if (d == 2) w[1] = (j + 0.5) / per_axis * hull_length(spec, 1);
      for (const auto& e : gens) best = std::max(best, gamma(spec, e, w).norm());
    }
  }
  return d * best * (1.0 + 1e-4);
}

struct DeloneCertificate {
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
  Window window;
  bool delone = false;
};

inline constexpr double kDeloneFloor = 1e-6;

/// Observed Delone radii of a finite window. r_min is the smallest pairwise
/// separation; r_max is the diameter of the largest empty ball found in the
/// interior (for a 1D pattern, the largest gap between neighbouring points
/// along the chain).
inline DeloneCertificate delone_check(const PointPattern& pattern) {
  if (pattern.size() == 0) throw ValidationError("Delone check needs a nonempty window");
  DeloneCertificate cert;
  cert.window = pattern.window();
  const auto pts = pattern.points();
  const std::size_t n = pts.size();

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a][0] < pts[b][0]; });
  double r_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pts[order[j]][0] - pts[order[i]][0] >= r_min) break;
      r_min = std::min(r_min, (pts[order[j]] - pts[order[i]]).norm());
    }
  }
  cert.r_min = r_min;

  if (pattern.label_dim() == 1) {
    double gap = 0.0;
    for (std::size_t i = 1; i < n; ++i) gap = std::max(gap, pts[order[i]][0] - pts[order[i - 1]][0]);
    cert.r_max = n > 1 ? gap : std::numeric_limits<double>::infinity();
  } else {
    // sample the plane region spanned by the interior labels
    const Window& w = pattern.window();
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (int a = w.lo[0] + 1; a < w.hi[0]; ++a) {
      for (int b = w.lo[1] + 1; b < w.hi[1]; ++b) {
        const Vec3 p = pattern.at(Label{a, b});
        x0 = std::min(x0, p[0]);
        x1 = std::max(x1, p[0]);
        y0 = std::min(y0, p[1]);
        y1 = std::max(y1, p[1]);
      }
    }
    if (!(x1 > x0 && y1 > y0)) {
      cert.r_max = std::numeric_limits<double>::infinity();
    } else {
      const int grid = 64;
      double hole = 0.0;
      for (int a = 0; a <= grid; ++a) {
        for (int b = 0; b <= grid; ++b) {
          const double x = x0 + (x1 - x0) * a / grid;
          const double y = y0 + (y1 - y0) * b / grid;
          double nearest = std::numeric_limits<double>::infinity();
          for (const auto& p : pts) nearest = std::min(nearest, std::hypot(p[0] - x, p[1] - y));
          hole = std::max(hole, nearest);
        }
      }
      cert.r_max = 2.0 * hole;
    }
  }
  cert.delone = cert.r_min > kDeloneFloor && std::isfinite(cert.r_max);
  return cert;
}

}  // namespace dynpat
