#pragma once

// Invariant suite run by `dynpat check`.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dynpat/gap_label.hpp"
#include "dynpat/hamiltonian.hpp"
#include "dynpat/io.hpp"
#include "dynpat/pattern.hpp"
#include "dynpat/spectral.hpp"

namespace dynpat {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;  // measured quantity
  double bound = 0.0;  // threshold it was compared against
  std::string detail;
};

namespace detail {

inline PatternSpec sample_spec(PatternKind kind) {
  PatternSpec s;
  s.kind = kind;
  switch (kind) {
    case PatternKind::ExampleI: s.alpha = {Frequency::real(std::numbers::sqrt2 / 2.0)}; break;
    case PatternKind::ExampleII: s.alpha = {Frequency::real(0.5)}; break;
    case PatternKind::ExampleIII: s.alpha = {Frequency::rational(1, 3), Frequency::rational(2, 5)}; break;
    case PatternKind::ExampleIV:
      s.alpha = {Frequency::rational(1, 3), Frequency::rational(1, 3)};
      s.g = 0.1;
      break;
    case PatternKind::CutProject: s.alpha = {Frequency::real((3.0 - std::sqrt(5.0)) / 2.0)}; break;
    case PatternKind::IdealBilayer: s.alpha = {Frequency::real(0.4)}; break;
  }
  return s;
}

inline double max_sorted_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline Eigen::MatrixXd random_antisymmetric(int n, std::mt19937_64& rng) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = 2.0 * unit_draw(rng) - 1.0;
      m(j, i) = -m(i, j);
    }
  }
  return m;
}

/// Every predicted value must fit back to one of the tuples that produced it.
inline CheckResult label_round_trip(const std::string& name, const ThetaMatrix& theta, int max_coeff) {
  CheckResult r{name, true, 0.0, 0.0, {}};
  std::size_t values = 0;
  for (const auto& pv : predicted_ids_set(theta, max_coeff)) {
    ++values;
    const LabelFit fit = fit_labels(pv.value, theta, max_coeff, 1e-9);
    bool found = false;
    for (const auto& t : pv.tuples) found = found || t.coeffs == fit.best.coeffs;
    if (!found) {
      r.passed = false;
      r.value += 1.0;
    }
  }
  r.detail = std::to_string(values) + " predicted values refit";
  return r;
}

}  // namespace detail

inline std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 1, std::size_t samples = 1000) {
  std::vector<CheckResult> out;

  for (auto kind : {PatternKind::ExampleI, PatternKind::ExampleII, PatternKind::ExampleIII, PatternKind::ExampleIV,
                    PatternKind::CutProject, PatternKind::IdealBilayer}) {
    const auto rep = check_consistency(detail::sample_spec(kind), samples, seed);
    out.push_back({"consistency/" + std::string(to_string(kind)), rep.passed, rep.max_residual,
                   kConsistencyTolerance, std::to_string(rep.samples) + " samples"});
  }

  {
    PatternSpec s = detail::sample_spec(PatternKind::ExampleI);
    s.r = 0.4;
    const auto cert = delone_check(generate(s, Window::line(-500, 500)));
    const bool ok = cert.r_min >= 0.2 - 1e-9 && cert.r_max <= 1.8 + 1e-9 && cert.delone;
    out.push_back({"delone/ExampleI r=0.4", ok, cert.r_min, 0.2 - 1e-9,
                   "r_min " + format_double(cert.r_min) + ", r_max " + format_double(cert.r_max)});
  }

  {
    struct Case {
      PatternKind kind;
      Rational alpha;
      int size;
    };
    for (const Case& c : {Case{PatternKind::ExampleI, Rational(21, 34), 34}, Case{PatternKind::ExampleII, Rational(1, 2), 30},
                          Case{PatternKind::CutProject, Rational(8, 13), 26}}) {
      PatternSpec s = detail::sample_spec(c.kind);
      s.alpha = {Frequency::rational(c.alpha)};
      s.omega = {0.0123, 0.0};
      const auto a = eigvals_sym(build_bulk_pbc(s, c.size, HoppingRule{}));
      s.omega = rotate(normalized(s), normalized(s).omega, {1, 0});
      const auto b = eigvals_sym(build_bulk_pbc(s, c.size, HoppingRule{}));
      const double d = detail::max_sorted_diff(a, b);
      out.push_back({"covariance/" + std::string(to_string(c.kind)) + " " + c.alpha.str(), d < 1e-10, d, 1e-10,
                     "bulk spectra at omega and tau_1 omega"});
    }
  }

  {
    PatternSpec s = detail::sample_spec(PatternKind::ExampleIII);
    const PointPattern p = generate(s, Window::box({-6, -6}, {6, 6}));
    const PointPattern back = shift_relabel(shift_relabel(p, Label{3, -2}), Label{-3, 2});
    bool exact = back.window().lo == p.window().lo && back.window().hi == p.window().hi;
    for (std::size_t i = 0; exact && i < p.size(); ++i) {
      const Label n = p.window().label(i);
      exact = (p.at(n).array() == back.at(n).array()).all();
    }
    out.push_back({"shift-unshift/ExampleIII", exact, exact ? 0.0 : 1.0, 0.0, "bitwise comparison"});
  }

  {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int n = 0; n <= 6; n += 2) {
      for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd m = detail::random_antisymmetric(n, rng);
        const double pf = pfaffian(m);
        const double det = n == 0 ? 1.0 : m.determinant();
        worst = std::max(worst, std::abs(pf * pf - det));
      }
    }
    out.push_back({"pfaffian-squared=det", worst <= 1e-10, worst, 1e-10, "n in {0,2,4,6}"});
  }

  {
    PatternSpec s1;
    s1.alpha = {Frequency::real((std::sqrt(5.0) - 1.0) / 2.0)};
    out.push_back(detail::label_round_trip("label-round-trip/2x2", theta_for(s1), 5));
    PatternSpec s2 = detail::sample_spec(PatternKind::ExampleIII);
    s2.alpha = {Frequency::real(std::numbers::sqrt2 - 1.0), Frequency::real(std::numbers::pi - 3.0)};
    out.push_back(detail::label_round_trip("label-round-trip/4x4", theta_for(s2), 2));
  }
  return out;
}

}  // namespace dynpat
