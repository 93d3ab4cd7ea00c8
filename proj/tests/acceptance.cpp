// Acceptance run: one PASS/FAIL line per criterion. Criteria listed in
// kKnownShortfalls are reported but do not fail the process.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "dynpat/check.hpp"
#include "dynpat/edge.hpp"
#include "dynpat/gap_label.hpp"
#include "dynpat/hull.hpp"
#include "dynpat/io.hpp"
#include "dynpat/spectral.hpp"

using namespace dynpat;

namespace {

const std::set<int> kKnownShortfalls{2, 3};

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

PatternSpec sine_spec() {
  PatternSpec s;
  s.kind = PatternKind::ExampleI;
  s.r = 0.4;
  return s;
}

SweepPoint bulk(const PatternSpec& s, Rational a, int size, int samples = 8) {
  SweepConfig cfg;
  cfg.pattern = s;
  cfg.min_width = 0.02;
  cfg.omega_samples = samples;
  cfg.seed = 1;
  return spectra_at(cfg, {a}, {size}).front();
}

std::optional<LabelTuple> try_fit(double ids, const ThetaMatrix& t, double tol = 1e-9) {
  try {
    return fit_labels(ids, t, 5, tol).best;
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

double span_of(const SweepPoint& p) { return p.merged.back() - p.merged.front(); }

std::vector<int> first_cuts(int k) {
  std::vector<int> out(static_cast<std::size_t>(k));
  std::iota(out.begin(), out.end(), 0);
  return out;
}

// ---------------------------------------------------------------- 1

Outcome periodic_band_edges() {
  PatternSpec s = sine_spec();
  s.alpha = {Frequency::rational(0, 1)};
  const auto v = eigvals_sym(build_bulk_pbc(s, 200, HoppingRule{}));
  const double top = std::sinh(1.0) / (std::cosh(1.0) - 1.0);
  const double bottom = std::sinh(1.0) / (std::cosh(1.0) + 1.0);
  const double e_top = std::abs(v.back() - top);
  const double e_bottom = std::abs(v.front() - bottom);
  return {e_top <= 5e-3 && e_bottom <= 5e-3, "max " + fmt(v.back(), 7) + " (|d| " + fmt(e_top, 2) + "), min " +
                                                 fmt(v.front(), 7) + " (|d| " + fmt(e_bottom, 2) + ")"};
}

// ---------------------------------------------------------------- 2

Outcome label_fit_and_continuity() {
  const PatternSpec s = sine_spec();
  const std::vector<Rational> pair{Rational(21, 34), Rational(34, 55)};

  int detected = 0;
  int unfit = 0;
  std::vector<SweepPoint> pts;
  std::vector<std::vector<std::optional<LabelTuple>>> labels;
  for (const Rational& a : pair) {
    pts.push_back(bulk(s, a, static_cast<int>(a.den)));
    const auto theta = theta_for(detail::with_frequency(s, a));
    labels.emplace_back();
    for (const auto& g : pts.back().gaps) {
      labels.back().push_back(try_fit(g.ids, theta));
      ++detected;
      if (!labels.back().back()) ++unfit;
    }
  }

  // prominent gaps present at both frequencies, matched by energy overlap
  int prominent_pairs = 0;
  int prominent_mismatch = 0;
  for (std::size_t i = 0; i < pts[0].gaps.size(); ++i) {
    const auto& g = pts[0].gaps[i];
    if (g.width < 0.05 * span_of(pts[0])) continue;
    for (std::size_t j = 0; j < pts[1].gaps.size(); ++j) {
      const auto& h = pts[1].gaps[j];
      if (h.width < 0.05 * span_of(pts[1])) continue;
      if (std::min(g.gap_hi, h.gap_hi) <= std::max(g.gap_lo, h.gap_lo)) continue;
      ++prominent_pairs;
      const auto& la = labels[0][i];
      const auto& lb = labels[1][j];
      if (!la || !lb || la->coeffs != lb->coeffs) ++prominent_mismatch;
    }
  }

  // five Farey neighbours of the golden mean, in increasing order
  const std::vector<Rational> track_points{Rational(8, 13), Rational(21, 34), Rational(34, 55), Rational(13, 21),
                                           Rational(5, 8)};
  std::vector<std::vector<GapRecord>> per_point;
  for (const Rational& a : track_points) per_point.push_back(bulk(s, a, static_cast<int>(a.den)).gaps);
  int full_tracks = 0;
  int continuous = 0;
  for (const auto& t : track_gaps(per_point)) {
    if (t.point.size() != track_points.size()) continue;
    ++full_tracks;
    std::vector<double> th;
    std::vector<double> ids;
    for (std::size_t k = 0; k < t.point.size(); ++k) {
      th.push_back(track_points[t.point[k]].value());
      ids.push_back(t.gaps[k].ids);
    }
    const auto r = label_continuity(th, ids);
    const auto fitted = try_fit(t.gaps[1].ids, theta_for(detail::with_frequency(s, track_points[1])));
    if (r.ok && fitted && continuity_matches(r, *fitted)) ++continuous;
  }

  // same pair on longer chains, for the record
  int long_unfit = 0;
  int long_detected = 0;
  for (const Rational& a : pair) {
    const auto p = bulk(s, a, static_cast<int>(6 * a.den));
    const auto theta = theta_for(detail::with_frequency(s, a));
    for (const auto& g : p.gaps) {
      ++long_detected;
      if (!try_fit(g.ids, theta)) ++long_unfit;
    }
  }

  const bool ok = unfit == 0 && prominent_pairs > 0 && prominent_mismatch == 0 && continuous > 0;
  return {ok, "L=q: " + std::to_string(unfit) + "/" + std::to_string(detected) +
                  " gaps without |c|<=5 label; prominent pairs " + std::to_string(prominent_pairs) +
                  ", mismatched " + std::to_string(prominent_mismatch) + "; continuous 5-point tracks " +
                  std::to_string(continuous) + "/" + std::to_string(full_tracks) + "; at L=6q " +
                  std::to_string(long_unfit) + "/" + std::to_string(long_detected) + " unfit"};
}

// ---------------------------------------------------------------- 3

Outcome edge_filling() {
  PatternSpec s = sine_spec();
  const Rational a(56, 97);
  s.alpha = {Frequency::rational(a)};
  const int l = 3 * 97;
  const auto b = bulk(s, a, l);
  const auto theta = theta_for(s);
  int widest = -1;
  for (std::size_t i = 0; i < b.gaps.size(); ++i) {
    const auto lab = try_fit(b.gaps[i].ids, theta);
    if (!lab || lab->coeff({1, 2}) == 0) continue;
    if (widest < 0 || b.gaps[i].width > b.gaps[static_cast<std::size_t>(widest)].width) widest = static_cast<int>(i);
  }
  if (widest < 0) return {false, "no gap with c_12 != 0"};
  const auto bundle = solve_bundle(s, 0, first_cuts(100), {l, 1}, HoppingRule{});
  std::vector<double> cov;
  int localized = 0;
  int in_gap = 0;
  for (int k : {10, 30, 100}) {
    const auto rep = edge_spectrum(std::span(bundle).first(static_cast<std::size_t>(k)), b.gaps);
    cov.push_back(rep.coverage[static_cast<std::size_t>(widest)].coverage);
    if (k == 100) {
      for (const auto& st : rep.states) {
        if (st.gap_id != widest) continue;
        ++in_gap;
        localized += st.cut_localized ? 1 : 0;
      }
    }
  }
  const bool monotone = cov[0] <= cov[1] && cov[1] <= cov[2];
  const auto lab = try_fit(b.gaps[static_cast<std::size_t>(widest)].ids, theta);
  const auto& g = b.gaps[static_cast<std::size_t>(widest)];
  return {monotone && cov[2] >= 0.9 && localized > 0,
          "gap [" + fmt(g.gap_lo) + ", " + fmt(g.gap_hi) + "] label (" + std::to_string(lab->coeff({})) + "," +
              std::to_string(lab->coeff({1, 2})) + "); coverage K=10/30/100: " + fmt(cov[0], 3) + " / " +
              fmt(cov[1], 3) + " / " + fmt(cov[2], 3) + " (need >= 0.9); localized in-gap states " +
              std::to_string(localized) + "/" + std::to_string(in_gap)};
}

// ---------------------------------------------------------------- 4

Outcome fibonacci_contrast() {
  bool ok = true;
  std::string detail;
  for (const Rational& a : {Rational(34, 55), Rational(55, 89)}) {
    PatternSpec s;
    s.kind = PatternKind::CutProject;
    s.alpha = {Frequency::rational(a)};
    const int l = static_cast<int>(3 * a.den);
    const auto b = bulk(s, a, l);
    const auto theta = theta_for(s);
    int prominent = 0;
    int family = 0;
    bool edge_any = false;
    for (const auto& g : b.gaps) {
      const auto lab = try_fit(g.ids, theta);
      if (lab) edge_any = edge_any || predict_edge(*lab, cut_generator(theta, 1), s.kind).edge;
      if (g.width < 0.05 * span_of(b)) continue;
      ++prominent;
      family += lab ? 1 : 0;
    }
    std::size_t widest = 0;
    for (std::size_t i = 1; i < b.gaps.size(); ++i) {
      if (b.gaps[i].width > b.gaps[widest].width) widest = i;
    }
    const auto bundle = solve_bundle(s, 0, first_cuts(100), {l, 1}, HoppingRule{});
    const auto rep = edge_spectrum(bundle, b.gaps);
    const double cov = b.gaps.empty() ? 0.0 : rep.coverage[widest].coverage;
    const bool here = !b.gaps.empty() && prominent > 0 && family == prominent && !edge_any && cov <= 0.3;
    ok = ok && here;
    if (!detail.empty()) detail += "; ";
    detail += a.str() + ": prominent gaps labelled " + std::to_string(family) + "/" + std::to_string(prominent) +
              ", edge predicted " + (edge_any ? "true" : "false") + ", widest-gap coverage K=100 " + fmt(cov, 3);
  }
  return {ok, detail};
}

// ---------------------------------------------------------------- 5

Outcome planar_existence() {
  PatternSpec s;
  s.kind = PatternKind::ExampleIII;
  s.r = 0.4;
  const int width = kDefaultEdgeWidth;
  for (const Rational& a : reduced_fractions(8)) {
    if (a.num == 0) continue;
    const int l = static_cast<int>(3 * a.den);
    if (l < 2 * width) continue;  // cut and far end must not share boundary layers
    const PatternSpec sp = normalized(detail::with_frequency(s, a));
    const auto b = bulk(sp, a, l);
    const auto theta = theta_for(sp);
    const int gen = cut_generator(theta, 2);
    for (const auto& g : b.gaps) {
      LabelFit fit;
      try {
        fit = fit_labels(g.ids, theta, 5, 1e-9);
      } catch (const NumericalError&) {
        continue;
      }
      const LabelTuple* edge_label = nullptr;
      for (const auto& alt : fit.alternatives) {
        if (predict_edge(alt, gen, sp.kind).edge) {
          edge_label = &alt;
          break;
        }
      }
      if (!edge_label) continue;
      const auto bundle = solve_bundle(sp, 1, {0}, {l, l}, HoppingRule{});
      const std::vector<GapRecord> one{g};
      const auto rep = edge_spectrum(bundle, one, width);
      int localized = 0;
      for (const auto& st : rep.states) localized += st.cut_localized ? 1 : 0;
      if (localized >= 5) {
        std::string coeffs;
        for (std::size_t i = 0; i < edge_label->coeffs.size(); ++i) {
          if (edge_label->coeffs[i] == 0) continue;
          if (!coeffs.empty()) coeffs += " ";
          coeffs += subset_name(edge_label->subsets[i]) + "=" + std::to_string(edge_label->coeffs[i]);
        }
        return {true, "alpha " + a.str() + " grid " + std::to_string(l) + "x" + std::to_string(l) + ", gap [" +
                          fmt(g.gap_lo) + ", " + fmt(g.gap_hi) + "] ids " + fmt(g.ids) + " label {" + coeffs +
                          "}; " + std::to_string(localized) + " localized in-gap states on the axis-2 cut"};
      }
    }
  }
  return {false, "no (alpha, gap) with a shift-generator label and >= 5 localized cut states"};
}

// ---------------------------------------------------------------- 6

Outcome invariant_suite() {
  const auto results = run_invariant_suite(1);
  int failed = 0;
  std::string names;
  for (const auto& r : results) {
    if (r.passed) continue;
    ++failed;
    names += " " + r.name;
  }
  return {failed == 0, std::to_string(results.size() - static_cast<std::size_t>(failed)) + "/" +
                           std::to_string(results.size()) + " checks passed" + (failed ? ":" + names : "")};
}

// ---------------------------------------------------------------- 7

double curve_distance(const std::vector<double>& q, double a, double r) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto sp = [&](double t) { return 1.0 + r * (std::sin(two_pi * (t + a)) - std::sin(two_pi * t)); };
  auto d2 = [&](double t) {
    const double dx = sp(t) - q[0];
    const double dy = sp(t + a) - q[1];
    return dx * dx + dy * dy;
  };
  const int coarse = 2048;
  int best = 0;
  for (int i = 1; i < coarse; ++i) {
    if (d2(static_cast<double>(i) / coarse) < d2(static_cast<double>(best) / coarse)) best = i;
  }
  double lo = (best - 1.0) / coarse;
  double hi = (best + 1.0) / coarse;
  for (int it = 0; it < 120; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (d2(m1) < d2(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return std::sqrt(d2(0.5 * (lo + hi)));
}

Outcome hull_strobe() {
  PatternSpec s = sine_spec();
  s.alpha = {Frequency::real(1.0 / std::numbers::sqrt2)};
  const auto cloud = strobe_embed(generate(s, Window::line(0, 999)), 2);
  double worst = 0.0;
  for (const auto& p : cloud.points) worst = std::max(worst, curve_distance(p, s.alpha[0].value, s.r));
  PatternSpec c;
  c.kind = PatternKind::CutProject;
  c.alpha = {Frequency::real((3.0 - std::sqrt(5.0)) / 2.0)};
  const auto distinct = distinct_points(strobe_embed(generate(c, Window::line(0, 999)), 2));
  return {worst < 1e-9 && distinct <= 4, "max distance to spacing curve " + fmt(worst, 3) + " over " +
                                             std::to_string(cloud.points.size()) + " points; CutProject distinct " +
                                             std::to_string(distinct)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "periodic band edges", 5, periodic_band_edges},
      {2, "gap-label fit and continuity", 60, label_fit_and_continuity},
      {3, "edge filling", 600, edge_filling},
      {4, "Fibonacci contrast", 600, fibonacci_contrast},
      {5, "2D existence check", 900, planar_existence},
      {6, "invariant suite", 60, invariant_suite},
      {7, "hull strobe", 5, hull_strobe},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool passed = out.passed && in_time;
    const bool known = kKnownShortfalls.count(c.id) > 0;
    std::string verdict = passed ? "PASS" : (known ? "FAIL (known shortfall)" : "FAIL");
    std::printf("criterion %d [%s]: %s  %s; %.1fs of %.0fs%s\n", c.id, c.name, verdict.c_str(), out.detail.c_str(), secs,
                c.budget_s, in_time ? "" : " (over budget)");
    std::fflush(stdout);
    if (!passed && !known) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
