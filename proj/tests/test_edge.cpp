#include <gtest/gtest.h>

#include <numbers>
#include <vector>

#include "dynpat/edge.hpp"

using namespace dynpat;

namespace {

GapRecord gap(double lo, double hi) {
  GapRecord g;
  g.gap_lo = lo;
  g.gap_hi = hi;
  g.width = hi - lo;
  return g;
}

PatternSpec sine(Frequency a) {
  PatternSpec s;
  s.alpha = {a};
  return s;
}

std::vector<int> range(int k) {
  std::vector<int> out;
  for (int i = 0; i < k; ++i) out.push_back(i);
  return out;
}

}  // namespace

TEST(Coverage, NoEnergies) { EXPECT_EQ(gap_coverage(std::vector<double>{}, gap(0.0, 1.0), 0.1), 0.0); }

TEST(Coverage, MidpointWithHalfWidthResolution) {
  EXPECT_GE(gap_coverage(std::vector<double>{0.5}, gap(0.0, 1.0), 0.5), 0.999);
}

TEST(Coverage, FullGrid) {
  std::vector<double> e;
  for (int i = 0; i < kCoverageGrid; ++i) e.push_back(2.0 + (i + 0.5) * 0.001);
  EXPECT_EQ(gap_coverage(e, gap(2.0, 3.0), 1e-9), 1.0);
}

TEST(Coverage, PartialIsProportional) {
  // one energy at 0.25 with resolution 0.05 covers the grid points in [0.2, 0.3]
  EXPECT_NEAR(gap_coverage(std::vector<double>{0.25}, gap(0.0, 1.0), 0.05), 0.1, 1e-3);
}

TEST(Coverage, Errors) {
  EXPECT_THROW(gap_coverage(std::vector<double>{0.5}, gap(1.0, 1.0), 0.1), ValidationError);
  EXPECT_THROW(gap_coverage(std::vector<double>{0.5}, gap(0.0, 1.0), 0.0), ValidationError);
}

TEST(EdgeSpectrum, NoGapsNoStates) {
  const auto bundle = solve_bundle(sine(Frequency::rational(0, 1)), 0, {0, 1}, {40, 1}, HoppingRule{});
  const std::vector<GapRecord> gaps;
  const auto rep = edge_spectrum(bundle, gaps);
  EXPECT_TRUE(rep.states.empty());
  EXPECT_TRUE(rep.coverage.empty());
  EXPECT_EQ(rep.cuts, 2);
}

TEST(EdgeSpectrum, GapWithoutStatesHasZeroCoverage) {
  const auto bundle = solve_bundle(sine(Frequency::rational(0, 1)), 0, {0}, {40, 1}, HoppingRule{});
  const std::vector<GapRecord> gaps{gap(10.0, 11.0)};
  const auto rep = edge_spectrum(bundle, gaps);
  EXPECT_TRUE(rep.states.empty());
  ASSERT_EQ(rep.coverage.size(), 1u);
  EXPECT_EQ(rep.coverage[0].coverage, 0.0);
  EXPECT_EQ(rep.coverage[0].states, 0);
}

TEST(EdgeSpectrum, MismatchedEigenDataRejected) {
  auto bundle = solve_bundle(sine(Frequency::rational(3, 8)), 0, {0}, {24, 1}, HoppingRule{});
  bundle[0].labels.pop_back();
  EXPECT_THROW(edge_spectrum(bundle, std::vector<GapRecord>{gap(0.0, 1.0)}), ValidationError);
}

TEST(EdgeSpectrum, LocalizationIsBoundaryMass) {
  const PatternSpec s = sine(Frequency::rational(5, 8));
  const auto bundle = solve_bundle(s, 0, {0, 3}, {48, 1}, HoppingRule{});
  const std::vector<GapRecord> all{gap(-100.0, 100.0)};
  const auto rep = edge_spectrum(bundle, all, 10);
  ASSERT_EQ(rep.states.size(), 96u);
  for (std::size_t i = 0; i < rep.states.size(); ++i) {
    const auto& st = rep.states[i];
    const auto& cs = bundle[st.cut == 0 ? 0 : 1];
    const std::size_t col = i % 48;
    double mass = 0.0;
    for (int r = 0; r < 10; ++r) mass += cs.eigen.vectors(r, static_cast<Eigen::Index>(col)) *
                                         cs.eigen.vectors(r, static_cast<Eigen::Index>(col));
    EXPECT_NEAR(st.localization, mass, 1e-12);
    EXPECT_GE(st.localization, 0.0);
    EXPECT_LE(st.localization, 1.0);
    EXPECT_EQ(st.cut_localized, st.localization > 0.5);
  }
  // sorted by (cut, energy)
  for (std::size_t i = 1; i < rep.states.size(); ++i) {
    const auto& a = rep.states[i - 1];
    const auto& b = rep.states[i];
    EXPECT_TRUE(a.cut < b.cut || (a.cut == b.cut && a.energy <= b.energy));
  }
}

TEST(EdgeSpectrum, CoverageMonotoneInBundleSize) {
  const PatternSpec s = sine(Frequency::rational(5, 8));
  SweepConfig cfg;
  cfg.pattern = s;
  const auto bulk = spectra_at(cfg, {Rational(5, 8)}, {24});
  ASSERT_FALSE(bulk[0].gaps.empty());
  double prev = 0.0;
  for (int k : {1, 4, 8, 16}) {
    const auto bundle = solve_bundle(s, 0, range(k), {24, 1}, HoppingRule{});
    const auto rep = edge_spectrum(bundle, bulk[0].gaps);
    double cov = 0.0;
    for (const auto& c : rep.coverage) cov += c.coverage;
    EXPECT_GE(cov, prev) << k;
    prev = cov;
  }
}

TEST(EdgeSpectrum, CutShiftMatchesRotatedSeed) {
  PatternSpec s = sine(Frequency::real(1.0 / std::numbers::sqrt2));
  s.omega = {0.2, 0.0};
  for (int k : {1, 5, 17}) {
    const auto shifted = eigvals_sym(build_half_space(s, k, 60, HoppingRule{}));
    PatternSpec moved = s;
    moved.omega = rotate(normalized(s), normalized(s).omega, {k, 0});
    const auto ref = eigvals_sym(build_half_space(moved, 0, 60, HoppingRule{}));
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(shifted[i], ref[i], 1e-10);
  }
}

TEST(EdgeSpectrum, DeterministicAcrossParallelism) {
  const PatternSpec s = sine(Frequency::rational(5, 8));
  const auto a = solve_bundle(s, 0, range(6), {24, 1}, HoppingRule{}, 1);
  const auto b = solve_bundle(s, 0, range(6), {24, 1}, HoppingRule{}, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].cut, b[i].cut);
    EXPECT_EQ(a[i].eigen.values, b[i].eigen.values);
  }
}
