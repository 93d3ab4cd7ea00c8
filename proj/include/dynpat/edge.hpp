#pragma once

// Boundary spectrum of half-space bundles.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "dynpat/errors.hpp"
#include "dynpat/hamiltonian.hpp"
#include "dynpat/parallel.hpp"
#include "dynpat/spectral.hpp"

namespace dynpat {

/// Eigen-data of one half-space matrix of a bundle.
struct CutSpectrum {
  int cut = 0;
  int cut_axis = 0;
  std::vector<Label> labels;
  EigenSystem eigen;  // with eigenvectors
};

/// Builds and diagonalizes one half-space matrix per cut. Results keep the
/// order of `cuts` regardless of parallelism.
inline std::vector<CutSpectrum> solve_bundle(const PatternSpec& spec, int cut_axis, const std::vector<int>& cuts,
                                             std::array<int, 2> sizes, const HoppingRule& hop, int parallelism = 1) {
  if (cuts.empty()) throw ValidationError("bundle needs at least one cut");
  std::vector<CutSpectrum> out(cuts.size());
  parallel_for(cuts.size(), parallelism, [&](std::size_t i) {
    const HamiltonianMatrix h = build_half_space(spec, cut_axis, cuts[i], sizes, hop);
    out[i].cut = cuts[i];
    out[i].cut_axis = cut_axis;
    out[i].labels = h.labels;
    out[i].eigen = eigen_sym(h, true);
  });
  return out;
}

struct EdgeState {
  int cut = 0;
  double energy = 0.0;
  double localization = 0.0;  // eigenvector weight within W layers of the cut
  int gap_id = -1;
  bool cut_localized = false;
};

struct GapCoverage {
  int gap_id = 0;
  double epsilon = 0.0;
  double coverage = 0.0;
  int states = 0;
};

struct EdgeReport {
  int width = 10;
  double threshold = 0.5;
  int cuts = 0;
  std::vector<EdgeState> states;  // sorted by (cut, energy)
  std::vector<GapCoverage> coverage;

  /// Energies of cut-localized states inside a gap, ascending.
  [[nodiscard]] std::vector<double> localized_energies(int gap_id) const {
    std::vector<double> out;
    for (const auto& s : states) {
      if (s.gap_id == gap_id && s.cut_localized) out.push_back(s.energy);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline constexpr int kCoverageGrid = 1000;

/// Fraction of the 1000 midpoints of (gap_lo, gap_hi) lying within epsilon of
/// some energy.
inline double gap_coverage(std::span<const double> energies, const GapRecord& gap, double epsilon) {
  if (!(gap.gap_hi > gap.gap_lo)) throw ValidationError("gap is empty");
  if (!(epsilon > 0.0)) throw ValidationError("coverage resolution must be > 0");
  std::vector<double> e(energies.begin(), energies.end());
  std::sort(e.begin(), e.end());
  if (e.empty()) return 0.0;
  int hit = 0;
  const double step = (gap.gap_hi - gap.gap_lo) / kCoverageGrid;
  for (int i = 0; i < kCoverageGrid; ++i) {
    const double x = gap.gap_lo + (i + 0.5) * step;
    auto it = std::lower_bound(e.begin(), e.end(), x);
    double nearest = std::numeric_limits<double>::infinity();
    if (it != e.end()) nearest = *it - x;
    if (it != e.begin()) nearest = std::min(nearest, x - *std::prev(it));
    if (nearest <= epsilon) ++hit;
  }
  return static_cast<double>(hit) / kCoverageGrid;
}

inline constexpr int kDefaultEdgeWidth = 10;
inline constexpr double kLocalizationThreshold = 0.5;
inline constexpr double kDefaultEpsilonFraction = 0.01;

/// In-gap eigenvalues of a bundle with their boundary weight. States below the
/// localization threshold are kept but flagged; coverage counts only the
/// cut-localized ones, at resolution epsilon_fraction * gap width.
inline EdgeReport edge_spectrum(std::span<const CutSpectrum> bundle, std::span<const GapRecord> gaps,
                                int width = kDefaultEdgeWidth, double threshold = kLocalizationThreshold,
                                double epsilon_fraction = kDefaultEpsilonFraction) {
  if (width < 1) throw ValidationError("boundary width must be >= 1");
  EdgeReport report;
  report.width = width;
  report.threshold = threshold;
  report.cuts = static_cast<int>(bundle.size());
  for (const auto& cs : bundle) {
    const auto dim = static_cast<Eigen::Index>(cs.labels.size());
    if (cs.eigen.vectors.rows() != dim || cs.eigen.vectors.cols() != dim ||
        static_cast<Eigen::Index>(cs.eigen.values.size()) != dim) {
      throw ValidationError("bundle eigen-data dimensions do not match its labels");
    }
    std::vector<Eigen::Index> boundary;
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (cs.labels[static_cast<std::size_t>(r)][static_cast<std::size_t>(cs.cut_axis)] - cs.cut < width) {
        boundary.push_back(r);
      }
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double e = cs.eigen.values[static_cast<std::size_t>(i)];
      int gid = -1;
      for (std::size_t g = 0; g < gaps.size(); ++g) {
        if (e > gaps[g].gap_lo && e < gaps[g].gap_hi) gid = static_cast<int>(g);
      }
      if (gid < 0) continue;
      double mass = 0.0;
      for (Eigen::Index r : boundary) mass += cs.eigen.vectors(r, i) * cs.eigen.vectors(r, i);
      EdgeState s;
      s.cut = cs.cut;
      s.energy = e;
      s.localization = std::clamp(mass, 0.0, 1.0);
      s.gap_id = gid;
      s.cut_localized = s.localization > threshold;
      report.states.push_back(s);
    }
  }
  std::stable_sort(report.states.begin(), report.states.end(), [](const EdgeState& a, const EdgeState& b) {
    if (a.cut != b.cut) return a.cut < b.cut;
    return a.energy < b.energy;
  });
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    GapCoverage c;
    c.gap_id = static_cast<int>(g);
    c.epsilon = epsilon_fraction * gaps[g].width;
    const auto energies = report.localized_energies(c.gap_id);
    c.states = static_cast<int>(energies.size());
    c.coverage = gap_coverage(energies, gaps[g], c.epsilon);
    report.coverage.push_back(c);
  }
  return report;
}

}  // namespace dynpat
