#pragma once

// Run configuration: one JSON document with the sections
// pattern, hopping, sweep, gap, edge, hull, output, seed.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dynpat/edge.hpp"
#include "dynpat/errors.hpp"
#include "dynpat/gap_label.hpp"
#include "dynpat/hamiltonian.hpp"
#include "dynpat/io.hpp"
#include "dynpat/pattern.hpp"
#include "dynpat/spectral.hpp"

namespace dynpat {

struct RunConfig {
  PatternSpec pattern;
  Window window = Window::line(0, 99);
  HoppingRule hopping;

  struct Sweep {
    int q_max = 8;
    SizeRule sizes;
    int omega_samples = 8;
    int parallelism = 1;
  } sweep;

  struct Gap {
    double min_width = kDefaultMinWidth;
    int max_coeff = kDefaultMaxCoeff;
    double tol = kDefaultFitTolerance;
  } gap;

  struct Edge {
    std::vector<int> cuts{10, 30, 100};  // bundle sizes K; cuts run over 0..K-1
    int width = kDefaultEdgeWidth;
    double epsilon_fraction = kDefaultEpsilonFraction;
    int cut_axis = 1;  // 1-based label axis
    int periods = 3;   // chain length in units of the approximant period
  } edge;

  struct Hull {
    int depth = 2;
    int window = 1000;
  } hull;

  std::string output = "out";
  std::uint64_t seed = 1;
};

namespace detail {

inline Frequency parse_frequency(const nlohmann::json& j) {
  if (j.is_string()) return Frequency::rational(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return Frequency::rational(j.get<std::int64_t>(), 1);
  if (j.is_number()) return Frequency::real(j.get<double>());
  throw ValidationError("frequency must be a number or a \"p/q\" string");
}

inline nlohmann::json frequency_json(const Frequency& f) {
  if (f.exact) return f.exact->str();
  return f.value;
}

template <class T>
void read(const nlohmann::json& block, const char* key, T& target) {
  if (!block.contains(key)) return;
  try {
    target = block.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

inline void check_keys(const nlohmann::json& block, const std::string& name, std::initializer_list<const char*> keys) {
  if (!block.is_object()) throw ValidationError("config section '" + name + "' must be an object");
  for (const auto& [k, v] : block.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ValidationError("unknown key '" + k + "' in config section '" + name + "'");
  }
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig c;
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  detail::check_keys(j, "config", {"pattern", "hopping", "sweep", "gap", "edge", "hull", "output", "seed"});

  if (j.contains("pattern")) {
    const auto& p = j.at("pattern");
    detail::check_keys(p, "pattern", {"kind", "alpha", "r", "g", "delta", "delta_prime", "spacing_a", "spacing_b",
                                      "omega", "window"});
    if (p.contains("kind")) c.pattern.kind = parse_kind(p.at("kind").get<std::string>());
    if (p.contains("alpha")) {
      c.pattern.alpha.clear();
      if (p.at("alpha").is_array()) {
        for (const auto& a : p.at("alpha")) c.pattern.alpha.push_back(detail::parse_frequency(a));
      } else {
        c.pattern.alpha.push_back(detail::parse_frequency(p.at("alpha")));
      }
    }
    detail::read(p, "r", c.pattern.r);
    detail::read(p, "g", c.pattern.g);
    detail::read(p, "delta", c.pattern.delta);
    detail::read(p, "delta_prime", c.pattern.delta_prime);
    detail::read(p, "spacing_a", c.pattern.spacing_a);
    detail::read(p, "spacing_b", c.pattern.spacing_b);
    if (p.contains("omega")) {
      const auto& w = p.at("omega");
      if (w.is_array()) {
        if (w.size() > 2) throw ValidationError("omega takes at most two values");
        for (std::size_t i = 0; i < w.size(); ++i) c.pattern.omega[i] = w[i].get<double>();
      } else {
        c.pattern.omega[0] = w.get<double>();
      }
    }
    if (p.contains("window")) {
      const auto& w = p.at("window");
      if (!w.is_array() || w.empty()) throw ValidationError("window must be [lo, hi] or [[lo1, hi1], [lo2, hi2]]");
      if (w[0].is_array()) {
        if (w.size() != 2) throw ValidationError("2D window needs two ranges");
        c.window = Window::box({w[0][0].get<int>(), w[1][0].get<int>()}, {w[0][1].get<int>(), w[1][1].get<int>()});
      } else {
        if (w.size() != 2) throw ValidationError("1D window needs [lo, hi]");
        c.window = Window::line(w[0].get<int>(), w[1].get<int>());
      }
    } else if (c.pattern.label_dim() == 2) {
      c.window = Window::box({0, 0}, {19, 19});
    }
  }
  if (j.contains("hopping")) {
    const auto& h = j.at("hopping");
    detail::check_keys(h, "hopping", {"beta", "cutoff_dist"});
    detail::read(h, "beta", c.hopping.beta);
    detail::read(h, "cutoff_dist", c.hopping.cutoff_dist);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    detail::check_keys(s, "sweep", {"q_max", "size_floor", "min_periods", "omega_samples", "parallelism"});
    detail::read(s, "q_max", c.sweep.q_max);
    detail::read(s, "size_floor", c.sweep.sizes.floor);
    detail::read(s, "min_periods", c.sweep.sizes.min_periods);
    detail::read(s, "omega_samples", c.sweep.omega_samples);
    detail::read(s, "parallelism", c.sweep.parallelism);
  }
  if (j.contains("gap")) {
    const auto& g = j.at("gap");
    detail::check_keys(g, "gap", {"min_width", "max_coeff", "tol"});
    detail::read(g, "min_width", c.gap.min_width);
    detail::read(g, "max_coeff", c.gap.max_coeff);
    detail::read(g, "tol", c.gap.tol);
  }
  if (j.contains("edge")) {
    const auto& e = j.at("edge");
    detail::check_keys(e, "edge", {"cuts", "width", "epsilon_fraction", "cut_axis", "periods"});
    if (e.contains("cuts")) {
      c.edge.cuts.clear();
      if (e.at("cuts").is_array()) {
        for (const auto& k : e.at("cuts")) c.edge.cuts.push_back(k.get<int>());
      } else {
        c.edge.cuts.push_back(e.at("cuts").get<int>());
      }
    }
    detail::read(e, "width", c.edge.width);
    detail::read(e, "epsilon_fraction", c.edge.epsilon_fraction);
    detail::read(e, "cut_axis", c.edge.cut_axis);
    detail::read(e, "periods", c.edge.periods);
  }
  if (j.contains("hull")) {
    const auto& h = j.at("hull");
    detail::check_keys(h, "hull", {"depth", "window"});
    detail::read(h, "depth", c.hull.depth);
    detail::read(h, "window", c.hull.window);
  }
  detail::read(j, "output", c.output);
  detail::read(j, "seed", c.seed);

  c.hopping.validate();
  if (c.sweep.q_max < 2) throw ValidationError("sweep.q_max must be >= 2");
  if (c.sweep.omega_samples < 1) throw ValidationError("sweep.omega_samples must be >= 1");
  if (c.sweep.parallelism < 1) throw ValidationError("sweep.parallelism must be >= 1");
  if (c.sweep.sizes.min_periods < 1) throw ValidationError("sweep.min_periods must be >= 1");
  if (!(c.gap.min_width > 0.0 && c.gap.min_width < 1.0)) throw ValidationError("gap.min_width must lie in (0, 1)");
  if (c.gap.max_coeff < 0) throw ValidationError("gap.max_coeff must be >= 0");
  if (!(c.gap.tol > 0.0)) throw ValidationError("gap.tol must be > 0");
  if (c.edge.cuts.empty()) throw ValidationError("edge.cuts must list at least one bundle size");
  for (int k : c.edge.cuts) {
    if (k < 1) throw ValidationError("edge.cuts entries must be >= 1");
  }
  if (c.edge.width < 1) throw ValidationError("edge.width must be >= 1");
  if (!(c.edge.epsilon_fraction > 0.0)) throw ValidationError("edge.epsilon_fraction must be > 0");
  if (c.edge.periods < 1) throw ValidationError("edge.periods must be >= 1");
  if (c.hull.depth < 1) throw ValidationError("hull.depth must be >= 1");
  c.pattern = normalized(c.pattern);
  if (c.window.dim != c.pattern.label_dim()) throw ValidationError("window dimension does not match pattern kind");
  if (c.edge.cut_axis < 1 || c.edge.cut_axis > c.pattern.label_dim()) throw ValidationError("edge.cut_axis out of range");
  return c;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot read config file " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
}

/// Canonical form of the effective configuration. Parallelism is left out so
/// the hash identifies the computed result, not how it was scheduled.
inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json alpha = nlohmann::json::array();
  for (const auto& a : c.pattern.alpha) alpha.push_back(detail::frequency_json(a));
  nlohmann::json window;
  if (c.window.dim == 1) {
    window = {c.window.lo[0], c.window.hi[0]};
  } else {
    window = {{c.window.lo[0], c.window.hi[0]}, {c.window.lo[1], c.window.hi[1]}};
  }
  return {
      {"pattern",
       {{"kind", std::string(to_string(c.pattern.kind))},
        {"alpha", alpha},
        {"r", c.pattern.r},
        {"g", c.pattern.g},
        {"delta", c.pattern.delta},
        {"delta_prime", c.pattern.delta_prime},
        {"spacing_a", c.pattern.spacing_a},
        {"spacing_b", c.pattern.spacing_b},
        {"omega", {c.pattern.omega[0], c.pattern.omega[1]}},
        {"window", window}}},
      {"hopping", {{"beta", c.hopping.beta}, {"cutoff_dist", c.hopping.cutoff_dist}}},
      {"sweep",
       {{"q_max", c.sweep.q_max},
        {"size_floor", c.sweep.sizes.floor},
        {"min_periods", c.sweep.sizes.min_periods},
        {"omega_samples", c.sweep.omega_samples}}},
      {"gap", {{"min_width", c.gap.min_width}, {"max_coeff", c.gap.max_coeff}, {"tol", c.gap.tol}}},
      {"edge",
       {{"cuts", c.edge.cuts},
        {"width", c.edge.width},
        {"epsilon_fraction", c.edge.epsilon_fraction},
        {"cut_axis", c.edge.cut_axis},
        {"periods", c.edge.periods}}},
      {"hull", {{"depth", c.hull.depth}, {"window", c.hull.window}}},
      {"output", c.output},
      {"seed", c.seed},
  };
}

/// FNV-1a over the canonical config, output directory excluded.
inline std::string config_hash(const RunConfig& c) {
  nlohmann::json j = to_json(c);
  j.erase("output");
  return hex64(fnv1a64(j.dump()));
}

}  // namespace dynpat
