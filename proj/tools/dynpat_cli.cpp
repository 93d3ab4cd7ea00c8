// dynpat: batch front end for pattern generation, butterflies, gap labels,
// edge spectra and hull embeddings.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dynpat/check.hpp"
#include "dynpat/config.hpp"
#include "dynpat/edge.hpp"
#include "dynpat/gap_label.hpp"
#include "dynpat/hamiltonian.hpp"
#include "dynpat/hull.hpp"
#include "dynpat/io.hpp"
#include "dynpat/pattern.hpp"
#include "dynpat/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dynpat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Overrides {
  std::optional<std::string> kind;
  std::vector<std::string> alpha;
  std::optional<double> r, g, delta, delta_prime, spacing_a, spacing_b;
  std::vector<double> omega;
  std::optional<double> beta, cutoff;
  std::optional<int> q_max, size_floor, min_periods, omega_samples, parallelism;
  std::optional<double> min_width, tol;
  std::optional<int> max_coeff;
  std::vector<int> cuts;
  std::optional<int> width, cut_axis, periods;
  std::optional<double> epsilon;
  std::optional<int> depth, hull_window;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool butterfly_labels = false;
  bool dump_matrix = false;
};

template <class T>
void put(json& j, const char* section, const char* key, const std::optional<T>& v) {
  if (v) j[section][key] = *v;
}

json apply_overrides(json j, const Overrides& o) {
  if (!j.is_object()) j = json::object();
  put(j, "pattern", "kind", o.kind);
  if (!o.alpha.empty()) {
    json a = json::array();
    for (const auto& s : o.alpha) {
      if (s.find('/') != std::string::npos) {
        a.push_back(s);
      } else {
        try {
          std::size_t used = 0;
          const double v = std::stod(s, &used);
          if (used != s.size()) throw ValidationError("bad --alpha value '" + s + "'");
          a.push_back(v);
        } catch (const std::logic_error&) {
          throw ValidationError("bad --alpha value '" + s + "'");
        }
      }
    }
    j["pattern"]["alpha"] = a;
  }
  put(j, "pattern", "r", o.r);
  put(j, "pattern", "g", o.g);
  put(j, "pattern", "delta", o.delta);
  put(j, "pattern", "delta_prime", o.delta_prime);
  put(j, "pattern", "spacing_a", o.spacing_a);
  put(j, "pattern", "spacing_b", o.spacing_b);
  if (!o.omega.empty()) j["pattern"]["omega"] = o.omega;
  put(j, "hopping", "beta", o.beta);
  put(j, "hopping", "cutoff_dist", o.cutoff);
  put(j, "sweep", "q_max", o.q_max);
  put(j, "sweep", "size_floor", o.size_floor);
  put(j, "sweep", "min_periods", o.min_periods);
  put(j, "sweep", "omega_samples", o.omega_samples);
  put(j, "sweep", "parallelism", o.parallelism);
  put(j, "gap", "min_width", o.min_width);
  put(j, "gap", "max_coeff", o.max_coeff);
  put(j, "gap", "tol", o.tol);
  if (!o.cuts.empty()) j["edge"]["cuts"] = o.cuts;
  put(j, "edge", "width", o.width);
  put(j, "edge", "epsilon_fraction", o.epsilon);
  put(j, "edge", "cut_axis", o.cut_axis);
  put(j, "edge", "periods", o.periods);
  put(j, "hull", "depth", o.depth);
  put(j, "hull", "window", o.hull_window);
  if (o.out) j["output"] = *o.out;
  if (o.seed) j["seed"] = *o.seed;
  return j;
}

void write_sidecar(const RunConfig& cfg, const std::string& command, const std::vector<std::string>& files,
                   json extra = json::object()) {
  json j = {
      {"command", command},
      {"config_hash", config_hash(cfg)},
      {"config", to_json(cfg)},
      {"seed", cfg.seed},
      {"truncation_error", cfg.hopping.truncation_error()},
      {"outputs", files},
  };
  for (auto& [k, v] : extra.items()) j[k] = v;
  write_json(fs::path(cfg.output) / (command + ".json"), j);
}

Rational exact_alpha(const RunConfig& cfg) {
  const auto& a = cfg.pattern.alpha[0];
  if (!a.exact) throw ValidationError("this command needs a rational frequency (\"p/q\")");
  for (const auto& b : cfg.pattern.alpha) {
    if (!b.exact || *b.exact != *a.exact) throw ValidationError("this command needs equal rational frequencies");
  }
  return *a.exact;
}

SweepConfig sweep_config(const RunConfig& cfg) {
  SweepConfig s;
  s.pattern = cfg.pattern;
  s.hopping = cfg.hopping;
  s.q_max = cfg.sweep.q_max;
  s.sizes = cfg.sweep.sizes;
  s.omega_samples = cfg.sweep.omega_samples;
  s.seed = cfg.seed;
  s.parallelism = cfg.sweep.parallelism;
  s.min_width = cfg.gap.min_width;
  return s;
}

int cmd_generate(const RunConfig& cfg, const Overrides& o) {
  const PointPattern p = generate(cfg.pattern, cfg.window);
  const DeloneCertificate cert = delone_check(p);
  if (!cert.delone) {
    throw ValidationError("pattern failed the Delone check (r_min " + format_double(cert.r_min) + ")");
  }
  std::vector<std::string> header;
  for (int a = 0; a < p.label_dim(); ++a) header.push_back("n" + std::to_string(a + 1));
  const char* coords[] = {"x", "y", "z"};
  for (int a = 0; a < p.ambient_dim(); ++a) header.emplace_back(coords[a]);
  {
    CsvWriter csv(fs::path(cfg.output) / "pattern.csv", header);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Label n = p.window().label(i);
      const Vec3 x = p.at(n);
      std::vector<std::string> row;
      for (int a = 0; a < p.label_dim(); ++a) row.push_back(std::to_string(n[static_cast<std::size_t>(a)]));
      for (int a = 0; a < p.ambient_dim(); ++a) row.push_back(format_double(x[a]));
      csv.row(row);
    }
  }
  std::vector<std::string> files{"pattern.csv"};
  if (o.dump_matrix) {
    exact_alpha(cfg);
    const int l = cfg.sweep.sizes.sites_for(rotation_number(cfg.pattern).exact->den, cfg.pattern.label_dim());
    const HamiltonianMatrix h = build_bulk_pbc(cfg.pattern, {l, cfg.pattern.label_dim() == 2 ? l : 1}, cfg.hopping);
    std::ofstream os(fs::path(cfg.output) / "matrix.csv");
    write_matrix_coo(os, h);
    files.push_back("matrix.csv");
  }
  write_sidecar(cfg, "generate", files,
                {{"delone", {{"r_min", cert.r_min}, {"r_max", cert.r_max}}},
                 {"lipschitz_constant", lipschitz_constant(cfg.pattern)}});
  std::cout << "wrote " << p.size() << " points; r_min " << format_double(cert.r_min) << ", r_max "
            << format_double(cert.r_max) << '\n';
  return kExitOk;
}

int cmd_butterfly(const RunConfig& cfg) {
  const auto points = butterfly_sweep(sweep_config(cfg));
  CsvWriter spec_csv(fs::path(cfg.output) / "butterfly.csv", {"alpha_num", "alpha_den", "omega_idx", "eig_idx", "energy"});
  CsvWriter gap_csv(fs::path(cfg.output) / "gaps.csv", {"alpha_num", "alpha_den", "gap_lo", "gap_hi", "ids"});
  std::size_t gaps = 0;
  for (const auto& p : points) {
    for (const auto& rec : p.records) {
      for (std::size_t e = 0; e < rec.eigenvalues.size(); ++e) {
        spec_csv.row({std::to_string(p.alpha.num), std::to_string(p.alpha.den), std::to_string(rec.omega_index),
                      std::to_string(e), format_double(rec.eigenvalues[e])});
      }
    }
    for (const auto& g : p.gaps) {
      gap_csv.row({std::to_string(p.alpha.num), std::to_string(p.alpha.den), format_double(g.gap_lo),
                   format_double(g.gap_hi), format_double(g.ids)});
      ++gaps;
    }
  }
  write_sidecar(cfg, "butterfly", {"butterfly.csv", "gaps.csv"}, {{"frequencies", points.size()}});
  std::cout << points.size() << " frequencies, " << gaps << " gaps\n";
  return kExitOk;
}

int cmd_labels(const RunConfig& cfg, const Overrides& o) {
  const SweepConfig sc = sweep_config(cfg);
  std::vector<SweepPoint> points;
  if (o.butterfly_labels) {
    points = butterfly_sweep(sc);
  } else {
    const Rational a = exact_alpha(cfg);
    const auto den = rotation_number(cfg.pattern).exact->den;
    points = spectra_at(sc, {a}, {cfg.sweep.sizes.sites_for(den, cfg.pattern.label_dim())});
  }
  const ThetaMatrix shape = theta_for(cfg.pattern.two_circle_hull()
                                          ? detail::with_frequency(cfg.pattern, Rational(1, 2))
                                          : cfg.pattern);
  const auto subsets = even_subsets(shape.size());
  std::vector<std::string> header;
  for (int a = 0; a < cfg.pattern.label_dim(); ++a) header.push_back("alpha" + std::to_string(a + 1));
  for (const char* h : {"gap_lo", "gap_hi", "ids"}) header.emplace_back(h);
  for (const auto& s : subsets) header.push_back(subset_name(s));
  for (const char* h : {"residual", "ambiguous", "edge_predicted"}) header.emplace_back(h);
  CsvWriter csv(fs::path(cfg.output) / "labels.csv", header);
  int unlabeled = 0;
  for (const auto& p : points) {
    const PatternSpec spec = detail::with_frequency(cfg.pattern, p.alpha);
    const ThetaMatrix theta = theta_for(spec);
    const int gen = cut_generator(theta, cfg.edge.cut_axis);
    for (const auto& g : p.gaps) {
      std::vector<std::string> row;
      for (int a = 0; a < cfg.pattern.label_dim(); ++a) row.push_back(p.alpha.str());
      row.push_back(format_double(g.gap_lo));
      row.push_back(format_double(g.gap_hi));
      row.push_back(format_double(g.ids));
      try {
        const LabelFit fit = fit_labels(g.ids, theta, cfg.gap.max_coeff, cfg.gap.tol);
        for (int c : fit.best.coeffs) row.push_back(std::to_string(c));
        row.push_back(format_double(fit.best.residual));
        row.push_back(fit.ambiguous ? "1" : "0");
        const EdgePrediction pred = predict_edge(fit.best, gen, cfg.pattern.kind);
        row.push_back(pred.conjectural ? (pred.edge ? "conjectural-true" : "conjectural-false")
                                       : (pred.edge ? "true" : "false"));
      } catch (const NumericalError&) {
        ++unlabeled;
        for (std::size_t i = 0; i < subsets.size(); ++i) row.emplace_back("");
        row.push_back("nan");
        row.push_back("");
        row.push_back("unlabeled");
      }
      csv.row(row);
    }
  }
  json mapping = json::array();
  for (const auto& s : subsets) mapping.push_back({{"column", subset_name(s)}, {"trace", "Pf(Theta_J)"}});
  write_sidecar(cfg, "labels", {"labels.csv"},
                {{"unlabeled_gaps", unlabeled}, {"cut_generator", cut_generator(shape, cfg.edge.cut_axis)},
                 {"subset_columns", mapping}});
  if (unlabeled) std::cerr << unlabeled << " gap(s) had no label within tolerance\n";
  return kExitOk;
}

int cmd_edge(const RunConfig& cfg) {
  const Rational a = exact_alpha(cfg);
  const int d = cfg.pattern.label_dim();
  const auto den = static_cast<int>(rotation_number(cfg.pattern).exact->den);
  const int l = den * cfg.edge.periods;
  SweepConfig sc = sweep_config(cfg);
  const auto bulk = spectra_at(sc, {a}, {l});
  const auto& gaps = bulk.front().gaps;

  const int k_max = *std::max_element(cfg.edge.cuts.begin(), cfg.edge.cuts.end());
  std::vector<int> cuts(static_cast<std::size_t>(k_max));
  std::iota(cuts.begin(), cuts.end(), 0);
  const std::array<int, 2> sizes{l, d == 2 ? l : 1};
  const auto bundle = solve_bundle(cfg.pattern, cfg.edge.cut_axis - 1, cuts, sizes, cfg.hopping, cfg.sweep.parallelism);

  const EdgeReport full = edge_spectrum(bundle, gaps, cfg.edge.width, kLocalizationThreshold, cfg.edge.epsilon_fraction);
  {
    CsvWriter csv(fs::path(cfg.output) / "edge.csv", {"cut_k", "energy", "localization", "gap_id"});
    for (const auto& s : full.states) {
      csv.row({std::to_string(s.cut), format_double(s.energy), format_double(s.localization), std::to_string(s.gap_id)});
    }
  }
  CsvWriter cov(fs::path(cfg.output) / "coverage.csv", {"gap_id", "K", "epsilon", "coverage"});
  for (int k : cfg.edge.cuts) {
    const EdgeReport rep = edge_spectrum(std::span(bundle).first(static_cast<std::size_t>(k)), gaps, cfg.edge.width,
                                         kLocalizationThreshold, cfg.edge.epsilon_fraction);
    for (const auto& c : rep.coverage) {
      cov.row({std::to_string(c.gap_id), std::to_string(k), format_double(c.epsilon), format_double(c.coverage)});
    }
  }
  json gap_list = json::array();
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    gap_list.push_back({{"gap_id", i}, {"gap_lo", gaps[i].gap_lo}, {"gap_hi", gaps[i].gap_hi}, {"ids", gaps[i].ids}});
  }
  write_sidecar(cfg, "edge", {"edge.csv", "coverage.csv"},
                {{"bulk_sites_per_axis", l}, {"gaps", gap_list}, {"localization_threshold", kLocalizationThreshold}});
  std::cout << gaps.size() << " bulk gaps, " << full.states.size() << " in-gap states over " << k_max << " cuts\n";
  return kExitOk;
}

int cmd_hull(const RunConfig& cfg) {
  if (cfg.pattern.label_dim() != 1) throw ValidationError("hull embedding needs a 1D pattern kind");
  const PointPattern p = generate(cfg.pattern, Window::line(0, cfg.hull.window - 1));
  const StrobeCloud cloud = strobe_embed(p, cfg.hull.depth);
  std::vector<std::string> header{"i"};
  for (int j = 1; j <= cfg.hull.depth; ++j) header.push_back("s_" + std::to_string(j));
  CsvWriter csv(fs::path(cfg.output) / "strobe.csv", header);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    std::vector<std::string> row{std::to_string(cloud.first_index + static_cast<int>(i))};
    for (double s : cloud.points[i]) row.push_back(format_double(s));
    csv.row(row);
  }
  write_sidecar(cfg, "hull", {"strobe.csv"}, {{"distinct_points", distinct_points(cloud)}});
  return kExitOk;
}

int cmd_check(const RunConfig& cfg) {
  auto results = run_invariant_suite(cfg.seed);
  {
    const auto rep = check_consistency(cfg.pattern, 1000, cfg.seed);
    results.push_back({"consistency/config pattern", rep.passed, rep.max_residual, kConsistencyTolerance, ""});
  }
  bool all = true;
  json list = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    std::printf("%-36s %s  value=%s bound=%s %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                format_double(r.value).c_str(), format_double(r.bound).c_str(), r.detail.c_str());
    list.push_back({{"name", r.name}, {"passed", r.passed}, {"value", r.value}, {"bound", r.bound}, {"detail", r.detail}});
  }
  write_sidecar(cfg, "check", {}, {{"results", list}, {"passed", all}});
  return all ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamically generated patterns: spectra, gap labels and edge states"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  Overrides o;
  app.add_option("--config", config_path, "JSON run configuration");
  auto opt = [&](const char* name, auto& target, const char* help) { app.add_option(name, target, help); };
  opt("--out", o.out, "output directory");
  opt("--seed", o.seed, "seed for the omega sample grid");
  opt("--parallelism", o.parallelism, "worker threads");
  opt("--kind", o.kind, "pattern kind");
  opt("--alpha", o.alpha, "frequencies, p/q or decimal");
  opt("--r", o.r, "sine amplitude");
  opt("--g", o.g, "smoothing parameter");
  opt("--delta", o.delta, "layer separation");
  opt("--delta-prime", o.delta_prime, "second layer separation");
  opt("--spacing-a", o.spacing_a, "cut-and-project long spacing");
  opt("--spacing-b", o.spacing_b, "cut-and-project short spacing");
  opt("--omega", o.omega, "seed point on the flat hull");
  opt("--beta", o.beta, "inverse decay length");
  opt("--cutoff", o.cutoff, "hopping cutoff distance");
  opt("--q-max", o.q_max, "largest denominator in a sweep");
  opt("--size-floor", o.size_floor, "minimum site count");
  opt("--min-periods", o.min_periods, "minimum periods per axis");
  opt("--omega-samples", o.omega_samples, "omega samples per frequency");
  opt("--min-width", o.min_width, "relative gap threshold");
  opt("--max-coeff", o.max_coeff, "largest |c_J| in label fits");
  opt("--tol", o.tol, "label fit tolerance");
  opt("--cuts", o.cuts, "bundle sizes K");
  opt("--width", o.width, "boundary width W");
  opt("--epsilon", o.epsilon, "coverage resolution as a fraction of the gap width");
  opt("--cut-axis", o.cut_axis, "label axis of the cut (1-based)");
  opt("--periods", o.periods, "chain length in approximant periods");
  opt("--depth", o.depth, "strobe depth");
  opt("--hull-window", o.hull_window, "strobe window length");

  auto* gen = app.add_subcommand("generate", "write a pattern window as CSV");
  gen->add_flag("--dump-matrix", o.dump_matrix, "also dump the periodic Hamiltonian");
  app.add_subcommand("butterfly", "spectral butterfly and gaps over rational frequencies");
  auto* lab = app.add_subcommand("labels", "fit integer gap labels");
  lab->add_flag("--butterfly", o.butterfly_labels, "label every gap of the full sweep");
  app.add_subcommand("edge", "edge spectrum of a bundle of half-space cuts");
  app.add_subcommand("hull", "stroboscopic spacing embedding");
  app.add_subcommand("check", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    json raw = config_path.empty() ? json::object() : load_json_file(config_path);
    const RunConfig cfg = parse_config(apply_overrides(raw, o));
    fs::create_directories(cfg.output);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "generate") return cmd_generate(cfg, o);
    if (cmd == "butterfly") return cmd_butterfly(cfg);
    if (cmd == "labels") return cmd_labels(cfg, o);
    if (cmd == "edge") return cmd_edge(cfg);
    if (cmd == "hull") return cmd_hull(cfg);
    return cmd_check(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }
}
