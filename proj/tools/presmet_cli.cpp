// Batch experiment runner: every estimator behind a subcommand, driven by a
// plain-text config, emitting JSON reports, CSV series, and spectrum caches.
// Same config + same seed => byte-identical artifacts, independent of the
// worker-thread count.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "presmet/config.hpp"
#include "presmet/rigidity.hpp"
#include "presmet/thermo.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace presmet;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
  long seed = 2024;

  Config config() const {
    if (config_path.empty()) throw ConfigError("--config is required");
    return Config::load(config_path);
  }
};

void write_text(const fs::path& path, const std::string& body) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << body;
}

void write_report(const Common& c, const std::string& name,
                  const ordered_json& j) {
  write_text(fs::path(c.out_dir) / name, j.dump(2) + "\n");
}

GroupSpec group_from(const Config& cfg) {
  std::string kind = cfg.get_or("group.kind", "free");
  if (kind == "free") {
    long rank = cfg.get_int_or("group.rank", 2);
    if (rank < 1 || rank > 4)
      throw ConfigError("group.rank must be in [1, 4]");
    return GroupSpec::free_group(static_cast<int>(rank));
  }
  if (kind == "surface") return GroupSpec::surface_genus2();
  throw ConfigError("group.kind must be free or surface, got \"" + kind +
                    "\"");
}

Representation rep_from(const Config& cfg, const std::string& section) {
  std::string type = cfg.get(section + ".type");
  Representation rep;
  if (type == "schottky") {
    std::vector<double> mult = cfg.get_doubles(section + ".multipliers");
    std::vector<double> ax = cfg.get_doubles(section + ".axes");
    if (ax.size() != 2 * mult.size())
      throw ConfigError(section + ".axes must list two endpoints per "
                        "multiplier");
    std::vector<std::pair<double, double>> axes;
    for (std::size_t i = 0; i < mult.size(); ++i)
      axes.emplace_back(ax[2 * i], ax[2 * i + 1]);
    rep = schottky_sl2(mult, axes, cfg.get_or(section + ".label", "schottky"));
  } else if (type == "fuchsian") {
    OctagonParams params;
    params.twist = cfg.get_double_or(section + ".twist", 0.0);
    rep = fuchsian_genus2(params);
  } else if (type == "file") {
    std::ifstream is(cfg.get(section + ".file"));
    if (!is)
      throw ConfigError("cannot open " + cfg.get(section + ".file"));
    rep = read_representation(is);
  } else {
    throw ConfigError(section + ".type must be schottky, fuchsian, or file, "
                      "got \"" + type + "\"");
  }
  long tau = cfg.get_int_or(section + ".tau", 2);
  if (tau < 2 || tau > 10) throw ConfigError(section + ".tau out of range");
  if (tau > 2) rep = tau_rep(rep, static_cast<int>(tau));
  return rep;
}

LengthKind kind_from(const Config& cfg) {
  return length_kind_from_name(cfg.get_or("spectrum.kind", "spectral"));
}

int cap_from(const Config& cfg) {
  long cap = cfg.get_int_or("spectrum.max_len", 8);
  if (cap < 1 || cap > 40) throw ConfigError("spectrum.max_len out of range");
  return static_cast<int>(cap);
}

std::vector<double> cutoffs_for(const Config& cfg, const MarkedSpectrum& sp) {
  if (cfg.has("spectrum.cutoffs")) return cfg.get_doubles("spectrum.cutoffs");
  return default_cutoffs(sp);
}

MarkedSpectrum spectrum_from(const Common& c, const Config& cfg,
                             const std::string& section = "representation") {
  return marked_spectrum(rep_from(cfg, section), kind_from(cfg), cap_from(cfg),
                         c.threads);
}

ordered_json estimate_json(const ThermoEstimate& est) {
  ordered_json j;
  j["value"] = est.value;
  j["method"] = est.method;
  j["cutoffs"] = est.cutoffs;
  j["per_cutoff"] = est.per_cutoff;
  j["convergence"] = est.convergence;
  for (const auto& [k, v] : est.extras) j[k] = v;
  return j;
}

ordered_json spectrum_json(const MarkedSpectrum& sp) {
  ordered_json j;
  j["label"] = sp.rep_label;
  j["kind"] = length_kind_name(sp.kind);
  j["max_len"] = sp.max_len;
  j["classes"] = sp.classes.size();
  j["failures"] = sp.failures.size();
  j["r_min"] = sp.r_min;
  j["metric_complete_T"] = sp.metric_complete_T();
  return j;
}

ordered_json form_json(const PressureFormValue& pf) {
  ordered_json j;
  j["value"] = pf.value;
  j["second_difference"] = pf.second_difference;
  j["step"] = pf.step;
  j["path"] = pf.path_label;
  j["entropy0"] = pf.entropy0;
  j["cutoffs"] = pf.cutoffs;
  if (!std::isnan(pf.companion_generic))
    j["companion_generic"] = pf.companion_generic;
  return j;
}

RepPath path_from(const Common& c, const Config& cfg,
                  const Representation& rep) {
  std::string type = cfg.get_or("path.type", "random");
  if (type == "twist")
    return fuchsian_twist_path(cfg.get_double_or("path.twist_scale", 1.0),
                               static_cast<int>(cfg.get_int_or("path.tau", 2)));
  if (type != "random")
    throw ConfigError("path.type must be random or twist, got \"" + type +
                      "\"");
  double scale = cfg.get_double_or("path.scale", 0.25);
  std::mt19937_64 rng(static_cast<std::uint64_t>(c.seed));
  std::vector<Mat> dirs;
  for (int i = 0; i < rep.spec.rank; ++i)
    dirs.push_back(suite_detail::random_traceless(rng, rep.dim, scale));
  return make_path(rep, dirs, "random-path");
}

// --- subcommands -----------------------------------------------------------

int cmd_enumerate(const Common& c) {
  Config cfg = c.config();
  GroupSpec spec = group_from(cfg);
  long cap = cfg.get_int_or("enumerate.max_len", 8);
  std::vector<Necklace> classes =
      enumerate_necklaces(spec, static_cast<int>(cap));
  std::string body;
  std::vector<std::size_t> per_len(cap + 1, 0);
  for (const Necklace& w : classes) {
    body += w.word().str() + "\n";
    ++per_len[w.size()];
  }
  write_text(fs::path(c.out_dir) / "classes.txt", body);
  std::string csv = "length,classes\n";
  for (long n = 1; n <= cap; ++n)
    csv += std::to_string(n) + "," + std::to_string(per_len[n]) + "\n";
  write_text(fs::path(c.out_dir) / "class_counts.csv", csv);
  ordered_json j;
  j["subcommand"] = "enumerate";
  j["group"] = cfg.get_or("group.kind", "free");
  j["max_len"] = cap;
  j["classes"] = classes.size();
  write_report(c, "report.json", j);
  return 0;
}

int cmd_spectrum(const Common& c) {
  Config cfg = c.config();
  MarkedSpectrum sp = spectrum_from(c, cfg);
  std::ostringstream os;
  write_spectrum(os, sp);
  write_text(fs::path(c.out_dir) / "spectrum.txt", os.str());
  ordered_json j;
  j["subcommand"] = "spectrum";
  j["spectrum"] = spectrum_json(sp);
  write_report(c, "report.json", j);
  return 0;
}

int cmd_entropy(const Common& c) {
  Config cfg = c.config();
  MarkedSpectrum sp = spectrum_from(c, cfg);
  std::vector<double> cutoffs = cutoffs_for(cfg, sp);
  ThermoEstimate slope = entropy(sp, cutoffs);
  ThermoEstimate root = solve_entropy_by_pressure(sp, cutoffs);
  std::string csv = "T,count,log_count\n";
  char line[96];
  for (double T : cutoffs) {
    std::size_t n = 0;
    for (double l : sp.lengths)
      if (l <= T) ++n;
    std::snprintf(line, sizeof line, "%.17g,%zu,%.17g\n", T, n,
                  std::log(static_cast<double>(n)));
    csv += line;
  }
  write_text(fs::path(c.out_dir) / "counts.csv", csv);
  ordered_json j;
  j["subcommand"] = "entropy";
  j["spectrum"] = spectrum_json(sp);
  j["entropy_slope"] = estimate_json(slope);
  j["entropy_root"] = estimate_json(root);
  write_report(c, "report.json", j);
  return 0;
}

int cmd_pressure(const Common& c) {
  Config cfg = c.config();
  MarkedSpectrum sp = spectrum_from(c, cfg);
  std::vector<double> cutoffs = cutoffs_for(cfg, sp);
  double g_scale = cfg.get_double_or("pressure.g_scale", 0.0);
  SpectrumFunction g{"g_scale*length", {}};
  for (double l : sp.lengths) g.periods.push_back(g_scale * l);
  ThermoEstimate est = pressure(sp, g, cutoffs);
  ordered_json j;
  j["subcommand"] = "pressure";
  j["spectrum"] = spectrum_json(sp);
  j["g_scale"] = g_scale;
  j["pressure"] = estimate_json(est);
  write_report(c, "report.json", j);
  return 0;
}

int cmd_intersection(const Common& c) {
  Config cfg = c.config();
  MarkedSpectrum sa = spectrum_from(c, cfg, "representation");
  MarkedSpectrum sb = spectrum_from(c, cfg, "representation_b");
  std::vector<double> cutoffs = cutoffs_for(cfg, sa);
  ThermoEstimate I = intersection(sa, sb, cutoffs);
  ThermoEstimate J = renormalized_intersection(sa, sb, cutoffs);
  ordered_json j;
  j["subcommand"] = "intersection";
  j["spectrum_a"] = spectrum_json(sa);
  j["spectrum_b"] = spectrum_json(sb);
  j["intersection"] = estimate_json(I);
  j["renormalized"] = estimate_json(J);
  write_report(c, "report.json", j);
  return 0;
}

int cmd_pressure_form(const Common& c) {
  Config cfg = c.config();
  Representation rep = rep_from(cfg, "representation");
  RepPath path = path_from(c, cfg, rep);
  double eps = cfg.get_double_or("path.eps", 1e-2);
  PressureFormValue pf =
      pressure_form(path, kind_from(cfg), eps, cap_from(cfg));
  ordered_json j;
  j["subcommand"] = "pressure-form";
  j["kind"] = length_kind_name(kind_from(cfg));
  j["form"] = form_json(pf);
  write_report(c, "report.json", j);
  return 0;
}

int cmd_degenerate_test(const Common& c) {
  Config cfg = c.config();
  Representation rep = rep_from(cfg, "representation");
  Mat J = contragredient_form(rep.dim);
  ContragredientData data = contragredient_data(rep, J);
  std::mt19937_64 rng(static_cast<std::uint64_t>(c.seed));
  Mat Ji = J.inverse();
  double scale = cfg.get_double_or("path.scale", 0.3);
  // valid directions are X = J^{-1} S with S matching the symmetry of J
  // (J X = X^T J then holds identically); trace removal preserves it
  bool j_symmetric = (J - J.transpose()).cwiseAbs().maxCoeff() == 0.0;
  auto sym_dir = [&] {
    Mat S = suite_detail::random_matrix(rng, rep.dim);
    Mat St = S.transpose();
    S = j_symmetric ? Mat((S + St) / 2) : Mat((S - St) / 2);
    Mat X = Ji * S;
    return Mat((X - X.trace() / rep.dim * Mat::Identity(rep.dim, rep.dim)) *
               scale);
  };
  std::vector<Mat> dirs;
  for (int i = 0; i < rep.spec.rank; ++i) dirs.push_back(sym_dir());
  RepPath degen = contragredient_path(rep, data, dirs);
  std::vector<Mat> gdirs;
  for (int i = 0; i < rep.spec.rank; ++i)
    gdirs.push_back(suite_detail::random_traceless(rng, rep.dim, scale));
  RepPath generic = make_path(rep, gdirs, "generic-companion");
  double eps = cfg.get_double_or("degenerate.eps", 1e-2);
  DegenerateReport r = degenerate_direction_test(
      degen, kind_from(cfg), cap_from(cfg), eps, {}, &generic);
  ordered_json j;
  j["subcommand"] = "degenerate-test";
  j["kind"] = length_kind_name(kind_from(cfg));
  j["max_normalized_first_difference"] = r.max_normalized;
  j["companion_ratio"] = r.companion_ratio;
  j["samples"] = r.sample_words;
  j["normalized_first_differences"] = r.normalized_first_differences;
  j["form"] = form_json(r.form);
  write_report(c, "report.json", j);
  return 0;
}

int cmd_typk(const Common& c) {
  Config cfg = c.config();
  Representation rep = rep_from(cfg, "representation");
  Necklace alpha =
      cyclic_canonical(Word::parse(cfg.get("typk.alpha")), rep.spec);
  Necklace beta =
      cyclic_canonical(Word::parse(cfg.get("typk.beta")), rep.spec);
  long n_max = cfg.get_int_or("typk.n_max", 30);
  TypkReport r = typk_limits(rep, alpha, beta, static_cast<int>(n_max));
  std::string csv = "n,ratio_pair,ratio_single\n";
  char line[96];
  for (std::size_t i = 0; i < r.ratio_pair.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", i + 1,
                  r.ratio_pair[i], r.ratio_single[i]);
    csv += line;
  }
  write_text(fs::path(c.out_dir) / "residuals.csv", csv);
  ordered_json j;
  j["subcommand"] = "typk";
  j["alpha"] = alpha.word().str();
  j["beta"] = beta.word().str();
  j["n_max"] = n_max;
  j["lhs_pair"] = r.lhs_pair;
  j["lhs_single"] = r.lhs_single;
  j["residual_pair"] = r.residual_pair;
  j["residual_single"] = r.residual_single;
  write_report(c, "report.json", j);
  return 0;
}

int cmd_rigidity_suite(const Common& c) {
  SuiteParams p;
  p.seed = static_cast<std::uint64_t>(c.seed);
  p.threads = c.threads;
  if (!c.config_path.empty()) {
    Config cfg = Config::load(c.config_path);
    auto geti = [&](const char* key, int dflt) {
      return static_cast<int>(cfg.get_int_or(std::string("suite.") + key,
                                             dflt));
    };
    p.oracle_cap = geti("oracle_cap", p.oracle_cap);
    p.tau_trials = geti("tau_trials", p.tau_trials);
    p.periods_trials = geti("periods_trials", p.periods_trials);
    p.combinatorial_cap = geti("combinatorial_cap", p.combinatorial_cap);
    p.scaling_cap = geti("scaling_cap", p.scaling_cap);
    p.ratio_cap = geti("ratio_cap", p.ratio_cap);
    if (cfg.has("suite.genus2_caps")) {
      p.genus2_caps.clear();
      for (double v : cfg.get_doubles("suite.genus2_caps"))
        p.genus2_caps.push_back(static_cast<int>(v));
    }
    p.rigidity_pairs = geti("rigidity_pairs", p.rigidity_pairs);
    p.rigidity_cap = geti("rigidity_cap", p.rigidity_cap);
    p.genus2_pair_cap = geti("genus2_pair_cap", p.genus2_pair_cap);
    p.typk_pairs = geti("typk_pairs", p.typk_pairs);
    p.typk_nmax = geti("typk_nmax", p.typk_nmax);
    p.degenerate_cap = geti("degenerate_cap", p.degenerate_cap);
    p.positivity_paths = geti("positivity_paths", p.positivity_paths);
    p.positivity_cap = geti("positivity_cap", p.positivity_cap);
    p.poincare_cutoff = geti("poincare_cutoff", p.poincare_cutoff);
  }
  std::vector<CriterionResult> results = run_rigidity_suite(p);
  bool all = true;
  ordered_json arr = ordered_json::array();
  for (const CriterionResult& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": "
              << r.detail << "\n";
    ordered_json e;
    e["id"] = r.id;
    e["name"] = r.name;
    e["pass"] = r.pass;
    e["detail"] = r.detail;
    arr.push_back(e);
  }
  ordered_json j;
  j["subcommand"] = "rigidity-suite";
  j["seed"] = c.seed;
  j["pass"] = all;
  j["criteria"] = arr;
  write_report(c, "suite.json", j);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"presmet: marked-length-spectrum thermodynamics"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--config", c.config_path, "experiment config file");
  app.add_option("--threads", c.threads, "worker threads")
      ->check(CLI::Range(1, 64));
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--out", c.out_dir, "output directory");

  std::map<std::string, int (*)(const Common&)> commands = {
      {"enumerate", cmd_enumerate},
      {"spectrum", cmd_spectrum},
      {"entropy", cmd_entropy},
      {"pressure", cmd_pressure},
      {"intersection", cmd_intersection},
      {"pressure-form", cmd_pressure_form},
      {"degenerate-test", cmd_degenerate_test},
      {"typk", cmd_typk},
      {"rigidity-suite", cmd_rigidity_suite},
  };
  for (auto& [name, fn] : commands)
    app.add_subcommand(name)->fallthrough()->callback([&c, fn = fn] {
      // exceptions propagate to the handler below
      int rc = fn(c);
      if (rc != 0) throw CLI::RuntimeError(rc);
    });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
