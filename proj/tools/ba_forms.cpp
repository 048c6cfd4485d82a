// ba-forms: verification suites, operator application, norm-ratio searches,
// embedding sweeps, and Bellman probes over form-valued periodic fields.
//
// Exit codes: 0 success, 1 mathematical violation, 2 usage or input error.
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "baforms/bellman.hpp"
#include "baforms/heat.hpp"
#include "baforms/operator.hpp"
#include "baforms/verify.hpp"

using ordered_json = nlohmann::ordered_json;
using namespace baf;

namespace {

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const ordered_json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot open output file: " + out_path);
  os << j.dump(2) << "\n";
}

GridSpec torus(int m, int n, double box) {
  GridSpec s;
  s.m = m;
  s.sizes.assign(static_cast<size_t>(m), n);
  s.box.assign(static_cast<size_t>(m), box);
  return s;
}

// Shared option values; each subcommand binds the subset it uses.
struct Options {
  int m = 2, k = 1;
  double p = 2.0;
  int grid = 16;
  double box = 2 * M_PI;
  long long trials = 0;
  std::uint64_t seed = 1;
  int depth = 4;
  int budget = 40;
  double quad_T = 0;
  int quad_nodes = 48;
  int jobs = 1;
  std::vector<std::string> suites;
  std::string out, in_path, out_field, trace_csv, config_path;
  double perturb = 0;
};

// Flat key=value configuration, applied only to options the command line left
// untouched (flags win over the file, the file wins over defaults).  Values
// reuse the option's own conversion, so type errors surface as usage errors.
void apply_config_file(const std::string& path,
                       const std::map<std::string, CLI::Option*>& by_key) {
  std::ifstream is(path);
  if (!is) throw CLI::FileError("cannot read config file: " + path);
  std::set<std::string> config_fed;  // keys whose results came from this file
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::FileError("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end())
      throw CLI::FileError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                           "'");
    CLI::Option* opt = it->second;
    if (opt == nullptr) continue;  // valid key, not used by this command
    if (opt->count() > 0 && config_fed.count(key) == 0) continue;  // flag given: file loses
    opt->add_result(value);
    opt->run_callback();
    config_fed.insert(key);
  }
}

int cmd_verify(const Options& o) {
  if (o.perturb != 0) set_multiplier_perturbation(o.perturb);
  VerifyConfig cfg;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  cfg.trials = o.trials;
  cfg.suites = o.suites;
  const std::vector<SuiteResult> results = run_verification(cfg);

  long long violations = 0;
  ordered_json suites = ordered_json::array();
  for (const SuiteResult& r : results) {
    violations += r.violations;
    suites.push_back({{"name", r.name},
                      {"trials", r.trials},
                      {"violations", r.violations},
                      {"worst", r.worst},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass()}});
  }
  ordered_json j{{"command", "verify"},
                 {"seed", o.seed},
                 {"suites", suites},
                 {"violations", violations},
                 {"pass", violations == 0},
                 {"timestamp", timestamp_utc()}};
  emit(j, o.out);
  return violations == 0 ? 0 : 1;
}

int cmd_apply(const Options& o, bool m_given, bool k_given) {
  FormField f = read_field_file(o.in_path);
  if ((m_given && o.m != f.spec.m) || (k_given && o.k != f.k)) {
    std::cerr << "ba-forms: field header (m=" << f.spec.m << ", k=" << f.k
              << ") does not match the requested (m, k)\n";
    return 2;
  }
  FormField out = apply_operator(f);
  out.to_rep(Rep::spatial);
  write_field_file(o.out_field, out);
  return 0;
}

int cmd_norm(const Options& o) {
  const int restarts = o.trials > 0 ? static_cast<int>(o.trials) : 3;
  const NormSearchReport rep =
      norm_search(torus(o.m, o.grid, o.box), o.k, o.p, restarts, o.budget, o.seed);

  if (!o.trace_csv.empty()) {
    std::ofstream cs(o.trace_csv);
    if (!cs) throw std::runtime_error("cannot open trace file: " + o.trace_csv);
    cs << "iteration,best_ratio\n";
    for (const auto& [it, val] : rep.trace) cs << it << "," << val << "\n";
  }

  ordered_json j{{"command", "norm"},
                 {"m", rep.m},
                 {"k", rep.k},
                 {"p", rep.p},
                 {"search_exponent", rep.search_exponent},
                 {"seed", o.seed},
                 {"restarts", restarts},
                 {"budget", o.budget},
                 {"best_ratio", rep.best_ratio},
                 {"bound", rep.bound},
                 {"max_evaluated", rep.max_evaluated},
                 {"evaluations", rep.evaluations},
                 {"violated", rep.violated},
                 {"timestamp", timestamp_utc()}};
  emit(j, o.out);
  return rep.violated ? 1 : 0;
}

int cmd_embed(const Options& o) {
  const GridSpec spec = torus(o.m, o.grid, o.box);
  const double q = o.p / (o.p - 1.0);
  const long long total = o.trials > 0 ? o.trials : 100;
  Rng rng(o.seed);

  long long violations = 0;
  double worst = -1e300;
  for (long long t = 0; t < total; ++t) {
    FormField phi = random_form_field(spec, o.k, rng);
    FormField psi = random_form_field(spec, o.k, rng);
    const Quadrature quad = o.quad_T > 0
                                ? make_quadrature(o.quad_nodes, o.quad_T,
                                                  2.0 * std::max(active_freq_sq(phi),
                                                                 active_freq_sq(psi)))
                                : field_quadrature(phi, psi, o.quad_nodes);
    const double lhs = embedding_lhs(phi, psi, quad);
    const double bound = (o.p - 1.0) * norm_lp(phi, o.p) * norm_lp(psi, q);
    const double slack = (lhs - bound) / bound;
    worst = std::max(worst, slack);
    if (slack > 1e-9) ++violations;
  }

  ordered_json j{{"command", "embed"},
                 {"m", o.m},
                 {"k", o.k},
                 {"p", o.p},
                 {"seed", o.seed},
                 {"trials", total},
                 {"quad_nodes", o.quad_nodes},
                 {"violations", violations},
                 {"worst_relative_slack", worst},
                 {"pass", violations == 0},
                 {"timestamp", timestamp_utc()}};
  emit(j, o.out);
  return violations == 0 ? 0 : 1;
}

int cmd_bellman(const Options& o) {
  // A deterministic strictly interior point: means at fixed radius, unit
  // moment budgets.
  Rng rng = Rng(o.seed).child(0xbe11);
  BellmanPoint a;
  a.p = o.p;
  a.Xi = 1.0;
  a.Gamma = 1.0;
  a.xi = Eigen::VectorXd(o.m);
  a.gamma = Eigen::VectorXd(o.m);
  for (int i = 0; i < o.m; ++i) {
    a.xi(i) = rng.gaussian();
    a.gamma(i) = rng.gaussian();
  }
  a.xi *= 0.4 / a.xi.norm();
  a.gamma *= 0.4 / a.gamma.norm();

  const BellmanProbeResult res = bellman_probe(a, o.depth, o.budget, o.seed);
  const bool ok = res.value <= res.size_bound + 1e-9;

  ordered_json j{{"command", "bellman"},
                 {"p", a.p},
                 {"dim", o.m},
                 {"Xi", a.Xi},
                 {"Gamma", a.Gamma},
                 {"xi", std::vector<double>(a.xi.data(), a.xi.data() + a.xi.size())},
                 {"gamma", std::vector<double>(a.gamma.data(), a.gamma.data() + a.gamma.size())},
                 {"depth_cap", o.depth},
                 {"budget", o.budget},
                 {"seed", o.seed},
                 {"lower_estimate", res.value},
                 {"size_bound", res.size_bound},
                 {"samples", res.samples},
                 {"no_sample", res.no_sample},
                 {"pass", ok},
                 {"timestamp", timestamp_utc()}};
  emit(j, o.out);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-multiplier operator on form-valued fields: verification and search tool"};
  app.require_subcommand(1);

  Options o;

  // Every config key the tool understands; per subcommand the map is filled
  // with the options it actually defines, so foreign keys are tolerated but
  // typos are rejected.
  const std::vector<std::string> known_keys = {"m",     "k",      "p",      "grid",   "box",
                                               "trials", "seed",  "depth",  "budget", "quad-T",
                                               "quad-nodes", "jobs", "suite", "out"};
  std::map<CLI::App*, std::map<std::string, CLI::Option*>> keymap;
  auto reg = [&](CLI::App* c, const std::string& key, CLI::Option* opt) {
    if (keymap[c].empty())
      for (const auto& k : known_keys) keymap[c][k] = nullptr;
    keymap[c][key] = opt;
  };

  auto add_seed = [&](CLI::App* c) {
    reg(c, "seed", c->add_option("--seed", o.seed, "random seed (env fallback BA_FORMS_SEED)"));
  };
  auto add_out = [&](CLI::App* c) {
    reg(c, "out", c->add_option("--out", o.out, "write the JSON report here"));
  };
  auto add_config = [&](CLI::App* c) {
    c->add_option("--config", o.config_path, "flat key=value configuration file");
  };

  CLI::App* verify = app.add_subcommand("verify", "run the identity/inequality suites");
  add_seed(verify);
  add_out(verify);
  add_config(verify);
  reg(verify, "jobs",
      verify->add_option("--jobs", o.jobs, "max concurrent suites")->check(CLI::PositiveNumber));
  reg(verify, "trials", verify->add_option("--trials", o.trials, "override per-suite trial count"));
  reg(verify, "suite", verify->add_option("--suite", o.suites, "run only these suites (repeatable)"));
  verify->add_option("--debug-multiplier-perturbation", o.perturb,
                     "fault injection: offset every multiplier entry")
      ->group("Debug");

  CLI::App* apply = app.add_subcommand("apply", "apply the operator to a field file");
  add_config(apply);
  CLI::Option* am = apply->add_option("--m", o.m, "expected ambient dimension");
  CLI::Option* ak = apply->add_option("--k", o.k, "expected form degree");
  reg(apply, "m", am);
  reg(apply, "k", ak);
  apply->add_option("--in", o.in_path, "input field file")->required();
  apply->add_option("--out", o.out_field, "output field file")->required();

  CLI::App* norm = app.add_subcommand("norm", "search for the largest norm ratio");
  reg(norm, "m", norm->add_option("--m", o.m, "ambient dimension"));
  reg(norm, "k", norm->add_option("--k", o.k, "form degree"));
  reg(norm, "p", norm->add_option("--p", o.p, "Lebesgue exponent"));
  reg(norm, "grid", norm->add_option("--grid", o.grid, "points per axis"));
  reg(norm, "box", norm->add_option("--box", o.box, "box side length"));
  reg(norm, "trials", norm->add_option("--trials", o.trials, "random restarts"));
  reg(norm, "budget", norm->add_option("--budget", o.budget, "ascent iterations per restart"));
  norm->add_option("--trace-csv", o.trace_csv, "write the ascent trace as CSV");
  add_seed(norm);
  add_out(norm);
  add_config(norm);

  CLI::App* embed = app.add_subcommand("embed", "fuzz the bilinear embedding inequality");
  reg(embed, "m", embed->add_option("--m", o.m, "ambient dimension"));
  reg(embed, "k", embed->add_option("--k", o.k, "form degree"));
  reg(embed, "p", embed->add_option("--p", o.p, "Lebesgue exponent (>= 2)"));
  reg(embed, "grid", embed->add_option("--grid", o.grid, "points per axis"));
  reg(embed, "box", embed->add_option("--box", o.box, "box side length"));
  reg(embed, "trials", embed->add_option("--trials", o.trials, "random pairs to test"));
  reg(embed, "quad-T", embed->add_option("--quad-T", o.quad_T, "time-integral cutoff (0 = automatic)"));
  reg(embed, "quad-nodes", embed->add_option("--quad-nodes", o.quad_nodes, "quadrature node count"));
  add_seed(embed);
  add_out(embed);
  add_config(embed);

  CLI::App* bellman = app.add_subcommand("bellman", "probe the bilinear Bellman lower estimate");
  reg(bellman, "m", bellman->add_option("--m", o.m, "value-space dimension"));
  reg(bellman, "p", bellman->add_option("--p", o.p, "Lebesgue exponent (>= 2)"));
  reg(bellman, "depth", bellman->add_option("--depth", o.depth, "dyadic depth cap"));
  reg(bellman, "budget", bellman->add_option("--budget", o.budget, "sampling budget"));
  add_seed(bellman);
  add_out(bellman);
  add_config(bellman);

  CLI::App* active = nullptr;
  try {
    app.parse(argc, argv);
    for (CLI::App* c : {verify, apply, norm, embed, bellman})
      if (c->parsed()) active = c;
    if (active != nullptr) {
      if (!o.config_path.empty()) apply_config_file(o.config_path, keymap[active]);
      CLI::Option* seed_opt = keymap[active].count("seed") ? keymap[active]["seed"] : nullptr;
      if (seed_opt != nullptr && seed_opt->count() == 0) {
        if (const char* env_seed = std::getenv("BA_FORMS_SEED")) {
          seed_opt->add_result(env_seed);
          seed_opt->run_callback();
        }
      }
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "ba-forms: " << e.what() << "\n";
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(o);
    if (apply->parsed()) return cmd_apply(o, am->count() > 0, ak->count() > 0);
    if (norm->parsed()) return cmd_norm(o);
    if (embed->parsed()) return cmd_embed(o);
    if (bellman->parsed()) return cmd_bellman(o);
  } catch (const ParseError& e) {
    std::cerr << "ba-forms: parse error at line " << e.line << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ba-forms: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
