// asl: adaptive-sensing support recovery toolkit.
//
// Subcommands: bounds, simulate, sweep, calibrate, pack-stars.
// Exit codes: 0 success, 2 usage/domain error, 3 capability refusal.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "asl/bounds.hpp"
#include "asl/errors.hpp"
#include "asl/harness.hpp"
#include "asl/star_packing.hpp"

using nlohmann::json;

namespace {

struct CliConfig {
  std::string class_text;
  std::string procedure = "adaptive";
  std::vector<double> mu_grid;
  double m = 0.0;
  std::optional<double> epsilon;
  std::optional<double> delta;
  double eta = 0.01;
  int32_t trials = 100;
  uint64_t seed = 1;
  std::string support_selection = "uniform";
  std::string output = "-";
  double cap = 10.0;
  int32_t threads = 0;
  bool timing = false;
};

// "a,b,c" or "start:stop:step"
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
      throw std::invalid_argument("grid: expected start:stop:step, got '" + text + "'");
    for (double v = a; v <= b + 1e-12; v += step) out.push_back(v);
    return out;
  }
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(std::stod(item));
  return out;
}

void load_config_file(const std::string& path, CliConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  json doc = json::parse(in);
  for (const auto& [key, value] : doc.items()) {
    if (key == "class") cfg.class_text = value.get<std::string>();
    else if (key == "procedure") cfg.procedure = value.get<std::string>();
    else if (key == "mu") cfg.mu_grid = {value.get<double>()};
    else if (key == "mu_grid") cfg.mu_grid = value.get<std::vector<double>>();
    else if (key == "m") cfg.m = value.get<double>();
    else if (key == "epsilon") cfg.epsilon = value.get<double>();
    else if (key == "delta") cfg.delta = value.get<double>();
    else if (key == "eta") cfg.eta = value.get<double>();
    else if (key == "trials") cfg.trials = value.get<int32_t>();
    else if (key == "seed") cfg.seed = value.get<uint64_t>();
    else if (key == "support_selection") cfg.support_selection = value.get<std::string>();
    else if (key == "output") cfg.output = value.get<std::string>();
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

asl::ExperimentConfig to_experiment(const CliConfig& cfg) {
  asl::ExperimentConfig e;
  e.spec = asl::ClassSpec::parse(cfg.class_text);
  if (cfg.procedure == "adaptive") e.procedure = asl::Procedure::Adaptive;
  else if (cfg.procedure == "nonadaptive") e.procedure = asl::Procedure::NonAdaptive;
  else throw std::invalid_argument("procedure must be adaptive or nonadaptive");
  e.mu_grid = cfg.mu_grid;
  e.m = cfg.m;
  if (cfg.epsilon && cfg.delta)
    throw std::invalid_argument("give either epsilon (Hamming) or delta (prob-error), not both");
  if (cfg.epsilon) {
    e.target = *cfg.epsilon;
    e.metric = asl::Metric::Hamming;
  } else if (cfg.delta) {
    e.target = *cfg.delta;
    e.metric = asl::Metric::ProbError;
  }
  e.eta = cfg.eta;
  e.trials = cfg.trials;
  e.base_seed = cfg.seed;
  if (cfg.support_selection == "uniform") e.support_selection = asl::SupportSelection::UniformOverClass;
  else if (cfg.support_selection == "corners") e.support_selection = asl::SupportSelection::CornerCases;
  else throw std::invalid_argument("support_selection must be uniform or corners");
  e.budget_cap_factor = cfg.cap;
  e.threads = cfg.threads;
  e.record_wall_time = cfg.timing;
  return e;
}

void write_output(const std::string& path, const std::string& payload) {
  if (path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output '" + path + "'");
  out << payload;
}

int cmd_bounds(const std::string& class_text, double m, std::optional<double> eps,
               std::optional<double> delta, const std::string& direction, bool empty_set,
               bool greedy_packing) {
  asl::BoundQuery q;
  q.spec = asl::ClassSpec::parse(class_text);
  q.m = m;
  if (eps && delta) throw std::invalid_argument("give either --eps or --delta, not both");
  if (!eps && !delta) throw std::invalid_argument("one of --eps / --delta is required");
  q.target = eps ? *eps : *delta;
  q.metric = eps ? asl::Metric::Hamming : asl::Metric::ProbError;
  if (direction == "sufficient") q.direction = asl::Direction::Sufficient;
  else if (direction == "nonadaptive") q.direction = asl::Direction::NecessaryNonAdaptive;
  else if (direction == "adaptive") q.direction = asl::Direction::NecessaryAdaptive;
  else throw std::invalid_argument("direction must be sufficient, nonadaptive or adaptive");
  q.include_empty_set = empty_set;
  q.use_greedy_packing = greedy_packing;

  const asl::BoundResult r = asl::bound_mu(q);
  std::cout.precision(10);
  std::cout << "mu_threshold = " << r.mu_threshold << "  [" << r.formula_id << "]\n";
  std::cout << "mu_squared   = " << r.mu_squared() << "\n";
  for (const auto& t : r.terms) std::cout << "  term " << t.name << " = " << t.value << "\n";
  for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
  return 0;
}

int cmd_pack_stars(int32_t p, int32_t s) {
  const auto stars = asl::greedy_star_packing(p, s);
  std::cout << "p=" << p << " s=" << s << " stars=" << stars.size()
            << " lemma2_bound=" << asl::star_packing_bound(p, s) << "\n";
  for (size_t i = 0; i < stars.size(); ++i) {
    std::cout << (i + 1) << ": center " << stars[i].center << " edges";
    for (int32_t w : stars[i].leaves) std::cout << " (" << stars[i].center << "," << w << ")";
    std::cout << "\n";
  }
  return 0;
}

int cmd_calibrate(double mu, double alpha, double beta, const std::string& gammas_text,
                  int32_t trials, uint64_t seed, int32_t threads, const std::string& output) {
  const auto gammas = parse_grid(gammas_text);
  const auto rows = asl::slrt_calibration(mu, alpha, beta, gammas, trials, seed, threads);
  write_output(output, asl::calibration_csv(rows));
  return 0;
}

int cmd_simulate(const CliConfig& cfg, bool sweep) {
  const asl::ExperimentConfig e = to_experiment(cfg);
  std::vector<asl::Summary> rows;
  if (sweep) {
    rows = asl::phase_sweep(e).rows;
  } else {
    rows.push_back(asl::run_trials(e));
  }
  write_output(cfg.output, asl::summaries_csv(e, rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive-sensing support recovery: bounds, simulations, calibration"};
  app.require_subcommand(1);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "evaluate a mu threshold formula");
  std::string b_class, b_direction = "sufficient";
  double b_m = 0.0;
  std::optional<double> b_eps, b_delta;
  bool b_empty = false, b_greedy = false;
  bounds->add_option("--class", b_class, "class spec, e.g. sset:n=1000,s=10")->required();
  bounds->add_option("--m", b_m, "precision budget")->required();
  bounds->add_option("--eps", b_eps, "Hamming target epsilon");
  bounds->add_option("--delta", b_delta, "probability-of-error target delta");
  bounds->add_option("--direction", b_direction, "sufficient | nonadaptive | adaptive");
  bounds->add_flag("--empty-set", b_empty, "include the empty set in the class");
  bounds->add_flag("--greedy-packing", b_greedy, "instantiate N(p,s) from the greedy packing");

  // simulate / sweep share options
  CliConfig sim, swp;
  std::string sim_config, swp_config, swp_grid;
  auto add_run_options = [](CLI::App* cmd, CliConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file (flags override)");
    cmd->add_option("--class", cfg.class_text, "class spec string");
    cmd->add_option("--procedure", cfg.procedure, "adaptive | nonadaptive");
    cmd->add_option("--m", cfg.m, "precision budget");
    cmd->add_option("--eps", cfg.epsilon, "Hamming target epsilon");
    cmd->add_option("--delta", cfg.delta, "probability-of-error target delta");
    cmd->add_option("--eta", cfg.eta, "per-test precision rule gamma = eta/mu^2");
    cmd->add_option("--trials", cfg.trials, "Monte Carlo trials per point");
    cmd->add_option("--seed", cfg.seed, "base seed");
    cmd->add_option("--support", cfg.support_selection, "uniform | corners");
    cmd->add_option("--cap", cfg.cap, "hard budget cap factor (<=0 disables)");
    cmd->add_option("--threads", cfg.threads, "worker threads (0: ASL_THREADS or hardware)");
    cmd->add_option("--output", cfg.output, "CSV path, '-' for stdout");
    cmd->add_flag("--timing", cfg.timing, "record wall_ms (breaks byte-for-byte determinism)");
  };
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo trials at a single mu");
  double sim_mu = 0.0;
  add_run_options(simulate, sim, sim_config);
  simulate->add_option("--mu", sim_mu, "signal magnitude");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo trials over a mu grid");
  add_run_options(sweep, swp, swp_config);
  sweep->add_option("--mu-grid", swp_grid, "comma list or start:stop:step");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "SLRT error-rate calibration sweep");
  double c_mu = 1.0, c_alpha = 0.05, c_beta = 0.05;
  std::string c_gammas = "0.1,0.01,0.001", c_output = "-";
  int32_t c_trials = 10000, c_threads = 0;
  uint64_t c_seed = 1;
  calibrate->add_option("--mu", c_mu, "signal magnitude");
  calibrate->add_option("--alpha", c_alpha, "target type-I error");
  calibrate->add_option("--beta", c_beta, "target type-II error");
  calibrate->add_option("--gammas", c_gammas, "decreasing gamma grid");
  calibrate->add_option("--trials", c_trials, "trials per gamma and hypothesis");
  calibrate->add_option("--seed", c_seed, "base seed");
  calibrate->add_option("--threads", c_threads, "worker threads");
  calibrate->add_option("--output", c_output, "CSV path, '-' for stdout");

  // pack-stars
  auto* pack = app.add_subcommand("pack-stars", "greedy edge-disjoint star packing");
  int32_t p_p = 0, p_s = 0;
  pack->add_option("--p", p_p, "vertices of the complete graph")->required();
  pack->add_option("--s", p_s, "star size")->required();

  try {
    app.parse(argc, argv);
    if (bounds->parsed())
      return cmd_bounds(b_class, b_m, b_eps, b_delta, b_direction, b_empty, b_greedy);
    if (simulate->parsed()) {
      CliConfig cfg;
      if (!sim_config.empty()) load_config_file(sim_config, cfg);
      // flags override file values
      for (const auto* opt : simulate->get_options()) {
        if (opt->count() == 0) continue;
        const std::string name = opt->get_name();
        if (name == "--class") cfg.class_text = sim.class_text;
        else if (name == "--procedure") cfg.procedure = sim.procedure;
        else if (name == "--m") cfg.m = sim.m;
        else if (name == "--eps") cfg.epsilon = sim.epsilon;
        else if (name == "--delta") cfg.delta = sim.delta;
        else if (name == "--eta") cfg.eta = sim.eta;
        else if (name == "--trials") cfg.trials = sim.trials;
        else if (name == "--seed") cfg.seed = sim.seed;
        else if (name == "--support") cfg.support_selection = sim.support_selection;
        else if (name == "--cap") cfg.cap = sim.cap;
        else if (name == "--threads") cfg.threads = sim.threads;
        else if (name == "--output") cfg.output = sim.output;
        else if (name == "--timing") cfg.timing = sim.timing;
        else if (name == "--mu") cfg.mu_grid = {sim_mu};
      }
      if (cfg.mu_grid.empty() && sim_mu > 0) cfg.mu_grid = {sim_mu};
      return cmd_simulate(cfg, false);
    }
    if (sweep->parsed()) {
      CliConfig cfg;
      if (!swp_config.empty()) load_config_file(swp_config, cfg);
      for (const auto* opt : sweep->get_options()) {
        if (opt->count() == 0) continue;
        const std::string name = opt->get_name();
        if (name == "--class") cfg.class_text = swp.class_text;
        else if (name == "--procedure") cfg.procedure = swp.procedure;
        else if (name == "--m") cfg.m = swp.m;
        else if (name == "--eps") cfg.epsilon = swp.epsilon;
        else if (name == "--delta") cfg.delta = swp.delta;
        else if (name == "--eta") cfg.eta = swp.eta;
        else if (name == "--trials") cfg.trials = swp.trials;
        else if (name == "--seed") cfg.seed = swp.seed;
        else if (name == "--support") cfg.support_selection = swp.support_selection;
        else if (name == "--cap") cfg.cap = swp.cap;
        else if (name == "--threads") cfg.threads = swp.threads;
        else if (name == "--output") cfg.output = swp.output;
        else if (name == "--timing") cfg.timing = swp.timing;
        else if (name == "--mu-grid") cfg.mu_grid = parse_grid(swp_grid);
      }
      return cmd_simulate(cfg, true);
    }
    if (calibrate->parsed())
      return cmd_calibrate(c_mu, c_alpha, c_beta, c_gammas, c_trials, c_seed, c_threads, c_output);
    if (pack->parsed()) return cmd_pack_stars(p_p, p_s);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const asl::RefusalError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
