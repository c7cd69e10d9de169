#include "alcove/config.hpp"
#include "alcove/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

std::vector<double> parse_gamma_csv(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--gamma: not a number: '" + item + "'");
    }
    if (used != item.size()) {
      throw std::invalid_argument("--gamma: trailing characters in '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--gamma: empty value list");
  return out;
}

int resolve_threads(int from_config) {
  if (from_config > 0) return from_config;
  if (const char* env = std::getenv("ALCOVE_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

std::string format_stat(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for radial Brownian sheets on su(2)/su(3)"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run experiments and write JSON reports");
  std::string config_path, model, gamma_csv, out_dir;
  std::vector<std::string> experiments;
  long n = 0;
  double ds = 0.0;
  std::uint64_t seed = 7;
  int threads = 0;
  bool dump_samples = false;
  run->add_option("--config", config_path, "TOML config file (flags override it)");
  run->add_option("--model", model, "group model")->check(CLI::IsMember({"su2", "su3"}));
  run->add_option("--experiment", experiments,
                  "experiment name (repeatable; default: all supported)");
  run->add_option("--gamma", gamma_csv,
                  "drift as comma-separated simple-root values, e.g. 0.4 or 0.4,0.4");
  run->add_option("--n", n, "Monte Carlo replicas per seed (0 = default)");
  run->add_option("--ds", ds, "SDE grid step (0 = default)");
  run->add_option("--seed", seed, "base seed (statistical runs use seed..seed+2)");
  run->add_option("--threads", threads, "worker threads (or ALCOVE_THREADS)");
  run->add_option("--out", out_dir, "output directory for reports");
  run->add_flag("--dump-samples", dump_samples,
                "also write samples_<name>.csv value,density dumps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  alcove::RunConfig cfg;
  try {
    if (!config_path.empty()) alcove::apply_config_file(cfg, config_path);
    if (run->count("--model")) cfg.model = model;
    if (run->count("--experiment")) cfg.experiments = experiments;
    if (run->count("--gamma")) cfg.gamma = parse_gamma_csv(gamma_csv);
    if (run->count("--n")) cfg.n = n;
    if (run->count("--ds")) cfg.ds = ds;
    if (run->count("--seed")) cfg.seed = seed;
    if (run->count("--threads")) cfg.threads = threads;
    if (run->count("--out")) cfg.out_dir = out_dir;
    if (run->count("--dump-samples")) cfg.dump_samples = dump_samples;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const alcove::GroupModel g = alcove::build_su_model(cfg.model == "su2" ? 2 : 3);

  alcove::ExperimentParams params;
  params.gamma_alpha = cfg.gamma;
  params.n = cfg.n;
  params.ds = cfg.ds;
  params.seed = cfg.seed;
  params.threads = resolve_threads(cfg.threads);
  params.dump_samples = cfg.dump_samples;
  params.out_dir = cfg.out_dir;
  params.kernel = cfg.kernel;

  std::vector<std::string> suite = cfg.experiments;
  if (suite.empty()) {
    for (const auto& name : alcove::experiment_names()) {
      if (alcove::experiment_supports(g, name)) suite.push_back(name);
    }
  }

  // Validate the whole suite before any work starts.
  try {
    for (const auto& name : suite) {
      alcove::validate_experiment_request(g, name, params);
    }
    std::filesystem::create_directories(cfg.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  bool all_passed = true;
  std::vector<alcove::ExperimentReport> reports;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const std::string& name = suite[i];
    std::cout << "[" << std::setw(2) << (i + 1) << "/" << suite.size() << "] " << name
              << " ..." << std::flush;
    try {
      alcove::ExperimentReport rep = alcove::run_experiment(g, name, params);
      const auto path =
          std::filesystem::path(cfg.out_dir) / ("report_" + name + ".json");
      std::ofstream out(path);
      if (!out) {
        std::cerr << "\nconfig error: cannot write " << path.string() << "\n";
        return 2;
      }
      out << rep.to_json().dump(2) << "\n";
      std::cout << (rep.passed ? " pass" : " FAIL") << " (stat "
                << format_stat(rep.statistic) << " vs " << format_stat(rep.threshold)
                << ", " << std::fixed << std::setprecision(1) << rep.wall_time << " s)"
                << std::defaultfloat << "\n";
      all_passed = all_passed && rep.passed;
      reports.push_back(std::move(rep));
    } catch (const std::exception& e) {
      std::cout << " ERROR\n";
      std::cerr << name << ": " << e.what() << "\n";
      all_passed = false;
    }
  }

  std::cout << "\n" << std::left << std::setw(20) << "experiment" << std::setw(7)
            << "model" << std::setw(12) << "statistic" << std::setw(12) << "threshold"
            << "result\n";
  for (const auto& rep : reports) {
    std::cout << std::left << std::setw(20) << rep.name << std::setw(7) << cfg.model
              << std::setw(12) << format_stat(rep.statistic) << std::setw(12)
              << format_stat(rep.threshold) << (rep.passed ? "pass" : "FAIL") << "\n";
  }
  std::cout << "suite: " << (all_passed ? "all passed" : "FAILURES") << " ("
            << reports.size() << "/" << suite.size() << " completed)\n";
  return all_passed ? 0 : 1;
}
