// Command-line front end: generate | run | compare | table1.
//
// Exit codes: 0 success, 1 invalid configuration, 2 no convergence within
// max_slots (all outputs are still written).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chanalloc/coding.hpp"
#include "chanalloc/csv.hpp"
#include "chanalloc/error.hpp"
#include "chanalloc/experiment.hpp"
#include "chanalloc/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace chanalloc;

namespace {

constexpr int kExitInvalidConfig = 1;
constexpr int kExitNotConverged = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<std::size_t> n;
  std::optional<int> k;
  std::optional<double> beta;
  std::optional<std::size_t> slots;
  std::string out = "out";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_scheme) {
  cmd->add_option("--config", f.config, "JSON scenario config");
  cmd->add_option("--seed", f.seed, "random seed");
  if (with_scheme) cmd->add_option("--scheme", f.scheme, "potential | learn_u1 | learn_u2 | random");
  cmd->add_option("--n", f.n, "number of transmitter/receiver pairs");
  cmd->add_option("--k", f.k, "number of channels");
  cmd->add_option("--beta", f.beta, "learning rate of the exponential weights");
  cmd->add_option("--slots", f.slots, "maximum adaptation slots");
  cmd->add_option("--out", f.out, "output directory");
}

ScenarioConfig resolve(const CommonFlags& f) {
  ScenarioConfig cfg;
  if (!f.config.empty()) cfg = load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.scheme) cfg.scheme = parse_scheme(*f.scheme);
  if (f.n) cfg.n_pairs = *f.n;
  if (f.k) cfg.n_channels = *f.k;
  if (f.beta) cfg.beta = *f.beta;
  if (f.slots) cfg.max_slots = *f.slots;
  validate(cfg);
  return cfg;
}

void save_config(const fs::path& dir, const ScenarioConfig& cfg) {
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << config_to_json(cfg);
}

void print_result(const SchemeResult& r) {
  std::printf("%-10s total=%s mean=%s variance=%s converged_at=%s\n", r.label.c_str(),
              csv::num(r.total_throughput).c_str(), csv::num(r.mean_throughput).c_str(),
              csv::num(r.variance_throughput).c_str(),
              r.trace.converged_at ? std::to_string(*r.trace.converged_at).c_str() : "-");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed channel allocation for cognitive radio networks"};
  app.require_subcommand(1);

  CommonFlags gen_flags, run_flags, cmp_flags;
  auto* gen = app.add_subcommand("generate", "write a random topology and its gain matrix");
  add_common(gen, gen_flags, false);

  auto* run = app.add_subcommand("run", "run one scheme and evaluate it");
  add_common(run, run_flags, true);

  auto* cmp = app.add_subcommand("compare", "run several schemes on a shared network and start");
  add_common(cmp, cmp_flags, false);
  std::string scheme_list = "potential,learn_u1,learn_u2,random";
  cmp->add_option("--schemes", scheme_list, "comma-separated schemes");

  auto* table = app.add_subcommand("table1", "print the RM(1,m) rate table as CSV");
  std::string table_out;
  table->add_option("--out", table_out, "also write table1.csv into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  try {
    if (*gen) {
      const auto cfg = resolve(gen_flags);
      const auto setup = prepare_scenario(cfg);
      write_network_files(gen_flags.out, setup.net);
      save_config(gen_flags.out, cfg);
      std::printf("wrote %zu pairs to %s\n", setup.net.size(), gen_flags.out.c_str());
      return 0;
    }
    if (*run) {
      const auto cfg = resolve(run_flags);
      const auto setup = prepare_scenario(cfg);
      const auto result = run_scheme(cfg, cfg.scheme, setup);
      write_run_outputs(run_flags.out, setup, result);
      save_config(run_flags.out, cfg);
      print_result(result);
      return result.converged ? 0 : kExitNotConverged;
    }
    if (*cmp) {
      const auto cfg = resolve(cmp_flags);
      std::vector<Scheme> schemes;
      for (const auto& name : csv::split(scheme_list)) schemes.push_back(parse_scheme(name));
      if (schemes.size() < 2) throw InvalidParameter("compare needs at least two schemes");
      const auto result = compare_schemes(cfg, schemes);
      write_comparison_outputs(cmp_flags.out, result);
      save_config(cmp_flags.out, cfg);
      print_result(result.initial);
      bool all_converged = true;
      for (const auto& r : result.results) {
        print_result(r);
        all_converged = all_converged && r.converged;
      }
      return all_converged ? 0 : kExitNotConverged;
    }
    if (*table) {
      const std::string text = rate_table_csv();
      std::cout << text;
      if (!table_out.empty()) {
        fs::create_directories(table_out);
        std::ofstream(fs::path(table_out) / "table1.csv", std::ios::binary) << text;
      }
      return 0;
    }
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  return 0;
}
