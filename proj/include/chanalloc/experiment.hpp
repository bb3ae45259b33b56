#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chanalloc/channel_game.hpp"
#include "chanalloc/dynamics.hpp"
#include "chanalloc/topology.hpp"

namespace chanalloc {

enum class Scheme { Potential, LearnU1, LearnU2, Random };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& text);
inline constexpr Scheme kAllSchemes[] = {Scheme::Potential, Scheme::LearnU1, Scheme::LearnU2,
                                         Scheme::Random};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  std::size_t n_pairs = 30;
  double area_side = 200.0;
  int n_channels = 4;
  Scheme scheme = Scheme::Potential;

  double beta = 0.1;
  // Unset: reference_utility_scale(network, reference_sir_db).
  std::optional<double> utility_scale;
  double reference_sir_db = 10.0;
  bool learning_gated = false;

  SchedulerMode scheduler_mode = SchedulerMode::Bernoulli;
  std::optional<double> p_a;  // unset: 1/N

  Placement placement = Placement::disk(50.0);
  Propagation propagation;

  std::size_t eval_slots = 1000;
  std::size_t max_slots = 5000;
  std::size_t stability_window = 50;
};

void validate(const ScenarioConfig& cfg);

struct SchemeResult {
  std::string label;  // scheme name, or "initial" for the starting assignment
  std::vector<double> per_user_avg_sir_db;
  std::vector<double> per_user_avg_throughput;
  double total_throughput = 0.0;
  double mean_throughput = 0.0;
  double variance_throughput = 0.0;
  RunTrace trace;       // empty for the random scheme and the initial baseline
  bool converged = true;
  double utility_scale = 1.0;  // learning schemes only
};

// The network and starting assignment every scheme of a seed shares.
struct ScenarioSetup {
  Network net;
  StrategyProfile initial;
};

ScenarioSetup prepare_scenario(const ScenarioConfig& cfg);

SchemeResult run_scheme(const ScenarioConfig& cfg, Scheme scheme, const ScenarioSetup& setup);

/// Builds the network, draws the shared initial assignment, runs cfg.scheme to
/// convergence, then averages SIR and throughput over cfg.eval_slots slots.
SchemeResult run_scenario(const ScenarioConfig& cfg);

// Replays one fixed profile over the evaluation horizon.
SchemeResult evaluate_profile(const Network& net, const StrategyProfile& profile, std::string label);

struct Comparison {
  ScenarioSetup setup;
  SchemeResult initial;
  std::vector<SchemeResult> results;
};

/// Runs every scheme on one shared network and initial assignment.
/// Each result equals run_scenario with that scheme and the same config.
Comparison compare_schemes(const ScenarioConfig& cfg, std::span<const Scheme> schemes);

struct CdfPoint {
  double x;
  double fraction;  // share of values <= x
};

// Right-continuous empirical CDF, one point per distinct value.
std::vector<CdfPoint> empirical_cdf(std::span<const double> values);

struct SummaryStats {
  double mean;
  double variance;  // population variance
  double total;
};

SummaryStats summary_stats(std::span<const double> values);

// Share of values strictly below `threshold`.
double fraction_below(std::span<const double> values, double threshold);

}  // namespace chanalloc
