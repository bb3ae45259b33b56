#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chanalloc/channel_game.hpp"
#include "chanalloc/matrix.hpp"
#include "chanalloc/rng.hpp"
#include "chanalloc/topology.hpp"

namespace chanalloc {

enum class SchedulerMode { Bernoulli, StrictSequential };

// Who gets decision rights in a slot.
struct Scheduler {
  double p_a = 0.0;  // per-user success probability, Bernoulli mode
  SchedulerMode mode = SchedulerMode::Bernoulli;

  // p_a = 1/N, one decision per slot on average.
  static Scheduler bernoulli(std::size_t n) { return {1.0 / static_cast<double>(n), SchedulerMode::Bernoulli}; }
  static Scheduler bernoulli_with(double p_a) { return {p_a, SchedulerMode::Bernoulli}; }
  // Round-robin, user (slot - 1) mod N acts in slot `slot`.
  static Scheduler strict_sequential() { return {1.0, SchedulerMode::StrictSequential}; }
};

std::string to_string(SchedulerMode mode);
SchedulerMode parse_scheduler_mode(const std::string& text);

// Each of the n users independently with probability p_a, ascending.
std::vector<std::size_t> bernoulli_actors(Rng& rng, std::size_t n, double p_a);

std::vector<std::size_t> scheduled_actors(const Scheduler& scheduler, std::size_t n,
                                          std::size_t slot, Rng& rng);

/// One slot of best-response play. All scheduled actors respond to the
/// incoming profile simultaneously; everyone else keeps their channel.
/// Slots are numbered from 1. Requires the cooperative utility.
StrategyProfile potential_game_step(const StrategyProfile& profile, const Network& net,
                                    const GameConfig& cfg, const Scheduler& scheduler, Rng& rng,
                                    std::size_t slot);

struct WeightSnapshot {
  std::size_t slot;
  Matrix weights;
};

enum class Outcome { NotConverged, Pure, Mixed };
std::string to_string(Outcome outcome);

/// Slot-by-slot record of one run. Index 0 is the starting state and index t
/// the state after slot t, so every series has (slots run + 1) entries.
struct RunTrace {
  std::vector<StrategyProfile> profiles;
  std::vector<double> potential_series;
  std::vector<WeightSnapshot> weight_snapshots;  // learning runs only
  std::optional<std::size_t> converged_at;
  Outcome outcome = Outcome::NotConverged;
  StrategyProfile final_profile;
  Matrix final_weights;  // learning runs only

  std::size_t slots_run() const { return profiles.empty() ? 0 : profiles.size() - 1; }
};

struct PotentialRunOptions {
  std::size_t max_slots = 5000;
  std::size_t stability_window = 50;
};

/// Repeats potential_game_step from `initial` until the profile has been
/// unchanged for a full stability window and is a pure Nash equilibrium,
/// or max_slots is reached. converged_at is the slot from which the final
/// profile held.
RunTrace run_potential_game(const Network& net, const GameConfig& cfg, const Scheduler& scheduler,
                            const StrategyProfile& initial, Rng& rng,
                            const PotentialRunOptions& opts = {});

/// Exponential weights (1+beta)^U normalized over the row, evaluated in the
/// log domain after subtracting the row maximum. Entries never underflow to 0.
std::vector<double> weights_from_cum_utils(std::span<const double> cum_utils, double beta);

struct LearningConfig {
  double beta = 0.1;
  // Multiplies every per-slot utility before accumulation.
  double utility_scale = 1.0;
  // When set, only Bernoulli-scheduled users redraw their channel each slot.
  bool bernoulli_gated = false;
  double p_a = 0.0;  // 0 selects 1/N
  std::size_t max_slots = 5000;
  std::size_t weight_window = 100;
  double weight_tolerance = 1e-3;
  double vertex_threshold = 0.99;
  bool stop_at_vertex = true;
  std::size_t snapshot_every = 1;
};

void validate(const LearningConfig& cfg);

/// Utility scale under which one unit of utility is the interference power
/// that would leave the median link at `reference_sir_db`. Raw utilities are
/// tiny for realistic path loss, so the learner barely moves without it.
double reference_utility_scale(const Network& net, double reference_sir_db = 10.0);

struct LearnerState {
  Matrix cum_utils;  // N x K, cumulative counterfactual utility per channel
  Matrix weights;    // N x K, row-stochastic
  double beta = 0.1;
  std::size_t t = 0;
  StrategyProfile last_played;

  static LearnerState initial(std::size_t n_users, int n_channels, double beta);
};

struct LearningStep {
  LearnerState state;
  StrategyProfile played;
};

/// One slot of repeated play: every (scheduled) user samples a channel from
/// its weights, then every user credits each channel with the utility it
/// would have earned there against the others' realized play.
LearningStep learning_step(const LearnerState& state, const Network& net, const GameConfig& cfg,
                           Rng& rng, const LearningConfig& lcfg = {});

// max weight above `threshold` in every row
bool at_vertex(const Matrix& weights, double threshold);

/// Iterates learning_step until every user's weights sit at a vertex
/// (Outcome::Pure) or all weights stay within weight_tolerance over the last
/// weight_window slots (Outcome::Mixed), or max_slots elapse.
RunTrace run_learning(const Network& net, const GameConfig& cfg, Rng& rng,
                      const LearningConfig& lcfg, const StrategyProfile& initial);

}  // namespace chanalloc
