#include "chanalloc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "chanalloc/error.hpp"

namespace chanalloc {

namespace {

// exp(-700) is still a normal double; keeps every weight strictly positive.
constexpr double kMinLogWeight = -700.0;

Channel sample_channel(std::span<const double> weights, Rng& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return static_cast<Channel>(k) + 1;
  }
  return static_cast<Channel>(weights.size());
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  }
  return d;
}

StrategyProfile argmax_profile(const Matrix& weights) {
  StrategyProfile p;
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    const auto row = weights.row(i);
    p.channels.push_back(
        static_cast<Channel>(std::max_element(row.begin(), row.end()) - row.begin()) + 1);
  }
  return p;
}

}  // namespace

std::string to_string(SchedulerMode mode) {
  return mode == SchedulerMode::Bernoulli ? "bernoulli" : "strict-sequential";
}

SchedulerMode parse_scheduler_mode(const std::string& text) {
  if (text == "bernoulli") return SchedulerMode::Bernoulli;
  if (text == "strict-sequential") return SchedulerMode::StrictSequential;
  throw InvalidParameter("unknown scheduler mode '" + text + "'");
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Pure: return "pure";
    case Outcome::Mixed: return "mixed";
    default: return "none";
  }
}

std::vector<std::size_t> bernoulli_actors(Rng& rng, std::size_t n, double p_a) {
  if (!(p_a >= 0.0 && p_a <= 1.0)) throw InvalidParameter("p_a must lie in [0, 1]");
  std::vector<std::size_t> actors;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(p_a)) actors.push_back(i);
  }
  return actors;
}

std::vector<std::size_t> scheduled_actors(const Scheduler& scheduler, std::size_t n,
                                          std::size_t slot, Rng& rng) {
  if (scheduler.mode == SchedulerMode::StrictSequential) {
    return {(slot + n - 1) % n};
  }
  if (!(scheduler.p_a > 0.0 && scheduler.p_a <= 1.0)) {
    throw InvalidParameter("scheduler p_a must lie in (0, 1]");
  }
  return bernoulli_actors(rng, n, scheduler.p_a);
}

StrategyProfile potential_game_step(const StrategyProfile& profile, const Network& net,
                                    const GameConfig& cfg, const Scheduler& scheduler, Rng& rng,
                                    std::size_t slot) {
  if (cfg.utility != UtilityKind::Cooperative) {
    throw UnsupportedConfiguration("best-response play needs the cooperative utility");
  }
  StrategyProfile next = profile;
  for (std::size_t i : scheduled_actors(scheduler, net.size(), slot, rng)) {
    next[i] = best_response(i, profile, net, cfg, rng);
  }
  return next;
}

RunTrace run_potential_game(const Network& net, const GameConfig& cfg, const Scheduler& scheduler,
                            const StrategyProfile& initial, Rng& rng,
                            const PotentialRunOptions& opts) {
  if (opts.max_slots == 0) throw InvalidParameter("max_slots must be positive");
  validate_profile(initial, net, cfg.n_channels);
  if (cfg.utility != UtilityKind::Cooperative) {
    throw UnsupportedConfiguration("best-response play needs the cooperative utility");
  }

  RunTrace trace;
  trace.profiles.push_back(initial);
  trace.potential_series.push_back(potential(initial, net));
  std::size_t last_change = 0;

  for (std::size_t slot = 1; slot <= opts.max_slots; ++slot) {
    auto next = potential_game_step(trace.profiles.back(), net, cfg, scheduler, rng, slot);
    if (next != trace.profiles.back()) last_change = slot;
    trace.potential_series.push_back(potential(next, net));
    trace.profiles.push_back(std::move(next));
    if (slot - last_change >= opts.stability_window &&
        is_pure_nash(trace.profiles.back(), net, cfg)) {
      trace.converged_at = last_change;
      trace.outcome = Outcome::Pure;
      break;
    }
  }
  trace.final_profile = trace.profiles.back();
  return trace;
}

std::vector<double> weights_from_cum_utils(std::span<const double> cum_utils, double beta) {
  if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
  const double log_base = std::log1p(beta);
  const double top = *std::max_element(cum_utils.begin(), cum_utils.end());
  std::vector<double> w(cum_utils.size());
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::exp(std::max((cum_utils[k] - top) * log_base, kMinLogWeight));
    total += w[k];
  }
  for (double& x : w) x /= total;
  return w;
}

double reference_utility_scale(const Network& net, double reference_sir_db) {
  std::vector<double> desired;
  for (std::size_t i = 0; i < net.size(); ++i) desired.push_back(net.powers[i] * net.gain(i, i));
  const auto mid = desired.begin() + static_cast<std::ptrdiff_t>(desired.size() / 2);
  std::nth_element(desired.begin(), mid, desired.end());
  return std::pow(10.0, reference_sir_db / 10.0) / *mid;
}

void validate(const LearningConfig& cfg) {
  if (!(cfg.beta > 0.0)) throw InvalidParameter("beta must be positive");
  if (!(cfg.utility_scale > 0.0)) throw InvalidParameter("utility scale must be positive");
  if (!(cfg.p_a >= 0.0 && cfg.p_a <= 1.0)) throw InvalidParameter("p_a must lie in [0, 1]");
  if (cfg.max_slots == 0) throw InvalidParameter("max_slots must be positive");
  if (cfg.weight_window == 0) throw InvalidParameter("weight window must be positive");
  if (cfg.snapshot_every == 0) throw InvalidParameter("snapshot interval must be positive");
}

LearnerState LearnerState::initial(std::size_t n_users, int n_channels, double beta) {
  if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
  if (n_channels < 1) throw InvalidParameter("need at least one channel");
  LearnerState s;
  s.cum_utils = Matrix(n_users, n_channels, 0.0);
  s.weights = Matrix(n_users, n_channels, 1.0 / n_channels);
  s.beta = beta;
  return s;
}

LearningStep learning_step(const LearnerState& state, const Network& net, const GameConfig& cfg,
                           Rng& rng, const LearningConfig& lcfg) {
  const std::size_t n = net.size();
  if (state.cum_utils.rows() != n || state.cum_utils.cols() != static_cast<std::size_t>(cfg.n_channels)) {
    throw InvalidParameter("learner state shape does not match N x K");
  }

  LearningStep out{state, {}};
  StrategyProfile played;
  if (lcfg.bernoulli_gated && state.last_played.size() == n) {
    played = state.last_played;
    const double p_a = lcfg.p_a > 0.0 ? lcfg.p_a : 1.0 / static_cast<double>(n);
    for (std::size_t i : bernoulli_actors(rng, n, p_a)) {
      played[i] = sample_channel(state.weights.row(i), rng);
    }
  } else {
    played.channels.resize(n);
    for (std::size_t i = 0; i < n; ++i) played[i] = sample_channel(state.weights.row(i), rng);
  }

  auto& next = out.state;
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = channel_utilities(i, played, net, cfg);
    auto cum = next.cum_utils.row(i);
    for (int k = 0; k < cfg.n_channels; ++k) cum[k] += lcfg.utility_scale * u[k];
    const auto w = weights_from_cum_utils(cum, next.beta);
    std::copy(w.begin(), w.end(), next.weights.row(i).begin());
  }
  next.t = state.t + 1;
  next.last_played = played;
  out.played = std::move(played);
  return out;
}

bool at_vertex(const Matrix& weights, double threshold) {
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    const auto row = weights.row(i);
    if (!(*std::max_element(row.begin(), row.end()) > threshold)) return false;
  }
  return true;
}

RunTrace run_learning(const Network& net, const GameConfig& cfg, Rng& rng,
                      const LearningConfig& lcfg, const StrategyProfile& initial) {
  validate(lcfg);
  validate_profile(initial, net, cfg.n_channels);

  auto state = LearnerState::initial(net.size(), cfg.n_channels, lcfg.beta);
  state.last_played = initial;

  RunTrace trace;
  trace.profiles.push_back(initial);
  trace.potential_series.push_back(potential(initial, net));
  trace.weight_snapshots.push_back({0, state.weights});

  // Weights of the last weight_window + 1 slots, oldest first.
  std::deque<Matrix> window{state.weights};

  for (std::size_t slot = 1; slot <= lcfg.max_slots; ++slot) {
    auto step = learning_step(state, net, cfg, rng, lcfg);
    state = std::move(step.state);
    trace.potential_series.push_back(potential(step.played, net));
    trace.profiles.push_back(std::move(step.played));
    if (slot % lcfg.snapshot_every == 0) trace.weight_snapshots.push_back({slot, state.weights});

    window.push_back(state.weights);
    if (window.size() > lcfg.weight_window + 1) window.pop_front();

    if (lcfg.stop_at_vertex && at_vertex(state.weights, lcfg.vertex_threshold)) {
      trace.outcome = Outcome::Pure;
      trace.converged_at = slot;
      break;
    }
    if (window.size() == lcfg.weight_window + 1) {
      double drift = 0.0;
      for (const auto& w : window) drift = std::max(drift, max_abs_diff(w, state.weights));
      if (drift < lcfg.weight_tolerance) {
        trace.outcome = at_vertex(state.weights, lcfg.vertex_threshold) ? Outcome::Pure : Outcome::Mixed;
        trace.converged_at = slot;
        break;
      }
    }
  }

  if (trace.weight_snapshots.back().slot != trace.slots_run()) {
    trace.weight_snapshots.push_back({trace.slots_run(), state.weights});
  }
  trace.final_weights = state.weights;
  trace.final_profile = trace.outcome == Outcome::Pure ? argmax_profile(state.weights)
                                                       : trace.profiles.back();
  return trace;
}

}  // namespace chanalloc
