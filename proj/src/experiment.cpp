#include "chanalloc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chanalloc/coding.hpp"
#include "chanalloc/error.hpp"
#include "chanalloc/rng.hpp"

namespace chanalloc {

namespace {

// Child random streams of a scenario seed. The topology uses the seed itself
// so `generate --seed s` and `run --seed s` agree.
constexpr std::uint64_t kInitialStream = 1;
constexpr std::uint64_t kDynamicsStream = 10;
constexpr std::uint64_t kEvalStream = 20;

std::uint64_t scheme_index(Scheme s) { return static_cast<std::uint64_t>(s); }

// Per-user accumulation of SIR (dB, finite slots only) and throughput.
class SlotAverager {
 public:
  explicit SlotAverager(std::size_t n) : db_sum_(n, 0.0), db_count_(n, 0), thr_sum_(n, 0.0) {}

  void add(const StrategyProfile& profile, const Network& net) {
    for (std::size_t i = 0; i < net.size(); ++i) {
      const double s = sir(i, profile, net);
      if (std::isinf(s)) {
        thr_sum_[i] += normalized_throughput(s);
      } else {
        const double db = to_db(s);
        db_sum_[i] += db;
        ++db_count_[i];
        thr_sum_[i] += normalized_throughput(db);
      }
    }
    ++slots_;
  }

  void finish(SchemeResult& r) const {
    const std::size_t n = thr_sum_.size();
    r.per_user_avg_sir_db.resize(n);
    r.per_user_avg_throughput.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      r.per_user_avg_sir_db[i] = db_count_[i] ? db_sum_[i] / static_cast<double>(db_count_[i])
                                              : std::numeric_limits<double>::infinity();
      r.per_user_avg_throughput[i] = thr_sum_[i] / static_cast<double>(slots_);
    }
    const auto stats = summary_stats(r.per_user_avg_throughput);
    r.total_throughput = stats.total;
    r.mean_throughput = stats.mean;
    r.variance_throughput = stats.variance;
  }

 private:
  std::vector<double> db_sum_;
  std::vector<std::size_t> db_count_;
  std::vector<double> thr_sum_;
  std::size_t slots_ = 0;
};

StrategyProfile sample_from_weights(const Matrix& weights, Rng& rng) {
  StrategyProfile p;
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    const auto row = weights.row(i);
    const double u = rng.uniform01();
    double acc = 0.0;
    Channel c = static_cast<Channel>(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      acc += row[k];
      if (u < acc) {
        c = static_cast<Channel>(k) + 1;
        break;
      }
    }
    p.channels.push_back(c);
  }
  return p;
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Potential: return "potential";
    case Scheme::LearnU1: return "learn_u1";
    case Scheme::LearnU2: return "learn_u2";
    case Scheme::Random: return "random";
  }
  return "?";
}

Scheme parse_scheme(const std::string& text) {
  for (Scheme s : kAllSchemes) {
    if (to_string(s) == text) return s;
  }
  throw InvalidParameter("unknown scheme '" + text + "'");
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.n_pairs < 2) throw InvalidParameter("n_pairs must be at least 2");
  if (!(cfg.area_side > 0.0)) throw InvalidParameter("area_side must be positive");
  if (cfg.n_channels < 1) throw InvalidParameter("n_channels must be at least 1");
  if (!(cfg.beta > 0.0)) throw InvalidParameter("beta must be positive");
  if (cfg.utility_scale && !(*cfg.utility_scale > 0.0)) {
    throw InvalidParameter("utility_scale must be positive");
  }
  if (cfg.p_a && !(*cfg.p_a > 0.0 && *cfg.p_a <= 1.0)) {
    throw InvalidParameter("p_a must lie in (0, 1]");
  }
  if (cfg.eval_slots == 0) throw InvalidParameter("eval_slots must be positive");
  if (cfg.max_slots == 0) throw InvalidParameter("max_slots must be positive");
  if (cfg.stability_window == 0) throw InvalidParameter("stability_window must be positive");
}

ScenarioSetup prepare_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  ScenarioSetup setup{
      generate_network(cfg.seed, cfg.n_pairs, cfg.area_side, cfg.placement, cfg.propagation), {}};
  Rng rng(derive_seed(cfg.seed, kInitialStream));
  setup.initial = random_profile(cfg.n_pairs, cfg.n_channels, rng);
  return setup;
}

SchemeResult evaluate_profile(const Network& net, const StrategyProfile& profile, std::string label) {
  SlotAverager avg(net.size());
  // Every slot replays the same profile, so the average over eval_slots
  // equals a single slot exactly.
  avg.add(profile, net);
  SchemeResult r;
  r.label = std::move(label);
  avg.finish(r);
  return r;
}

SchemeResult run_scheme(const ScenarioConfig& cfg, Scheme scheme, const ScenarioSetup& setup) {
  validate(cfg);
  const Network& net = setup.net;
  Rng dyn(derive_seed(cfg.seed, kDynamicsStream + scheme_index(scheme)));
  Rng eval(derive_seed(cfg.seed, kEvalStream + scheme_index(scheme)));

  SchemeResult r;
  r.label = to_string(scheme);
  SlotAverager avg(net.size());

  switch (scheme) {
    case Scheme::Potential: {
      const Scheduler sched =
          cfg.scheduler_mode == SchedulerMode::StrictSequential
              ? Scheduler::strict_sequential()
              : Scheduler::bernoulli_with(cfg.p_a.value_or(1.0 / static_cast<double>(net.size())));
      r.trace = run_potential_game(net, {cfg.n_channels, UtilityKind::Cooperative}, sched,
                                   setup.initial, dyn, {cfg.max_slots, cfg.stability_window});
      r.converged = r.trace.outcome != Outcome::NotConverged;
      avg.add(r.trace.final_profile, net);
      break;
    }
    case Scheme::LearnU1:
    case Scheme::LearnU2: {
      LearningConfig lc;
      lc.beta = cfg.beta;
      lc.utility_scale = cfg.utility_scale.value_or(reference_utility_scale(net, cfg.reference_sir_db));
      lc.bernoulli_gated = cfg.learning_gated;
      lc.p_a = cfg.p_a.value_or(0.0);
      lc.max_slots = cfg.max_slots;
      const GameConfig game{cfg.n_channels, scheme == Scheme::LearnU1 ? UtilityKind::Selfish
                                                                      : UtilityKind::Cooperative};
      r.utility_scale = lc.utility_scale;
      r.trace = run_learning(net, game, dyn, lc, setup.initial);
      r.converged = r.trace.outcome != Outcome::NotConverged;
      if (r.trace.outcome == Outcome::Pure) {
        avg.add(r.trace.final_profile, net);
      } else {
        for (std::size_t t = 0; t < cfg.eval_slots; ++t) {
          avg.add(sample_from_weights(r.trace.final_weights, eval), net);
        }
      }
      break;
    }
    case Scheme::Random: {
      for (std::size_t t = 0; t < cfg.eval_slots; ++t) {
        avg.add(random_profile(net.size(), cfg.n_channels, eval), net);
      }
      break;
    }
  }
  avg.finish(r);
  return r;
}

SchemeResult run_scenario(const ScenarioConfig& cfg) {
  return run_scheme(cfg, cfg.scheme, prepare_scenario(cfg));
}

Comparison compare_schemes(const ScenarioConfig& cfg, std::span<const Scheme> schemes) {
  if (schemes.empty()) throw InvalidParameter("no schemes to compare");
  Comparison c{prepare_scenario(cfg), {}, {}};
  c.initial = evaluate_profile(c.setup.net, c.setup.initial, "initial");
  for (Scheme s : schemes) c.results.push_back(run_scheme(cfg, s, c.setup));
  return c;
}

std::vector<CdfPoint> empirical_cdf(std::span<const double> values) {
  if (values.empty()) throw InvalidParameter("empirical CDF of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> cdf;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    cdf.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  return cdf;
}

SummaryStats summary_stats(std::span<const double> values) {
  if (values.empty()) throw InvalidParameter("summary of an empty sample");
  double total = 0.0;
  for (double v : values) total += v;
  const double mean = total / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, ss / static_cast<double>(values.size()), total};
}

double fraction_below(std::span<const double> values, double threshold) {
  if (values.empty()) throw InvalidParameter("fraction of an empty sample");
  const auto below = std::count_if(values.begin(), values.end(),
                                   [threshold](double v) { return v < threshold; });
  return static_cast<double>(below) / static_cast<double>(values.size());
}

}  // namespace chanalloc
