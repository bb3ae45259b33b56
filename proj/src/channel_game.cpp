#include "chanalloc/channel_game.hpp"

#include <algorithm>
#include <limits>

#include "chanalloc/csv.hpp"
#include "chanalloc/error.hpp"

namespace chanalloc {

namespace {

// Per-channel incoming and outgoing interference sums for user i, accumulated
// over j in index order. The utility functions below share this order so that
// equal utilities compare equal bit-for-bit.
struct ChannelSums {
  std::vector<double> incoming;
  std::vector<double> outgoing;
};

ChannelSums channel_sums(std::size_t i, const StrategyProfile& profile, const Network& net,
                         int n_channels) {
  ChannelSums s{std::vector<double>(n_channels, 0.0), std::vector<double>(n_channels, 0.0)};
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j == i) continue;
    const auto k = static_cast<std::size_t>(profile[j] - 1);
    s.incoming[k] += net.powers[j] * net.gain(j, i);
    s.outgoing[k] += net.powers[i] * net.gain(i, j);
  }
  return s;
}

}  // namespace

std::string to_string(UtilityKind kind) {
  return kind == UtilityKind::Selfish ? "selfish" : "cooperative";
}

void validate_profile(const StrategyProfile& profile, const Network& net, int n_channels) {
  if (n_channels < 1) throw InvalidParameter("need at least one channel");
  if (profile.size() != net.size()) throw InvalidParameter("profile length differs from N");
  for (Channel c : profile.channels) {
    if (c < 1 || c > n_channels) {
      throw InvalidParameter("channel " + std::to_string(c) + " outside 1.." +
                             std::to_string(n_channels));
    }
  }
}

StrategyProfile random_profile(std::size_t n, int n_channels, Rng& rng) {
  StrategyProfile p;
  p.channels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.channels.push_back(static_cast<Channel>(rng.uniform_index(n_channels)) + 1);
  }
  return p;
}

double sir(std::size_t i, const StrategyProfile& profile, const Network& net) {
  const double interference = incoming_interference(i, profile, net);
  // An empty interferer set sums to exactly zero; positive gains make any
  // non-empty set strictly positive.
  if (interference == 0.0) return std::numeric_limits<double>::infinity();
  return net.powers[i] * net.gain(i, i) / interference;
}

double incoming_interference(std::size_t i, const StrategyProfile& profile, const Network& net) {
  double sum = 0.0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j != i && profile[j] == profile[i]) sum += net.powers[j] * net.gain(j, i);
  }
  return sum;
}

double outgoing_interference(std::size_t i, const StrategyProfile& profile, const Network& net) {
  double sum = 0.0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j != i && profile[j] == profile[i]) sum += net.powers[i] * net.gain(i, j);
  }
  return sum;
}

double utility_selfish(std::size_t i, const StrategyProfile& profile, const Network& net) {
  return -incoming_interference(i, profile, net);
}

double utility_cooperative(std::size_t i, const StrategyProfile& profile, const Network& net) {
  return -(incoming_interference(i, profile, net) + outgoing_interference(i, profile, net));
}

double utility(UtilityKind kind, std::size_t i, const StrategyProfile& profile,
               const Network& net) {
  return kind == UtilityKind::Selfish ? utility_selfish(i, profile, net)
                                      : utility_cooperative(i, profile, net);
}

std::vector<double> channel_utilities(std::size_t i, const StrategyProfile& profile,
                                      const Network& net, const GameConfig& cfg) {
  const auto sums = channel_sums(i, profile, net, cfg.n_channels);
  std::vector<double> u(cfg.n_channels);
  for (int k = 0; k < cfg.n_channels; ++k) {
    u[k] = cfg.utility == UtilityKind::Selfish ? -sums.incoming[k]
                                               : -(sums.incoming[k] + sums.outgoing[k]);
  }
  return u;
}

double potential(const StrategyProfile& profile, const Network& net) {
  double pot = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    pot += -0.5 * incoming_interference(i, profile, net) -
           0.5 * outgoing_interference(i, profile, net);
  }
  return pot;
}

double generalized_potential(const StrategyProfile& profile, const Network& net, double a) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidParameter("weight a must lie in (0, 1)");
  double pot = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    pot += -a * incoming_interference(i, profile, net) -
           (1.0 - a) * outgoing_interference(i, profile, net);
  }
  return pot;
}

std::vector<Channel> best_response_set(std::size_t i, const StrategyProfile& profile,
                                       const Network& net, const GameConfig& cfg) {
  const auto u = channel_utilities(i, profile, net, cfg);
  const double best = *std::max_element(u.begin(), u.end());
  std::vector<Channel> argmax;
  for (int k = 0; k < cfg.n_channels; ++k) {
    if (u[k] == best) argmax.push_back(k + 1);
  }
  return argmax;
}

Channel best_response(std::size_t i, const StrategyProfile& profile, const Network& net,
                      const GameConfig& cfg, Rng& rng) {
  const auto argmax = best_response_set(i, profile, net, cfg);
  if (argmax.size() == 1) return argmax.front();
  return argmax[rng.uniform_index(argmax.size())];
}

bool is_pure_nash(const StrategyProfile& profile, const Network& net, const GameConfig& cfg) {
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto u = channel_utilities(i, profile, net, cfg);
    const double current = u[profile[i] - 1];
    for (double v : u) {
      if (v > current) return false;
    }
  }
  return true;
}

std::vector<StrategyProfile> enumerate_pure_nash(const Network& net, const GameConfig& cfg,
                                                 std::uint64_t cap) {
  if (cfg.n_channels < 1) throw InvalidParameter("need at least one channel");
  const std::size_t n = net.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / static_cast<std::uint64_t>(cfg.n_channels)) {
      throw TooLarge("K^N exceeds the enumeration cap of " + std::to_string(cap));
    }
    total *= static_cast<std::uint64_t>(cfg.n_channels);
  }

  std::vector<StrategyProfile> equilibria;
  StrategyProfile p(std::vector<Channel>(n, 1));
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (is_pure_nash(p, net, cfg)) equilibria.push_back(p);
    // Odometer increment, last user fastest, giving lexicographic order.
    for (std::size_t pos = n; pos-- > 0;) {
      if (p[pos] < cfg.n_channels) {
        ++p[pos];
        break;
      }
      p[pos] = 1;
    }
  }
  return equilibria;
}

std::string profile_to_csv(const StrategyProfile& profile) {
  std::string out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(profile[i]);
  }
  return out;
}

StrategyProfile profile_from_csv(const std::string& row) {
  StrategyProfile p;
  for (const auto& f : csv::split(row)) {
    const double v = csv::parse_double(f, "strategy profile");
    if (v != static_cast<Channel>(v)) throw InvalidParameter("channel must be an integer: " + f);
    p.channels.push_back(static_cast<Channel>(v));
  }
  return p;
}

}  // namespace chanalloc
