#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chanalloc/rng.hpp"
#include "chanalloc/topology.hpp"

namespace chanalloc {

// Channels are numbered 1..K everywhere, including serialized profiles.
using Channel = int;

struct StrategyProfile {
  std::vector<Channel> channels;

  StrategyProfile() = default;
  explicit StrategyProfile(std::vector<Channel> c) : channels(std::move(c)) {}

  std::size_t size() const { return channels.size(); }
  Channel operator[](std::size_t i) const { return channels[i]; }
  Channel& operator[](std::size_t i) { return channels[i]; }

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

enum class UtilityKind { Selfish, Cooperative };

struct GameConfig {
  int n_channels = 4;
  UtilityKind utility = UtilityKind::Cooperative;
};

std::string to_string(UtilityKind kind);

// Throws InvalidParameter unless every entry is in 1..K and the length is N.
void validate_profile(const StrategyProfile& profile, const Network& net, int n_channels);

StrategyProfile random_profile(std::size_t n, int n_channels, Rng& rng);

// 1 iff both users sit on the same channel.
inline int co_channel(Channel a, Channel b) { return a == b ? 1 : 0; }

/// Desired over co-channel interference power at the receiver of pair i.
/// Returns +infinity when no other user shares i's channel.
double sir(std::size_t i, const StrategyProfile& profile, const Network& net);

// Interference received at pair i's receiver from its co-channel users.
double incoming_interference(std::size_t i, const StrategyProfile& profile, const Network& net);
// Interference pair i's transmitter puts on the receivers of its co-channel users.
double outgoing_interference(std::size_t i, const StrategyProfile& profile, const Network& net);

double utility_selfish(std::size_t i, const StrategyProfile& profile, const Network& net);
double utility_cooperative(std::size_t i, const StrategyProfile& profile, const Network& net);
double utility(UtilityKind kind, std::size_t i, const StrategyProfile& profile, const Network& net);

/// Utility of user i for every channel 1..K with the other users held fixed.
/// Entry k-1 is bit-identical to utility(kind, i, profile with s_i = k, net).
std::vector<double> channel_utilities(std::size_t i, const StrategyProfile& profile,
                                      const Network& net, const GameConfig& cfg);

/// Network potential: half the sum of incoming plus outgoing interference,
/// negated. Unilateral changes in it equal the mover's cooperative utility change.
double potential(const StrategyProfile& profile, const Network& net);

/// Potential with the incoming/outgoing split weighted a and 1-a, 0 < a < 1.
/// Reduces to potential() at a = 0.5.
double generalized_potential(const StrategyProfile& profile, const Network& net, double a);

// All channels attaining the maximal utility for user i, ascending.
std::vector<Channel> best_response_set(std::size_t i, const StrategyProfile& profile,
                                       const Network& net, const GameConfig& cfg);

// A uniformly chosen member of best_response_set. Draws from rng only on ties.
Channel best_response(std::size_t i, const StrategyProfile& profile, const Network& net,
                      const GameConfig& cfg, Rng& rng);

bool is_pure_nash(const StrategyProfile& profile, const Network& net, const GameConfig& cfg);

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Every pure Nash equilibrium by exhaustive scan of all K^N profiles,
/// in lexicographic order. Throws TooLarge when K^N exceeds `cap`.
std::vector<StrategyProfile> enumerate_pure_nash(const Network& net, const GameConfig& cfg,
                                                 std::uint64_t cap = kDefaultEnumerationCap);

// CSV row "s_1,...,s_N".
std::string profile_to_csv(const StrategyProfile& profile);
StrategyProfile profile_from_csv(const std::string& row);

}  // namespace chanalloc
