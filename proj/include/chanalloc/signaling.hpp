#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chanalloc/channel_game.hpp"
#include "chanalloc/dynamics.hpp"
#include "chanalloc/rng.hpp"
#include "chanalloc/topology.hpp"

namespace chanalloc {

enum class PacketKind { Start, StartCh, AckStartCh, End, AckEnd };
std::string to_string(PacketKind kind);
PacketKind parse_packet_kind(const std::string& text);

// A control-channel packet. sender_pair is 0-based; the CSV log writes 1-based ids.
struct SignalingPacket {
  std::size_t slot = 0;
  std::size_t seq = 0;
  PacketKind kind = PacketKind::Start;
  std::size_t sender_pair = 0;
  std::optional<Channel> channel;     // START_CH and ACK_START_CH
  std::vector<double> interference;   // START: outgoing estimate per channel

  friend bool operator==(const SignalingPacket&, const SignalingPacket&) = default;
};

struct CstEntry {
  Channel channel;
  double est_gain;

  friend bool operator==(const CstEntry&, const CstEntry&) = default;
};

/// What one node has overheard about its neighbors. The transmitter-side
/// table holds gains from this transmitter toward each neighbor's receiver;
/// the receiver-side table holds gains from each neighbor's transmitter.
struct ChannelStatusTable {
  enum class Side { Transmitter, Receiver };
  Side side = Side::Transmitter;
  std::map<std::size_t, CstEntry> entries;  // keyed by 0-based neighbor pair

  friend bool operator==(const ChannelStatusTable&, const ChannelStatusTable&) = default;
};

struct ProbePowerConfig {
  double ratio = 2.0;           // signaling power over data power
  double hear_threshold = 0.0;  // minimum received power to decode
  double noise_db = 0.0;        // std-dev of log-normal estimation error, 0 = exact
  std::uint64_t noise_seed = 0;
};

void validate(const ProbePowerConfig& cfg);

/// Link-gain estimate from an overheard control packet, or nullopt when the
/// packet falls below the hearing threshold. `noise` is only drawn from when
/// cfg.noise_db > 0.
std::optional<double> observe_probe(double true_gain, double sender_power,
                                     const ProbePowerConfig& cfg, Rng* noise = nullptr);
std::optional<double> observe_probe(const Point& listener, const Point& sender,
                                    double sender_power, const ProbePowerConfig& cfg,
                                    const Propagation& propagation);

// I_d(k): interference a receiver expects on each channel.
std::vector<double> estimate_incoming(const ChannelStatusTable& cst_r, const Network& net,
                                      int n_channels);
// I_o(k): interference this transmitter would cause on each channel.
std::vector<double> estimate_outgoing(const ChannelStatusTable& cst_t, double own_power,
                                      int n_channels);

/// Single-threaded control-channel simulation for every pair in a network.
/// Packets are totally ordered by (slot, seq); delivery to listeners happens
/// immediately in that order.
class SignalingWorld {
 public:
  SignalingWorld(Network net, int n_channels, ProbePowerConfig cfg = {});

  struct Handshake {
    Channel channel;
    std::vector<SignalingPacket> packets;
  };

  /// Call set-up or re-decision for `pair`: START with I_o, the receiver picks
  /// the channel maximizing -(I_d + I_o) (uniform on ties), START_CH, ACK_START_CH.
  Handshake handshake(std::size_t pair, Rng& rng);

  // Joins on a given channel without deciding (START_CH, ACK_START_CH only).
  std::vector<SignalingPacket> announce(std::size_t pair, Channel channel);

  // END, ACK_END; InvalidState if the pair holds no channel.
  std::vector<SignalingPacket> end_call(std::size_t pair);

  void advance_slot() { ++slot_; }
  std::size_t slot() const { return slot_; }

  const ChannelStatusTable& cst_t(std::size_t pair) const { return tx_tables_.at(pair); }
  const ChannelStatusTable& cst_r(std::size_t pair) const { return rx_tables_.at(pair); }
  bool active(std::size_t pair) const { return channels_.at(pair).has_value(); }
  std::optional<Channel> channel(std::size_t pair) const { return channels_.at(pair); }

  // -(I_d(k) + I_o(k)) for every channel, from the pair's own tables.
  std::vector<double> protocol_utilities(std::size_t pair) const;

  // Current channels; InvalidState unless every pair is active.
  StrategyProfile profile() const;

  const std::vector<SignalingPacket>& log() const { return log_; }
  const Network& network() const { return net_; }
  int n_channels() const { return n_channels_; }

  /// Rebuilds a world by delivering the given packets in order. Equal logs
  /// give equal tables.
  static SignalingWorld replay(Network net, int n_channels, ProbePowerConfig cfg,
                               std::span<const SignalingPacket> packets);

  friend bool same_tables(const SignalingWorld& a, const SignalingWorld& b);

 private:
  SignalingPacket emit(PacketKind kind, std::size_t sender, std::optional<Channel> channel,
                       std::vector<double> payload = {});
  void deliver(const SignalingPacket& packet);
  void check_pair(std::size_t pair) const;

  Network net_;
  int n_channels_;
  ProbePowerConfig cfg_;
  Rng noise_;
  std::size_t slot_ = 0;
  std::size_t seq_ = 0;
  std::vector<ChannelStatusTable> tx_tables_;
  std::vector<ChannelStatusTable> rx_tables_;
  std::vector<std::optional<Channel>> channels_;
  std::vector<SignalingPacket> log_;
};

/// Best-response play where every decision is a handshake. Pairs first join
/// on their `initial` channels; afterwards each scheduled pair re-decides in
/// turn within the slot. Convergence as in run_potential_game.
RunTrace run_protocol_game(const Network& net, int n_channels, const ProbePowerConfig& probe,
                           const Scheduler& scheduler, const StrategyProfile& initial, Rng& rng,
                           const PotentialRunOptions& opts = {});

// "slot,seq,kind,sender_pair,channel,payload_summary"
void write_packet_log_csv(std::ostream& out, std::span<const SignalingPacket> packets);

}  // namespace chanalloc
