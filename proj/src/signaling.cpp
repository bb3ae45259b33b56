#include "chanalloc/signaling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "chanalloc/csv.hpp"
#include "chanalloc/error.hpp"

namespace chanalloc {

std::string to_string(PacketKind kind) {
  switch (kind) {
    case PacketKind::Start: return "START";
    case PacketKind::StartCh: return "START_CH";
    case PacketKind::AckStartCh: return "ACK_START_CH";
    case PacketKind::End: return "END";
    case PacketKind::AckEnd: return "ACK_END";
  }
  return "?";
}

PacketKind parse_packet_kind(const std::string& text) {
  for (auto k : {PacketKind::Start, PacketKind::StartCh, PacketKind::AckStartCh, PacketKind::End,
                 PacketKind::AckEnd}) {
    if (to_string(k) == text) return k;
  }
  throw InvalidParameter("unknown packet kind '" + text + "'");
}

void validate(const ProbePowerConfig& cfg) {
  if (!(cfg.ratio >= 1.0)) throw InvalidParameter("signaling power ratio must be at least 1");
  if (!(cfg.hear_threshold >= 0.0)) throw InvalidParameter("hearing threshold must be >= 0");
  if (!(cfg.noise_db >= 0.0)) throw InvalidParameter("noise std-dev must be >= 0");
}

std::optional<double> observe_probe(double true_gain, double sender_power,
                                     const ProbePowerConfig& cfg, Rng* noise) {
  const double transmitted = cfg.ratio * sender_power;
  const double received = transmitted * true_gain;
  if (received < cfg.hear_threshold) return std::nullopt;
  double est = received / transmitted;
  if (cfg.noise_db > 0.0 && noise != nullptr) {
    est *= std::pow(10.0, cfg.noise_db * noise->standard_normal() / 10.0);
  }
  return est;
}

std::optional<double> observe_probe(const Point& listener, const Point& sender,
                                    double sender_power, const ProbePowerConfig& cfg,
                                    const Propagation& propagation) {
  return observe_probe(link_gain(sender, listener, propagation.alpha, propagation.ref_dist),
                       sender_power, cfg);
}

std::vector<double> estimate_incoming(const ChannelStatusTable& cst_r, const Network& net,
                                      int n_channels) {
  std::vector<double> id(n_channels, 0.0);
  for (const auto& [neighbor, e] : cst_r.entries) {
    id[e.channel - 1] += net.powers[neighbor] * e.est_gain;
  }
  return id;
}

std::vector<double> estimate_outgoing(const ChannelStatusTable& cst_t, double own_power,
                                      int n_channels) {
  std::vector<double> io(n_channels, 0.0);
  for (const auto& [neighbor, e] : cst_t.entries) io[e.channel - 1] += own_power * e.est_gain;
  return io;
}

SignalingWorld::SignalingWorld(Network net, int n_channels, ProbePowerConfig cfg)
    : net_(std::move(net)), n_channels_(n_channels), cfg_(cfg), noise_(cfg.noise_seed) {
  if (n_channels < 1) throw InvalidParameter("need at least one channel");
  validate(cfg_);
  const std::size_t n = net_.size();
  tx_tables_.assign(n, {ChannelStatusTable::Side::Transmitter, {}});
  rx_tables_.assign(n, {ChannelStatusTable::Side::Receiver, {}});
  channels_.assign(n, std::nullopt);
}

void SignalingWorld::check_pair(std::size_t pair) const {
  if (pair >= net_.size()) throw InvalidParameter("no such pair " + std::to_string(pair));
}

SignalingPacket SignalingWorld::emit(PacketKind kind, std::size_t sender,
                                     std::optional<Channel> channel,
                                     std::vector<double> payload) {
  SignalingPacket p{slot_, seq_++, kind, sender, channel, std::move(payload)};
  deliver(p);
  log_.push_back(p);
  return p;
}

void SignalingWorld::deliver(const SignalingPacket& packet) {
  const std::size_t s = packet.sender_pair;
  check_pair(s);
  const double p_s = net_.powers[s];
  for (std::size_t j = 0; j < net_.size(); ++j) {
    if (j == s) continue;
    switch (packet.kind) {
      case PacketKind::Start:
        break;
      case PacketKind::StartCh:
        // Sent by s's receiver; transmitter j learns its gain toward that receiver.
        if (auto g = observe_probe(net_.gain(j, s), p_s, cfg_, &noise_)) {
          tx_tables_[j].entries[s] = {*packet.channel, *g};
        }
        break;
      case PacketKind::AckStartCh:
        // Sent by s's transmitter; receiver j learns the gain it sees from it.
        if (auto g = observe_probe(net_.gain(s, j), p_s, cfg_, &noise_)) {
          rx_tables_[j].entries[s] = {*packet.channel, *g};
        }
        break;
      case PacketKind::End:
        if (observe_probe(net_.gain(s, j), p_s, cfg_)) rx_tables_[j].entries.erase(s);
        break;
      case PacketKind::AckEnd:
        if (observe_probe(net_.gain(j, s), p_s, cfg_)) tx_tables_[j].entries.erase(s);
        break;
    }
  }
  if (packet.kind == PacketKind::AckStartCh) channels_[s] = packet.channel;
  if (packet.kind == PacketKind::AckEnd) channels_[s].reset();
}

SignalingWorld::Handshake SignalingWorld::handshake(std::size_t pair, Rng& rng) {
  check_pair(pair);
  std::vector<SignalingPacket> packets;

  auto io = estimate_outgoing(tx_tables_[pair], net_.powers[pair], n_channels_);
  packets.push_back(emit(PacketKind::Start, pair, std::nullopt, io));

  const auto u = protocol_utilities(pair);
  const double best = *std::max_element(u.begin(), u.end());
  std::vector<Channel> argmax;
  for (int k = 0; k < n_channels_; ++k) {
    if (u[k] == best) argmax.push_back(k + 1);
  }
  const Channel chosen =
      argmax.size() == 1 ? argmax.front() : argmax[rng.uniform_index(argmax.size())];

  packets.push_back(emit(PacketKind::StartCh, pair, chosen));
  packets.push_back(emit(PacketKind::AckStartCh, pair, chosen));
  return {chosen, std::move(packets)};
}

std::vector<SignalingPacket> SignalingWorld::announce(std::size_t pair, Channel channel) {
  check_pair(pair);
  if (channel < 1 || channel > n_channels_) throw InvalidParameter("channel out of range");
  std::vector<SignalingPacket> packets;
  packets.push_back(emit(PacketKind::StartCh, pair, channel));
  packets.push_back(emit(PacketKind::AckStartCh, pair, channel));
  return packets;
}

std::vector<SignalingPacket> SignalingWorld::end_call(std::size_t pair) {
  check_pair(pair);
  if (!active(pair)) {
    throw InvalidState("pair " + std::to_string(pair + 1) + " has no active call");
  }
  std::vector<SignalingPacket> packets;
  packets.push_back(emit(PacketKind::End, pair, std::nullopt));
  packets.push_back(emit(PacketKind::AckEnd, pair, std::nullopt));
  return packets;
}

std::vector<double> SignalingWorld::protocol_utilities(std::size_t pair) const {
  check_pair(pair);
  const auto id = estimate_incoming(rx_tables_[pair], net_, n_channels_);
  const auto io = estimate_outgoing(tx_tables_[pair], net_.powers[pair], n_channels_);
  std::vector<double> u(n_channels_);
  for (int k = 0; k < n_channels_; ++k) u[k] = -(id[k] + io[k]);
  return u;
}

StrategyProfile SignalingWorld::profile() const {
  StrategyProfile p;
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (!channels_[i]) throw InvalidState("pair " + std::to_string(i + 1) + " is not active");
    p.channels.push_back(*channels_[i]);
  }
  return p;
}

SignalingWorld SignalingWorld::replay(Network net, int n_channels, ProbePowerConfig cfg,
                                      std::span<const SignalingPacket> packets) {
  SignalingWorld world(std::move(net), n_channels, cfg);
  for (const auto& p : packets) {
    world.deliver(p);
    world.log_.push_back(p);
    world.slot_ = p.slot;
    world.seq_ = p.seq + 1;
  }
  return world;
}

bool same_tables(const SignalingWorld& a, const SignalingWorld& b) {
  return a.tx_tables_ == b.tx_tables_ && a.rx_tables_ == b.rx_tables_ &&
         a.channels_ == b.channels_;
}

RunTrace run_protocol_game(const Network& net, int n_channels, const ProbePowerConfig& probe,
                           const Scheduler& scheduler, const StrategyProfile& initial, Rng& rng,
                           const PotentialRunOptions& opts) {
  if (opts.max_slots == 0) throw InvalidParameter("max_slots must be positive");
  validate_profile(initial, net, n_channels);
  const GameConfig cfg{n_channels, UtilityKind::Cooperative};

  SignalingWorld world(net, n_channels, probe);
  for (std::size_t i = 0; i < net.size(); ++i) world.announce(i, initial[i]);

  RunTrace trace;
  trace.profiles.push_back(world.profile());
  trace.potential_series.push_back(potential(trace.profiles.back(), net));
  std::size_t last_change = 0;

  for (std::size_t slot = 1; slot <= opts.max_slots; ++slot) {
    world.advance_slot();
    for (std::size_t i : scheduled_actors(scheduler, net.size(), slot, rng)) {
      world.handshake(i, rng);
    }
    auto next = world.profile();
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

void write_packet_log_csv(std::ostream& out, std::span<const SignalingPacket> packets) {
  out << "slot,seq,kind,sender_pair,channel,payload_summary\n";
  for (const auto& p : packets) {
    out << p.slot << ',' << p.seq << ',' << to_string(p.kind) << ',' << p.sender_pair + 1 << ',';
    if (p.channel) out << *p.channel;
    out << ',';
    if (!p.interference.empty()) {
      out << "I_o=";
      for (std::size_t k = 0; k < p.interference.size(); ++k) {
        out << (k ? ";" : "") << csv::num(p.interference[k]);
      }
    }
    out << '\n';
  }
}

}  // namespace chanalloc
