#include "chanalloc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "chanalloc/csv.hpp"
#include "chanalloc/error.hpp"
#include "chanalloc/rng.hpp"

namespace chanalloc {

namespace {

constexpr int kMaxPlacementAttempts = 100000;

bool inside(const Point& p, double side) {
  return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side;
}

Point place_receiver(Rng& rng, const Point& tx, double side, const Placement& placement,
                     double min_sep) {
  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    Point rx;
    if (placement.mode == Placement::Mode::UniformSquare) {
      rx = {rng.uniform(0.0, side), rng.uniform(0.0, side)};
    } else {
      // Uniform by area over the annulus [min_sep, radius].
      const double r_in2 = min_sep * min_sep;
      const double r_out2 = placement.radius * placement.radius;
      const double r = std::sqrt(r_in2 + rng.uniform01() * (r_out2 - r_in2));
      const double theta = 2.0 * std::numbers::pi * rng.uniform01();
      rx = {tx.x + r * std::cos(theta), tx.y + r * std::sin(theta)};
    }
    if (inside(rx, side) && distance(tx, rx) >= min_sep) return rx;
  }
  throw InvalidParameter("could not place a receiver; area too small for the placement mode");
}

void check_propagation(const Propagation& prop) {
  if (!(prop.alpha > 0.0) || !(prop.ref_dist > 0.0)) {
    throw InvalidParameter("path-loss exponent and reference distance must be positive");
  }
}

}  // namespace

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string to_string(const Placement& p) {
  if (p.mode == Placement::Mode::UniformSquare) return "uniform-square";
  return "disk(" + csv::num(p.radius) + ")";
}

Placement parse_placement(const std::string& text) {
  if (text == "uniform-square") return Placement::uniform_square();
  if (text == "disk") return Placement::disk(50.0);
  if (text.starts_with("disk(") && text.ends_with(")")) {
    return Placement::disk(csv::parse_double(text.substr(5, text.size() - 6), "placement radius"));
  }
  throw InvalidParameter("unknown placement '" + text + "'");
}

double link_gain(const Point& tx, const Point& rx, double alpha, double ref_dist) {
  const double d = std::max(distance(tx, rx), ref_dist);
  return std::min(1.0, std::pow(d / ref_dist, -alpha));
}

Network generate_network(std::uint64_t seed, std::size_t n_pairs, double area_side,
                         const Placement& placement, const Propagation& propagation) {
  if (n_pairs < 2) throw InvalidParameter("need at least 2 node pairs");
  if (!(area_side > 0.0)) throw InvalidParameter("area side must be positive");
  check_propagation(propagation);
  if (placement.mode == Placement::Mode::Disk && !(placement.radius > propagation.ref_dist)) {
    throw InvalidParameter("disk radius must exceed the reference distance");
  }

  Rng rng(seed);
  std::vector<NodePair> pairs;
  pairs.reserve(n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const Point tx{rng.uniform(0.0, area_side), rng.uniform(0.0, area_side)};
    const Point rx = place_receiver(rng, tx, area_side, placement, propagation.ref_dist);
    pairs.push_back({i + 1, tx, rx});
  }
  return network_from_pairs(std::move(pairs), area_side, propagation);
}

Network network_from_pairs(std::vector<NodePair> pairs, double area_side,
                           const Propagation& propagation) {
  check_propagation(propagation);
  const std::size_t n = pairs.size();
  if (n < 2) throw InvalidParameter("need at least 2 node pairs");
  Network net;
  net.area_side = area_side;
  net.propagation = propagation;
  net.gains = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      net.gains(i, j) = link_gain(pairs[i].tx, pairs[j].rx, propagation.alpha, propagation.ref_dist);
    }
  }
  net.powers.assign(n, 1.0);
  net.pairs = std::move(pairs);
  validate(net);
  return net;
}

Network network_from_gains(Matrix gains, std::vector<double> powers) {
  Network net;
  net.gains = std::move(gains);
  net.powers = std::move(powers);
  validate(net);
  return net;
}

void validate(const Network& net) {
  const std::size_t n = net.powers.size();
  if (n < 2) throw InvalidParameter("network needs at least 2 pairs");
  if (net.gains.rows() != n || net.gains.cols() != n) {
    throw InvalidParameter("gain matrix must be N x N");
  }
  if (!net.pairs.empty() && net.pairs.size() != n) {
    throw InvalidParameter("pair list length differs from power vector length");
  }
  for (double p : net.powers) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidParameter("powers must be positive");
  }
  for (double g : net.gains.data()) {
    if (!(g > 0.0 && g <= 1.0)) throw InvalidParameter("gains must lie in (0, 1]");
  }
}

void write_topology_csv(std::ostream& out, const Network& net) {
  out << "id,tx_x,tx_y,rx_x,rx_y\n";
  for (const auto& p : net.pairs) {
    out << p.id << ',' << csv::num(p.tx.x) << ',' << csv::num(p.tx.y) << ','
        << csv::num(p.rx.x) << ',' << csv::num(p.rx.y) << '\n';
  }
}

void write_gains_csv(std::ostream& out, const Network& net) {
  const std::size_t n = net.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ',';
      out << csv::num(net.gains(i, j));
    }
    out << '\n';
  }
}

std::vector<NodePair> read_topology_csv(std::istream& in) {
  std::vector<NodePair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.starts_with("id")) continue;
    const auto f = csv::split(line);
    if (f.size() != 5) throw InvalidParameter("topology row needs 5 fields: " + line);
    NodePair p;
    p.id = static_cast<std::size_t>(csv::parse_double(f[0], "topology id"));
    p.tx = {csv::parse_double(f[1], "tx_x"), csv::parse_double(f[2], "tx_y")};
    p.rx = {csv::parse_double(f[3], "rx_x"), csv::parse_double(f[4], "rx_y")};
    pairs.push_back(p);
  }
  return pairs;
}

Matrix read_gains_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : csv::split(line)) row.push_back(csv::parse_double(f, "gain matrix"));
    rows.push_back(std::move(row));
  }
  Matrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw InvalidParameter("gain matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace chanalloc
