#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chanalloc/matrix.hpp"

namespace chanalloc {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

// A transmitter and its intended receiver. Ids are 1-based.
struct NodePair {
  std::size_t id = 0;
  Point tx;
  Point rx;

  friend bool operator==(const NodePair&, const NodePair&) = default;
};

struct Propagation {
  double alpha = 4.0;     // path-loss exponent
  double ref_dist = 1.0;  // meters; gains are clamped to 1 inside this radius

  friend bool operator==(const Propagation&, const Propagation&) = default;
};

struct Placement {
  enum class Mode { UniformSquare, Disk };
  Mode mode = Mode::Disk;
  double radius = 50.0;  // outer radius of the receiver annulus, Disk mode only

  static Placement uniform_square() { return {Mode::UniformSquare, 0.0}; }
  static Placement disk(double r) { return {Mode::Disk, r}; }

  friend bool operator==(const Placement&, const Placement&) = default;
};

std::string to_string(const Placement& p);
// Accepts "uniform-square", "disk" (radius 50) and "disk(R)".
Placement parse_placement(const std::string& text);

/// Fixed ad hoc network: node pairs, link gains and transmit powers.
///
/// gains(i, j) is the linear gain from transmitter i to the receiver of
/// pair j, so gains(i, i) is pair i's own link. Indices are 0-based here;
/// NodePair::id and every file format use 1-based ids.
struct Network {
  std::vector<NodePair> pairs;
  double area_side = 0.0;
  Matrix gains;
  std::vector<double> powers;
  Propagation propagation;

  std::size_t size() const { return powers.size(); }
  double gain(std::size_t tx, std::size_t rx) const { return gains(tx, rx); }

  friend bool operator==(const Network&, const Network&) = default;
};

/// Power-law path loss min(1, (d/ref_dist)^-alpha) with d clamped to ref_dist.
double link_gain(const Point& tx, const Point& rx, double alpha, double ref_dist);

Network generate_network(std::uint64_t seed, std::size_t n_pairs, double area_side,
                         const Placement& placement, const Propagation& propagation = {});

// Builds the gain matrix from given positions; powers default to 1.
Network network_from_pairs(std::vector<NodePair> pairs, double area_side,
                           const Propagation& propagation = {});

// Network with an explicit gain matrix and no geometry, for hand-built cases.
Network network_from_gains(Matrix gains, std::vector<double> powers);

// Throws InvalidParameter when an invariant of Network does not hold.
void validate(const Network& net);

void write_topology_csv(std::ostream& out, const Network& net);
void write_gains_csv(std::ostream& out, const Network& net);
std::vector<NodePair> read_topology_csv(std::istream& in);
Matrix read_gains_csv(std::istream& in);

}  // namespace chanalloc
