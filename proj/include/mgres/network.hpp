#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgres/phase.hpp"

namespace mgres {

using Mat3cd = Eigen::Matrix3cd;
using Mat3d = Eigen::Matrix3d;

struct Bus {
  std::string id;
  PhaseSet phases;
  double v_min_sq = 0.9025;  // squared per-unit voltage bounds
  double v_max_sq = 1.1025;
};

struct Line {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  PhaseSet phases;
  Mat3cd impedance = Mat3cd::Zero();  // per-unit, rows/cols zero on absent phases
  bool switchable = false;
  double p_max = 1.0;  // per-phase flow limit, pu
  double q_max = 1.0;
  bool faulted = false;
};

struct Load {
  std::string id;
  std::string bus;
  PhaseSet phases;
  std::array<double, 3> p{};  // pu demand per phase, zero on absent phases
  std::array<double, 3> q{};
  bool switchable = true;
  double priority = 1.0;

  double total_p() const { return p[0] + p[1] + p[2]; }
  double total_q() const { return q[0] + q[1] + q[2]; }
};

enum class GeneratorKind { GridForming, GridFollowing };

struct Generator {
  std::string id;
  std::string bus;
  GeneratorKind kind = GeneratorKind::GridFollowing;
  PhaseSet phases;
  std::array<double, 3> p_max{};  // pu per phase
  std::array<double, 3> q_max{};

  double total_p_max() const { return p_max[0] + p_max[1] + p_max[2]; }
  double total_q_max() const { return q_max[0] + q_max[1] + q_max[2]; }
};

struct BaseQuantities {
  double kv = 4.16;  // line-to-line
  double mva = 1.0;
};

/// Immutable description of the feeder. Construct through validate() or
/// parse_feeder(); all power/impedance quantities are per-unit already.
struct NetworkModel {
  BaseQuantities base;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Load> loads;
  std::vector<Generator> generators;

  // Derived lookups (filled by validate()).
  std::map<std::string, int> bus_index;
  std::map<std::string, int> line_index;

  const Bus& bus(const std::string& id) const { return buses.at(bus_index.at(id)); }
  const Line& line(const std::string& id) const { return lines.at(line_index.at(id)); }

  /// Checks every id reference, phase consistency, bounds and impedance
  /// structure; fills the lookup maps. Throws std::invalid_argument.
  void validate();
};

/// Maximal set of buses joined only by non-switchable, non-faulted lines.
struct BusBlock {
  int id = 0;  // dense index, ordered by smallest contained bus id
  std::vector<std::string> buses;          // sorted
  std::vector<std::string> incident_switchable_lines;  // sorted, non-faulted
};

struct Microgrid {
  int id = 0;  // ordered by smallest contained bus id
  std::vector<std::string> forming_generators;
  std::vector<std::string> buses;   // sorted
  std::vector<int> block_ids;
};

struct MicrogridPartition {
  std::vector<Microgrid> microgrids;
  std::vector<std::vector<std::string>> unrestorable_islands;  // bus sets lacking a forming DG
};

/// Partition of buses into blocks connected via non-switchable non-faulted
/// lines. Deterministic: block ids sorted by smallest contained bus id.
std::vector<BusBlock> compute_bus_blocks(const NetworkModel& net);

/// Returns a copy with the listed lines marked faulted. Throws on unknown ids.
NetworkModel apply_faults(const NetworkModel& net, const std::vector<std::string>& faulted_line_ids);

/// Groups fault-isolated islands into microgrids anchored at grid-forming
/// generators; islands lacking one are reported unrestorable.
MicrogridPartition partition_microgrids(const NetworkModel& net);

/// Equivalent three-phase impedance: zhat = (a a^H) ⊙ z with
/// a = [1, e^{-i2pi/3}, e^{+i2pi/3}]^T. Returns (Re(zhat), Im(zhat)).
std::pair<Mat3d, Mat3d> equivalent_impedance(const Mat3cd& z);

}  // namespace mgres
