#pragma once

#include <map>
#include <string>
#include <vector>

#include "mgres/network.hpp"

namespace mgres::restoration {

/// Semantic variable kinds of the stage problem.
enum class VarKind {
  BusStatus,    // x^B, binary per bus
  LineStatus,   // x^K, binary per line
  GenStatus,    // x^G, binary per grid-following generator
  LoadStatus,   // x^L, binary per load
  BlockStatus,  // x^BK, binary per bus block
  GenP,         // P^G, pu per generator and phase
  GenQ,         // Q^G
  FlowP,        // P^K, pu per line and phase
  FlowQ,        // Q^K
  VoltageSq,    // U, pu^2 per bus and phase
  MaxLoadStep,  // P^MLS, pu per grid-forming generator
};

std::string to_string(VarKind k);

struct VarKey {
  VarKind kind;
  std::string element;
  int phase = -1;  // 0..2, or -1 for kinds without a phase
  int step = 1;    // 1..T

  auto operator<=>(const VarKey&) const = default;
};

/// Bijection between MILP variable ids and semantic tuples.
class ModelIndex {
 public:
  int add(const VarKey& key) {
    int id = static_cast<int>(keys_.size());
    keys_.push_back(key);
    if (!by_key_.emplace(key, id).second)
      throw std::logic_error("ModelIndex: duplicate key " + describe(key));
    return id;
  }
  int id(const VarKey& key) const {
    auto it = by_key_.find(key);
    if (it == by_key_.end()) throw std::out_of_range("ModelIndex: unknown key " + describe(key));
    return it->second;
  }
  bool contains(const VarKey& key) const { return by_key_.count(key) != 0; }
  const VarKey& key(int id) const { return keys_.at(id); }
  int size() const { return static_cast<int>(keys_.size()); }
  static std::string describe(const VarKey& k);

 private:
  std::vector<VarKey> keys_;
  std::map<VarKey, int> by_key_;
};

/// Binary statuses of every element at one point in time.
struct ElementStatuses {
  std::map<std::string, int> bus;
  std::map<std::string, int> line;
  std::map<std::string, int> gen;   // grid-following only
  std::map<std::string, int> load;
  std::map<int, int> block;

  static ElementStatuses all_zero(const NetworkModel& net, const std::vector<BusBlock>& blocks);
};

/// Everything the per-microgrid stage problem needs from the past.
struct StageInputs {
  int stage = 1;
  int horizon = 4;  // T
  Microgrid mg;
  std::vector<BusBlock> blocks;  // blocks of the whole network (ids referenced by mg)
  ElementStatuses prev;          // retained statuses from the previous stage
  std::map<std::string, std::array<double, 3>> prev_gen_p;  // per generator, pu
  std::map<std::string, double> prev_mls;                   // per forming DG, pu (per-phase)
  double delta_f_meas = 0.0;  // Hz, from the previous stage's trace
  double delta_f_max = 0.5;   // Hz
  double alpha = 0.1;         // pu per Hz
  bool freq_constraints = true;

  void check(const NetworkModel& net) const;  // throws on inconsistencies
};

/// Decoded first-horizon-step restoration decisions for one microgrid.
struct RestorationStage {
  int stage = 1;
  int mg_id = 0;
  ElementStatuses status;
  std::map<std::string, std::array<double, 3>> gen_p;  // pu
  std::map<std::string, std::array<double, 3>> gen_q;
  std::map<std::string, std::array<double, 3>> flow_p;
  std::map<std::string, std::array<double, 3>> flow_q;
  std::map<std::string, std::array<double, 3>> voltage_sq;
  std::map<std::string, double> mls;  // per forming DG, pu
  double restored_kw = 0.0;           // total restored load in this MG
  double restored_kvar = 0.0;
  double objective = 0.0;             // horizon objective of the solve
};

}  // namespace mgres::restoration
