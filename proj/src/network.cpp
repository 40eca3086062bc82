#include "mgres/network.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mgres {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_phase_array(const std::array<double, 3>& v, PhaseSet ph, const std::string& what) {
  for (Phase p : kAllPhases) {
    if (!ph.has(p) && v[static_cast<int>(p)] != 0.0)
      fail(what + ": nonzero value on absent phase " + std::string(1, phase_char(p)));
  }
}

// Union-find over bus indices.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

void NetworkModel::validate() {
  bus_index.clear();
  line_index.clear();

  for (int i = 0; i < static_cast<int>(buses.size()); ++i) {
    const Bus& b = buses[i];
    if (b.id.empty()) fail("bus with empty id");
    if (!bus_index.emplace(b.id, i).second) fail("duplicate bus id '" + b.id + "'");
    if (b.phases.empty()) fail("bus '" + b.id + "' has empty phase set");
    if (!(b.v_min_sq > 0.0) || !(b.v_min_sq < b.v_max_sq))
      fail("bus '" + b.id + "' voltage bounds must satisfy 0 < v_min_sq < v_max_sq");
  }

  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    const Line& l = lines[i];
    if (!line_index.emplace(l.id, i).second) fail("duplicate line id '" + l.id + "'");
    auto from = bus_index.find(l.from_bus);
    auto to = bus_index.find(l.to_bus);
    if (from == bus_index.end()) fail("line '" + l.id + "' references unknown bus '" + l.from_bus + "'");
    if (to == bus_index.end()) fail("line '" + l.id + "' references unknown bus '" + l.to_bus + "'");
    if (l.from_bus == l.to_bus) fail("line '" + l.id + "' connects a bus to itself");
    if (l.phases.empty()) fail("line '" + l.id + "' has empty phase set");
    if (!l.phases.subset_of(buses[from->second].phases) || !l.phases.subset_of(buses[to->second].phases))
      fail("line '" + l.id + "' carries a phase its end buses lack");
    if (!(l.p_max > 0.0) || !(l.q_max > 0.0)) fail("line '" + l.id + "' flow limits must be positive");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        bool present = l.phases.has(static_cast<Phase>(r)) && l.phases.has(static_cast<Phase>(c));
        if (!present && l.impedance(r, c) != std::complex<double>(0.0, 0.0))
          fail("line '" + l.id + "' impedance nonzero on absent phase row/col");
        if (!std::isfinite(l.impedance(r, c).real()) || !std::isfinite(l.impedance(r, c).imag()))
          fail("line '" + l.id + "' impedance has non-finite entry");
      }
  }

  std::set<std::string> load_ids;
  for (const Load& d : loads) {
    if (!load_ids.insert(d.id).second) fail("duplicate load id '" + d.id + "'");
    auto it = bus_index.find(d.bus);
    if (it == bus_index.end()) fail("load '" + d.id + "' references unknown bus '" + d.bus + "'");
    if (d.phases.empty()) fail("load '" + d.id + "' has empty phase set");
    if (!d.phases.subset_of(buses[it->second].phases))
      fail("load '" + d.id + "' uses phase absent at bus '" + d.bus + "'");
    check_phase_array(d.p, d.phases, "load '" + d.id + "' p");
    check_phase_array(d.q, d.phases, "load '" + d.id + "' q");
    for (double v : d.p)
      if (v < 0.0) fail("load '" + d.id + "' has negative active demand");
    if (!std::isfinite(d.priority) || d.priority < 0.0) fail("load '" + d.id + "' priority must be finite and >= 0");
  }

  std::set<std::string> gen_ids;
  for (const Generator& g : generators) {
    if (!gen_ids.insert(g.id).second) fail("duplicate generator id '" + g.id + "'");
    auto it = bus_index.find(g.bus);
    if (it == bus_index.end()) fail("generator '" + g.id + "' references unknown bus '" + g.bus + "'");
    if (g.phases.empty()) fail("generator '" + g.id + "' has empty phase set");
    if (!g.phases.subset_of(buses[it->second].phases))
      fail("generator '" + g.id + "' uses phase absent at bus '" + g.bus + "'");
    check_phase_array(g.p_max, g.phases, "generator '" + g.id + "' p_max");
    check_phase_array(g.q_max, g.phases, "generator '" + g.id + "' q_max");
    for (int i = 0; i < 3; ++i)
      if (g.p_max[i] < 0.0 || g.q_max[i] < 0.0) fail("generator '" + g.id + "' capacities must be >= 0");
  }
}

std::vector<BusBlock> compute_bus_blocks(const NetworkModel& net) {
  const int n = static_cast<int>(net.buses.size());
  if (n == 0) return {};
  Dsu dsu(n);
  for (const Line& l : net.lines) {
    if (!l.switchable && !l.faulted)
      dsu.unite(net.bus_index.at(l.from_bus), net.bus_index.at(l.to_bus));
  }

  // Group members, keyed by the lexicographically smallest contained bus id.
  std::map<int, std::vector<std::string>> groups;
  for (int i = 0; i < n; ++i) groups[dsu.find(i)].push_back(net.buses[i].id);

  std::vector<BusBlock> blocks;
  blocks.reserve(groups.size());
  for (auto& [root, members] : groups) {
    BusBlock b;
    b.buses = std::move(members);
    std::sort(b.buses.begin(), b.buses.end());
    blocks.push_back(std::move(b));
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const BusBlock& a, const BusBlock& b) { return a.buses.front() < b.buses.front(); });

  std::map<std::string, int> block_of_bus;
  for (int i = 0; i < static_cast<int>(blocks.size()); ++i) {
    blocks[i].id = i;
    for (const std::string& bus : blocks[i].buses) block_of_bus[bus] = i;
  }
  for (const Line& l : net.lines) {
    if (l.switchable && !l.faulted) {
      int ba = block_of_bus.at(l.from_bus);
      int bb = block_of_bus.at(l.to_bus);
      blocks[ba].incident_switchable_lines.push_back(l.id);
      if (bb != ba) blocks[bb].incident_switchable_lines.push_back(l.id);
    }
  }
  for (BusBlock& b : blocks) {
    std::sort(b.incident_switchable_lines.begin(), b.incident_switchable_lines.end());
    b.incident_switchable_lines.erase(
        std::unique(b.incident_switchable_lines.begin(), b.incident_switchable_lines.end()),
        b.incident_switchable_lines.end());
  }
  return blocks;
}

NetworkModel apply_faults(const NetworkModel& net, const std::vector<std::string>& faulted_line_ids) {
  NetworkModel out = net;
  for (const std::string& id : faulted_line_ids) {
    auto it = out.line_index.find(id);
    if (it == out.line_index.end()) fail("apply_faults: unknown line id '" + id + "'");
    out.lines[it->second].faulted = true;
  }
  return out;
}

MicrogridPartition partition_microgrids(const NetworkModel& net) {
  const int n = static_cast<int>(net.buses.size());
  MicrogridPartition part;
  if (n == 0) return part;

  Dsu dsu(n);
  for (const Line& l : net.lines) {
    if (!l.faulted) dsu.unite(net.bus_index.at(l.from_bus), net.bus_index.at(l.to_bus));
  }

  std::map<int, std::vector<std::string>> islands;
  for (int i = 0; i < n; ++i) islands[dsu.find(i)].push_back(net.buses[i].id);

  auto blocks = compute_bus_blocks(net);
  std::map<std::string, int> block_of_bus;
  for (const BusBlock& b : blocks)
    for (const std::string& bus : b.buses) block_of_bus[bus] = b.id;

  std::vector<Microgrid> mgs;
  for (auto& [root, members] : islands) {
    std::sort(members.begin(), members.end());
    std::vector<std::string> forming;
    for (const Generator& g : net.generators) {
      if (g.kind == GeneratorKind::GridForming &&
          std::binary_search(members.begin(), members.end(), g.bus))
        forming.push_back(g.id);
    }
    if (forming.empty()) {
      part.unrestorable_islands.push_back(members);
      continue;
    }
    Microgrid mg;
    mg.forming_generators = std::move(forming);
    mg.buses = members;
    std::set<int> bids;
    for (const std::string& bus : mg.buses) bids.insert(block_of_bus.at(bus));
    mg.block_ids.assign(bids.begin(), bids.end());
    mgs.push_back(std::move(mg));
  }
  std::sort(mgs.begin(), mgs.end(),
            [](const Microgrid& a, const Microgrid& b) { return a.buses.front() < b.buses.front(); });
  for (int i = 0; i < static_cast<int>(mgs.size()); ++i) mgs[i].id = i + 1;
  part.microgrids = std::move(mgs);
  std::sort(part.unrestorable_islands.begin(), part.unrestorable_islands.end());
  return part;
}

std::pair<Mat3d, Mat3d> equivalent_impedance(const Mat3cd& z) {
  using cd = std::complex<double>;
  const double s3 = std::sqrt(3.0) / 2.0;
  Eigen::Vector3cd a;
  a << cd(1.0, 0.0), cd(-0.5, -s3), cd(-0.5, s3);  // [1, e^{-i2pi/3}, e^{+i2pi/3}]
  Mat3cd phase_shift = a * a.adjoint();
  Mat3cd zhat = phase_shift.cwiseProduct(z);
  return {zhat.real(), zhat.imag()};
}

}  // namespace mgres
