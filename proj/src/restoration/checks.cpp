#include "mgres/restoration/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace mgres::restoration {

CheckResult check_radiality(const RestorationStage& stage, const NetworkModel& net) {
  CheckResult res;

  std::vector<std::string> on_buses;
  for (const auto& [id, s] : stage.status.bus)
    if (s == 1) on_buses.push_back(id);
  if (on_buses.empty()) return res;  // nothing energized is trivially radial

  std::map<std::string, int> idx;
  for (int i = 0; i < static_cast<int>(on_buses.size()); ++i) idx[on_buses[i]] = i;

  std::vector<int> parent(on_buses.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };

  int edges = 0;
  for (const auto& [lid, s] : stage.status.line) {
    if (s != 1) continue;
    const Line& l = net.line(lid);
    auto fa = idx.find(l.from_bus);
    auto fb = idx.find(l.to_bus);
    if (fa == idx.end() || fb == idx.end()) {
      res.ok = false;
      res.violations.push_back("line " + lid + " energized with a de-energized end bus");
      continue;
    }
    ++edges;
    int ra = find(fa->second), rb = find(fb->second);
    if (ra == rb) {
      res.ok = false;
      res.violations.push_back("cycle closed by line " + lid);
    } else {
      parent[ra] = rb;
    }
  }

  int components = 0;
  for (int i = 0; i < static_cast<int>(on_buses.size()); ++i)
    if (find(i) == i) ++components;
  if (components > 1) {
    res.ok = false;
    res.violations.push_back("energized subgraph splits into " + std::to_string(components) +
                             " components");
  }
  (void)edges;
  return res;
}

CheckResult check_power_balance(const RestorationStage& stage, const NetworkModel& net,
                                double tol) {
  CheckResult res;
  // residual[bus][phase] = out - in - gen + restored load (p and q separately)
  std::map<std::string, std::array<double, 6>> residual;
  for (const auto& [bid, s] : stage.status.bus) residual[bid] = {};

  for (const auto& [lid, fp] : stage.flow_p) {
    const Line& l = net.line(lid);
    const auto& fq = stage.flow_q.at(lid);
    for (int ph = 0; ph < 3; ++ph) {
      if (residual.count(l.from_bus)) {
        residual[l.from_bus][ph] += fp[ph];
        residual[l.from_bus][3 + ph] += fq[ph];
      }
      if (residual.count(l.to_bus)) {
        residual[l.to_bus][ph] -= fp[ph];
        residual[l.to_bus][3 + ph] -= fq[ph];
      }
    }
  }
  for (const auto& [gid, gp] : stage.gen_p) {
    const Generator& g = *std::find_if(net.generators.begin(), net.generators.end(),
                                       [&](const Generator& x) { return x.id == gid; });
    const auto& gq = stage.gen_q.at(gid);
    for (int ph = 0; ph < 3; ++ph) {
      residual[g.bus][ph] -= gp[ph];
      residual[g.bus][3 + ph] -= gq[ph];
    }
  }
  for (const auto& [did, on] : stage.status.load) {
    if (on != 1) continue;
    const Load& d = *std::find_if(net.loads.begin(), net.loads.end(),
                                  [&](const Load& x) { return x.id == did; });
    for (int ph = 0; ph < 3; ++ph) {
      residual[d.bus][ph] += d.p[ph];
      residual[d.bus][3 + ph] += d.q[ph];
    }
  }

  for (const auto& [bid, r] : residual) {
    for (int k = 0; k < 6; ++k) {
      double a = std::abs(r[k]);
      res.max_residual = std::max(res.max_residual, a);
      if (a > tol) {
        res.ok = false;
        res.violations.push_back("bus " + bid + (k < 3 ? " active" : " reactive") + " phase " +
                                 std::string(1, phase_char(static_cast<Phase>(k % 3))) +
                                 " residual " + std::to_string(a));
      }
    }
  }
  return res;
}

}  // namespace mgres::restoration
