#include "mgres/restoration/builder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mgres::restoration {

using milp::LinearConstraint;
using milp::MilpProblem;
using milp::Sense;
using milp::Variable;
using milp::VarKind::Binary;
using milp::VarKind::Continuous;

std::string to_string(VarKind k) {
  switch (k) {
    case VarKind::BusStatus: return "xB";
    case VarKind::LineStatus: return "xK";
    case VarKind::GenStatus: return "xG";
    case VarKind::LoadStatus: return "xL";
    case VarKind::BlockStatus: return "xBK";
    case VarKind::GenP: return "PG";
    case VarKind::GenQ: return "QG";
    case VarKind::FlowP: return "PK";
    case VarKind::FlowQ: return "QK";
    case VarKind::VoltageSq: return "U";
    case VarKind::MaxLoadStep: return "PMLS";
  }
  return "?";
}

std::string ModelIndex::describe(const VarKey& k) {
  std::string s = to_string(k.kind) + "[" + k.element;
  if (k.phase >= 0) s += "," + std::string(1, phase_char(static_cast<Phase>(k.phase)));
  s += ",t" + std::to_string(k.step) + "]";
  return s;
}

ElementStatuses ElementStatuses::all_zero(const NetworkModel& net,
                                          const std::vector<BusBlock>& blocks) {
  ElementStatuses st;
  for (const auto& b : net.buses) st.bus[b.id] = 0;
  for (const auto& l : net.lines) st.line[l.id] = 0;
  for (const auto& g : net.generators)
    if (g.kind == GeneratorKind::GridFollowing) st.gen[g.id] = 0;
  for (const auto& d : net.loads) st.load[d.id] = 0;
  for (const auto& b : blocks) st.block[b.id] = 0;
  return st;
}

namespace {

int status_of(const std::map<std::string, int>& m, const std::string& id) {
  auto it = m.find(id);
  return it == m.end() ? 0 : it->second;
}
int status_of(const std::map<int, int>& m, int id) {
  auto it = m.find(id);
  return it == m.end() ? 0 : it->second;
}

/// Elements of the network in scope for one microgrid, in deterministic order.
struct MgScope {
  std::vector<int> buses, lines, loads, gens;
  std::set<std::string> bus_set;
  std::map<std::string, int> block_of_bus;
  std::vector<int> block_ids;                       // sorted
  std::map<int, std::vector<std::string>> incident; // block -> in-scope switchable non-faulted lines
  std::set<int> source_blocks;                      // blocks hosting a grid-forming DG

  MgScope(const NetworkModel& net, const StageInputs& in) {
    bus_set.insert(in.mg.buses.begin(), in.mg.buses.end());
    for (int i = 0; i < static_cast<int>(net.buses.size()); ++i)
      if (bus_set.count(net.buses[i].id)) buses.push_back(i);
    for (int i = 0; i < static_cast<int>(net.lines.size()); ++i) {
      const Line& l = net.lines[i];
      if (bus_set.count(l.from_bus) && bus_set.count(l.to_bus)) lines.push_back(i);
    }
    for (int i = 0; i < static_cast<int>(net.loads.size()); ++i)
      if (bus_set.count(net.loads[i].bus)) loads.push_back(i);
    for (int i = 0; i < static_cast<int>(net.generators.size()); ++i)
      if (bus_set.count(net.generators[i].bus)) gens.push_back(i);

    std::set<int> mg_blocks(in.mg.block_ids.begin(), in.mg.block_ids.end());
    for (const BusBlock& b : in.blocks) {
      if (!mg_blocks.count(b.id)) continue;
      block_ids.push_back(b.id);
      for (const std::string& bus : b.buses)
        if (bus_set.count(bus)) block_of_bus[bus] = b.id;
      for (const std::string& lid : b.incident_switchable_lines) {
        const Line& l = net.line(lid);
        if (bus_set.count(l.from_bus) && bus_set.count(l.to_bus))
          incident[b.id].push_back(lid);
      }
    }
    std::sort(block_ids.begin(), block_ids.end());
    for (int g : gens)
      if (net.generators[g].kind == GeneratorKind::GridForming)
        source_blocks.insert(block_of_bus.at(net.generators[g].bus));
  }
};

}  // namespace

void StageInputs::check(const NetworkModel& net) const {
  if (horizon < 1) throw std::invalid_argument("stage inputs: horizon must be >= 1");
  if (stage < 1) throw std::invalid_argument("stage inputs: stage must be >= 1");
  if (delta_f_meas < 0) throw std::invalid_argument("stage inputs: delta_f_meas must be >= 0");
  auto chk01 = [](int v, const std::string& what) {
    if (v != 0 && v != 1) throw std::invalid_argument("stage inputs: " + what + " status must be 0/1");
  };
  for (const auto& [id, v] : prev.bus) chk01(v, "bus " + id);
  for (const auto& [id, v] : prev.line) {
    chk01(v, "line " + id);
    if (v == 1 && net.line(id).faulted)
      throw std::invalid_argument("stage inputs: previously energized line '" + id + "' is now faulted");
  }
  for (const auto& [id, v] : prev.gen) chk01(v, "generator " + id);
  for (const auto& [id, v] : prev.load) chk01(v, "load " + id);
  for (const auto& [id, v] : prev.block) chk01(v, "block " + std::to_string(id));
}

std::pair<MilpProblem, ModelIndex> build_stage_problem(const NetworkModel& net,
                                                       const StageInputs& inputs,
                                                       const BuilderConfig& cfg) {
  inputs.check(net);
  const MgScope sc(net, inputs);
  const int T = inputs.horizon;

  ModelIndex index;
  std::vector<Variable> vars;
  std::vector<LinearConstraint> cons;
  std::vector<std::pair<int, double>> obj;

  auto add_var = [&](const VarKey& key, milp::VarKind kind, double lo, double hi,
                     const std::string& name) {
    int id = index.add(key);
    Variable v;
    v.id = id;
    v.kind = kind;
    v.lower = lo;
    v.upper = hi;
    v.name = name;
    vars.push_back(std::move(v));
    return id;
  };

  // ---- variables -----------------------------------------------------
  for (int t = 1; t <= T; ++t) {
    for (int bi : sc.buses) {
      const Bus& b = net.buses[bi];
      bool fixed_on = cfg.fix_previous && (status_of(inputs.prev.bus, b.id) == 1 ||
                                           sc.source_blocks.count(sc.block_of_bus.at(b.id)));
      add_var({VarKind::BusStatus, b.id, -1, t}, Binary, fixed_on ? 1.0 : 0.0, 1.0,
              "xB_" + b.id + "_t" + std::to_string(t));
    }
    for (int li : sc.lines) {
      const Line& l = net.lines[li];
      double lo = 0.0, hi = 1.0;
      if (l.faulted) hi = 0.0;
      else if (cfg.fix_previous && status_of(inputs.prev.line, l.id) == 1) lo = 1.0;
      add_var({VarKind::LineStatus, l.id, -1, t}, Binary, lo, hi,
              "xK_" + l.id + "_t" + std::to_string(t));
    }
    for (int gi : sc.gens) {
      const Generator& g = net.generators[gi];
      if (g.kind != GeneratorKind::GridFollowing) continue;
      double lo = cfg.fix_previous && status_of(inputs.prev.gen, g.id) == 1 ? 1.0 : 0.0;
      add_var({VarKind::GenStatus, g.id, -1, t}, Binary, lo, 1.0,
              "xG_" + g.id + "_t" + std::to_string(t));
    }
    for (int di : sc.loads) {
      const Load& d = net.loads[di];
      double lo = cfg.fix_previous && status_of(inputs.prev.load, d.id) == 1 ? 1.0 : 0.0;
      add_var({VarKind::LoadStatus, d.id, -1, t}, Binary, lo, 1.0,
              "xL_" + d.id + "_t" + std::to_string(t));
    }
    for (int b : sc.block_ids) {
      bool fixed_on = cfg.fix_previous && (status_of(inputs.prev.block, b) == 1 ||
                                           sc.source_blocks.count(b));
      add_var({VarKind::BlockStatus, std::to_string(b), -1, t}, Binary, fixed_on ? 1.0 : 0.0, 1.0,
              "xBK_" + std::to_string(b) + "_t" + std::to_string(t));
    }
    for (int gi : sc.gens) {
      const Generator& g = net.generators[gi];
      for (int ph = 0; ph < 3; ++ph) {
        bool present = g.phases.has(static_cast<Phase>(ph));
        add_var({VarKind::GenP, g.id, ph, t}, Continuous, 0.0, present ? g.p_max[ph] : 0.0,
                "PG_" + g.id + "_" + std::string(1, phase_char(static_cast<Phase>(ph))) + "_t" + std::to_string(t));
      }
      for (int ph = 0; ph < 3; ++ph) {
        bool present = g.phases.has(static_cast<Phase>(ph));
        add_var({VarKind::GenQ, g.id, ph, t}, Continuous, 0.0, present ? g.q_max[ph] : 0.0,
                "QG_" + g.id + "_" + std::string(1, phase_char(static_cast<Phase>(ph))) + "_t" + std::to_string(t));
      }
    }
    for (int li : sc.lines) {
      const Line& l = net.lines[li];
      for (int ph = 0; ph < 3; ++ph) {
        bool present = l.phases.has(static_cast<Phase>(ph)) && !l.faulted;
        double lim = present ? l.p_max : 0.0;
        add_var({VarKind::FlowP, l.id, ph, t}, Continuous, -lim, lim,
                "PK_" + l.id + "_" + std::string(1, phase_char(static_cast<Phase>(ph))) + "_t" + std::to_string(t));
      }
      for (int ph = 0; ph < 3; ++ph) {
        bool present = l.phases.has(static_cast<Phase>(ph)) && !l.faulted;
        double lim = present ? l.q_max : 0.0;
        add_var({VarKind::FlowQ, l.id, ph, t}, Continuous, -lim, lim,
                "QK_" + l.id + "_" + std::string(1, phase_char(static_cast<Phase>(ph))) + "_t" + std::to_string(t));
      }
    }
    for (int bi : sc.buses) {
      const Bus& b = net.buses[bi];
      for (int ph = 0; ph < 3; ++ph) {
        bool present = b.phases.has(static_cast<Phase>(ph));
        add_var({VarKind::VoltageSq, b.id, ph, t}, Continuous, 0.0, present ? b.v_max_sq : 0.0,
                "U_" + b.id + "_" + std::string(1, phase_char(static_cast<Phase>(ph))) + "_t" + std::to_string(t));
      }
    }
    for (int gi : sc.gens) {
      const Generator& g = net.generators[gi];
      if (g.kind != GeneratorKind::GridForming) continue;
      double cap = std::max({g.p_max[0], g.p_max[1], g.p_max[2]});
      add_var({VarKind::MaxLoadStep, g.id, -1, t}, Continuous, 0.0, cap,
              "PMLS_" + g.id + "_t" + std::to_string(t));
    }
  }

  auto vid = [&](VarKind k, const std::string& el, int ph, int t) {
    return index.id({k, el, ph, t});
  };

  // ---- objective: maximize restored load over the horizon -------------
  for (int t = 1; t <= T; ++t)
    for (int di : sc.loads) {
      const Load& d = net.loads[di];
      double w = d.priority * d.total_p();
      if (w != 0.0) obj.emplace_back(vid(VarKind::LoadStatus, d.id, -1, t), w);
    }

  auto add_con = [&](LinearConstraint c) { cons.push_back(std::move(c)); };

  // ---- constraints -----------------------------------------------------
  for (int t = 1; t <= T; ++t) {
    const std::string ts = "_t" + std::to_string(t);

    // Nodal balance, active and reactive, per present phase.
    for (int bi : sc.buses) {
      const Bus& b = net.buses[bi];
      for (int ph = 0; ph < 3; ++ph) {
        if (!b.phases.has(static_cast<Phase>(ph))) continue;
        LinearConstraint cp, cq;
        cp.sense = cq.sense = Sense::Equal;
        cp.rhs = cq.rhs = 0.0;
        cp.name = "bal_p_" + b.id + "_" + std::string(1, phase_char(static_cast<Phase>(ph))) + ts;
        cq.name = "bal_q_" + b.id + "_" + std::string(1, phase_char(static_cast<Phase>(ph))) + ts;
        for (int li : sc.lines) {
          const Line& l = net.lines[li];
          if (l.from_bus == b.id) {
            cp.coeffs.emplace_back(vid(VarKind::FlowP, l.id, ph, t), 1.0);
            cq.coeffs.emplace_back(vid(VarKind::FlowQ, l.id, ph, t), 1.0);
          } else if (l.to_bus == b.id) {
            cp.coeffs.emplace_back(vid(VarKind::FlowP, l.id, ph, t), -1.0);
            cq.coeffs.emplace_back(vid(VarKind::FlowQ, l.id, ph, t), -1.0);
          }
        }
        for (int gi : sc.gens) {
          const Generator& g = net.generators[gi];
          if (g.bus != b.id) continue;
          cp.coeffs.emplace_back(vid(VarKind::GenP, g.id, ph, t), -1.0);
          cq.coeffs.emplace_back(vid(VarKind::GenQ, g.id, ph, t), -1.0);
        }
        for (int di : sc.loads) {
          const Load& d = net.loads[di];
          if (d.bus != b.id) continue;
          if (d.p[ph] != 0.0) cp.coeffs.emplace_back(vid(VarKind::LoadStatus, d.id, -1, t), d.p[ph]);
          if (d.q[ph] != 0.0) cq.coeffs.emplace_back(vid(VarKind::LoadStatus, d.id, -1, t), d.q[ph]);
        }
        add_con(std::move(cp));
        add_con(std::move(cq));
      }
    }

    // Line flow limits tied to the line status.
    for (int li : sc.lines) {
      const Line& l = net.lines[li];
      int xk = vid(VarKind::LineStatus, l.id, -1, t);
      for (int ph = 0; ph < 3; ++ph) {
        if (!l.phases.has(static_cast<Phase>(ph))) continue;
        const std::string pf = std::string(1, phase_char(static_cast<Phase>(ph)));
        add_con({{{vid(VarKind::FlowP, l.id, ph, t), 1.0}, {xk, -l.p_max}},
                 Sense::LessEqual, 0.0, "cap_p_hi_" + l.id + "_" + pf + ts});
        add_con({{{vid(VarKind::FlowP, l.id, ph, t), -1.0}, {xk, -l.p_max}},
                 Sense::LessEqual, 0.0, "cap_p_lo_" + l.id + "_" + pf + ts});
        add_con({{{vid(VarKind::FlowQ, l.id, ph, t), 1.0}, {xk, -l.q_max}},
                 Sense::LessEqual, 0.0, "cap_q_hi_" + l.id + "_" + pf + ts});
        add_con({{{vid(VarKind::FlowQ, l.id, ph, t), -1.0}, {xk, -l.q_max}},
                 Sense::LessEqual, 0.0, "cap_q_lo_" + l.id + "_" + pf + ts});
      }
    }

    // Grid-following output gated by the switch-on status.
    for (int gi : sc.gens) {
      const Generator& g = net.generators[gi];
      if (g.kind != GeneratorKind::GridFollowing) continue;
      int xg = vid(VarKind::GenStatus, g.id, -1, t);
      for (int ph = 0; ph < 3; ++ph) {
        if (!g.phases.has(static_cast<Phase>(ph))) continue;
        const std::string pf = std::string(1, phase_char(static_cast<Phase>(ph)));
        if (g.p_max[ph] > 0.0)
          add_con({{{vid(VarKind::GenP, g.id, ph, t), 1.0}, {xg, -g.p_max[ph]}},
                   Sense::LessEqual, 0.0, "gf_p_" + g.id + "_" + pf + ts});
        if (g.q_max[ph] > 0.0)
          add_con({{{vid(VarKind::GenQ, g.id, ph, t), 1.0}, {xg, -g.q_max[ph]}},
                   Sense::LessEqual, 0.0, "gf_q_" + g.id + "_" + pf + ts});
      }
    }

    // Voltage difference along energized lines (big-M relaxed otherwise).
    for (int li : sc.lines) {
      const Line& l = net.lines[li];
      if (l.faulted) continue;  // status fixed to zero; rows would be vacuous
      auto [rhat, xhat] = equivalent_impedance(l.impedance);
      const Bus& bi = net.bus(l.from_bus);
      const Bus& bj = net.bus(l.to_bus);
      double m_line = cfg.big_m > 0.0
                          ? cfg.big_m
                          : 10.0 * std::max(bi.v_max_sq - bi.v_min_sq, bj.v_max_sq - bj.v_min_sq);
      int xk = vid(VarKind::LineStatus, l.id, -1, t);
      for (int ph = 0; ph < 3; ++ph) {
        if (!l.phases.has(static_cast<Phase>(ph))) continue;
        const std::string pf = std::string(1, phase_char(static_cast<Phase>(ph)));
        LinearConstraint lo, hi;
        lo.sense = Sense::GreaterEqual;
        hi.sense = Sense::LessEqual;
        lo.rhs = -m_line;  // (x^K + p - 2) M with p = 1
        hi.rhs = m_line;   // (2 - x^K - p) M
        lo.name = "vdiff_lo_" + l.id + "_" + pf + ts;
        hi.name = "vdiff_hi_" + l.id + "_" + pf + ts;
        auto push = [&](LinearConstraint& c, double mcoef) {
          c.coeffs.emplace_back(vid(VarKind::VoltageSq, l.from_bus, ph, t), 1.0);
          c.coeffs.emplace_back(vid(VarKind::VoltageSq, l.to_bus, ph, t), -1.0);
          for (int ps = 0; ps < 3; ++ps) {
            if (!l.phases.has(static_cast<Phase>(ps))) continue;
            if (rhat(ph, ps) != 0.0)
              c.coeffs.emplace_back(vid(VarKind::FlowP, l.id, ps, t), -2.0 * rhat(ph, ps));
            if (xhat(ph, ps) != 0.0)
              c.coeffs.emplace_back(vid(VarKind::FlowQ, l.id, ps, t), -2.0 * xhat(ph, ps));
          }
          c.coeffs.emplace_back(xk, mcoef);
        };
        push(lo, -m_line);
        push(hi, m_line);
        add_con(std::move(lo));
        add_con(std::move(hi));
      }
    }

    // Voltage box gated by bus status.
    for (int bi_ : sc.buses) {
      const Bus& b = net.buses[bi_];
      int xb = vid(VarKind::BusStatus, b.id, -1, t);
      for (int ph = 0; ph < 3; ++ph) {
        if (!b.phases.has(static_cast<Phase>(ph))) continue;
        const std::string pf = std::string(1, phase_char(static_cast<Phase>(ph)));
        add_con({{{vid(VarKind::VoltageSq, b.id, ph, t), 1.0}, {xb, -b.v_max_sq}},
                 Sense::LessEqual, 0.0, "vbox_hi_" + b.id + "_" + pf + ts});
        add_con({{{vid(VarKind::VoltageSq, b.id, ph, t), 1.0}, {xb, -b.v_min_sq}},
                 Sense::GreaterEqual, 0.0, "vbox_lo_" + b.id + "_" + pf + ts});
      }
    }

    // Connection logic.
    for (int gi : sc.gens) {
      const Generator& g = net.generators[gi];
      if (g.kind != GeneratorKind::GridFollowing) continue;
      add_con({{{vid(VarKind::GenStatus, g.id, -1, t), 1.0},
                {vid(VarKind::BusStatus, g.bus, -1, t), -1.0}},
               Sense::LessEqual, 0.0, "gen_bus_" + g.id + ts});
    }
    for (int li : sc.lines) {
      const Line& l = net.lines[li];
      if (l.faulted) continue;
      int xk = vid(VarKind::LineStatus, l.id, -1, t);
      if (l.switchable) {
        add_con({{{xk, 1.0}, {vid(VarKind::BusStatus, l.from_bus, -1, t), -1.0}},
                 Sense::LessEqual, 0.0, "line_busA_" + l.id + ts});
        add_con({{{xk, 1.0}, {vid(VarKind::BusStatus, l.to_bus, -1, t), -1.0}},
                 Sense::LessEqual, 0.0, "line_busB_" + l.id + ts});
      } else {
        add_con({{{xk, 1.0}, {vid(VarKind::BusStatus, l.from_bus, -1, t), -1.0}},
                 Sense::Equal, 0.0, "nsline_busA_" + l.id + ts});
        add_con({{{xk, 1.0}, {vid(VarKind::BusStatus, l.to_bus, -1, t), -1.0}},
                 Sense::Equal, 0.0, "nsline_busB_" + l.id + ts});
      }
    }
    for (int di : sc.loads) {
      const Load& d = net.loads[di];
      add_con({{{vid(VarKind::LoadStatus, d.id, -1, t), 1.0},
                {vid(VarKind::BusStatus, d.bus, -1, t), -1.0}},
               d.switchable ? Sense::LessEqual : Sense::Equal, 0.0,
               (d.switchable ? "load_bus_" : "nsload_bus_") + d.id + ts});
    }

    // No-trip links between consecutive steps (t = 1 links are handled by
    // fixing previously energized elements).
    if (t >= 2) {
      for (int gi : sc.gens) {
        const Generator& g = net.generators[gi];
        if (g.kind != GeneratorKind::GridFollowing) continue;
        add_con({{{vid(VarKind::GenStatus, g.id, -1, t), 1.0},
                  {vid(VarKind::GenStatus, g.id, -1, t - 1), -1.0}},
                 Sense::GreaterEqual, 0.0, "notrip_gen_" + g.id + ts});
      }
      for (int li : sc.lines) {
        const Line& l = net.lines[li];
        if (!l.switchable || l.faulted) continue;
        add_con({{{vid(VarKind::LineStatus, l.id, -1, t), 1.0},
                  {vid(VarKind::LineStatus, l.id, -1, t - 1), -1.0}},
                 Sense::GreaterEqual, 0.0, "notrip_line_" + l.id + ts});
      }
      for (int di : sc.loads) {
        const Load& d = net.loads[di];
        if (!d.switchable) continue;
        add_con({{{vid(VarKind::LoadStatus, d.id, -1, t), 1.0},
                  {vid(VarKind::LoadStatus, d.id, -1, t - 1), -1.0}},
                 Sense::GreaterEqual, 0.0, "notrip_load_" + d.id + ts});
      }
    }

    // Bus status equals its block status.
    for (int bi_ : sc.buses) {
      const Bus& b = net.buses[bi_];
      add_con({{{vid(VarKind::BusStatus, b.id, -1, t), 1.0},
                {vid(VarKind::BlockStatus, std::to_string(sc.block_of_bus.at(b.id)), -1, t), -1.0}},
               Sense::Equal, 0.0, "bus_block_" + b.id + ts});
    }

    // Loop prohibition: a switchable line may close only while energizing at
    // least one of its end blocks.
    for (int li : sc.lines) {
      const Line& l = net.lines[li];
      if (!l.switchable || l.faulted) continue;
      int ba = sc.block_of_bus.at(l.from_bus);
      int bb = sc.block_of_bus.at(l.to_bus);
      LinearConstraint c;
      c.sense = Sense::GreaterEqual;
      c.name = "noloop_" + l.id + ts;
      c.coeffs.emplace_back(vid(VarKind::BlockStatus, std::to_string(ba), -1, t), 1.0);
      c.coeffs.emplace_back(vid(VarKind::BlockStatus, std::to_string(bb), -1, t), 1.0);
      c.coeffs.emplace_back(vid(VarKind::LineStatus, l.id, -1, t), -1.0);
      if (t >= 2) {
        c.coeffs.emplace_back(vid(VarKind::BlockStatus, std::to_string(ba), -1, t - 1), -1.0);
        c.coeffs.emplace_back(vid(VarKind::BlockStatus, std::to_string(bb), -1, t - 1), -1.0);
        c.coeffs.emplace_back(vid(VarKind::LineStatus, l.id, -1, t - 1), 1.0);
        c.rhs = 0.0;
      } else {
        c.rhs = static_cast<double>(status_of(inputs.prev.block, ba)) +
                static_cast<double>(status_of(inputs.prev.block, bb)) -
                static_cast<double>(status_of(inputs.prev.line, l.id));
      }
      add_con(std::move(c));
    }

    // A block that was dark can close at most one incident switch per step.
    for (int b : sc.block_ids) {
      auto it = sc.incident.find(b);
      if (it == sc.incident.end() || it->second.empty()) continue;
      const double deg = static_cast<double>(it->second.size());
      LinearConstraint c;
      c.sense = Sense::LessEqual;
      c.name = "one_switch_" + std::to_string(b) + ts;
      double rhs = 1.0;
      for (const std::string& lid : it->second) {
        c.coeffs.emplace_back(vid(VarKind::LineStatus, lid, -1, t), 1.0);
        if (t >= 2)
          c.coeffs.emplace_back(vid(VarKind::LineStatus, lid, -1, t - 1), -1.0);
        else
          rhs += static_cast<double>(status_of(inputs.prev.line, lid));
      }
      if (t >= 2)
        c.coeffs.emplace_back(vid(VarKind::BlockStatus, std::to_string(b), -1, t - 1), -deg);
      else
        rhs += deg * static_cast<double>(status_of(inputs.prev.block, b));
      c.rhs = rhs;
      add_con(std::move(c));
    }

    // A non-source block is energized only through a closed incident switch.
    for (int b : sc.block_ids) {
      if (sc.source_blocks.count(b)) continue;
      LinearConstraint c;
      c.sense = Sense::LessEqual;
      c.rhs = 0.0;
      c.name = "block_feed_" + std::to_string(b) + ts;
      c.coeffs.emplace_back(vid(VarKind::BlockStatus, std::to_string(b), -1, t), 1.0);
      auto it = sc.incident.find(b);
      if (it != sc.incident.end())
        for (const std::string& lid : it->second)
          c.coeffs.emplace_back(vid(VarKind::LineStatus, lid, -1, t), -1.0);
      add_con(std::move(c));
    }

    // A switch can close only next to a block that was energized before.
    for (int li : sc.lines) {
      const Line& l = net.lines[li];
      if (!l.switchable || l.faulted) continue;
      int ba = sc.block_of_bus.at(l.from_bus);
      int bb = sc.block_of_bus.at(l.to_bus);
      LinearConstraint c;
      c.sense = Sense::LessEqual;
      c.name = "seq_" + l.id + ts;
      c.coeffs.emplace_back(vid(VarKind::LineStatus, l.id, -1, t), 1.0);
      if (t >= 2) {
        c.coeffs.emplace_back(vid(VarKind::BlockStatus, std::to_string(ba), -1, t - 1), -1.0);
        if (bb != ba)
          c.coeffs.emplace_back(vid(VarKind::BlockStatus, std::to_string(bb), -1, t - 1), -1.0);
        c.rhs = 0.0;
      } else {
        c.rhs = static_cast<double>(status_of(inputs.prev.block, ba)) +
                static_cast<double>(ba != bb ? status_of(inputs.prev.block, bb) : 0);
      }
      add_con(std::move(c));
    }
  }

  MilpProblem prob = milp::build_problem(std::move(vars), std::move(cons), std::move(obj),
                                         milp::ObjSense::Maximize);
  return {std::move(prob), std::move(index)};
}

void add_frequency_constraints(milp::MilpProblem& problem, const ModelIndex& index,
                               const NetworkModel& net, const StageInputs& inputs) {
  if (inputs.alpha < 0) throw std::invalid_argument("frequency constraints: alpha must be >= 0");
  if (!(inputs.delta_f_max > 0))
    throw std::invalid_argument("frequency constraints: delta_f_max must be > 0");
  if (!inputs.freq_constraints) return;

  const int T = inputs.horizon;
  const double inc = inputs.alpha * (inputs.delta_f_max - inputs.delta_f_meas);

  std::vector<LinearConstraint> extra;
  for (const Generator& g : net.generators) {
    if (g.kind != GeneratorKind::GridForming) continue;
    if (!index.contains({VarKind::MaxLoadStep, g.id, -1, 1})) continue;  // not in this MG

    for (int t = 1; t <= T; ++t) {
      const std::string ts = "_t" + std::to_string(t);
      // Max-load-step growth chain; inactive at stage 1 (no prior nadir).
      if (inputs.stage >= 2) {
        LinearConstraint c;
        c.sense = Sense::LessEqual;
        c.name = "mls_" + g.id + ts;
        c.coeffs.emplace_back(index.id({VarKind::MaxLoadStep, g.id, -1, t}), 1.0);
        if (t >= 2) {
          c.coeffs.emplace_back(index.id({VarKind::MaxLoadStep, g.id, -1, t - 1}), -1.0);
          c.rhs = inc;
        } else {
          auto it = inputs.prev_mls.find(g.id);
          double prev = it == inputs.prev_mls.end() ? 0.0 : it->second;
          c.rhs = prev + inc;
        }
        extra.push_back(std::move(c));
      }
      // Ramp envelope of the forming unit, per phase.
      for (int ph = 0; ph < 3; ++ph) {
        if (!g.phases.has(static_cast<Phase>(ph))) continue;
        const std::string pf = std::string(1, phase_char(static_cast<Phase>(ph)));
        int pg = index.id({VarKind::GenP, g.id, ph, t});
        int mls = index.id({VarKind::MaxLoadStep, g.id, -1, t});
        LinearConstraint up, dn;
        up.sense = dn.sense = Sense::LessEqual;
        up.name = "ramp_up_" + g.id + "_" + pf + ts;
        dn.name = "ramp_dn_" + g.id + "_" + pf + ts;
        up.coeffs.emplace_back(pg, 1.0);
        up.coeffs.emplace_back(mls, -1.0);
        dn.coeffs.emplace_back(pg, -1.0);
        dn.coeffs.emplace_back(mls, -1.0);
        if (t >= 2) {
          up.coeffs.emplace_back(index.id({VarKind::GenP, g.id, ph, t - 1}), -1.0);
          dn.coeffs.emplace_back(index.id({VarKind::GenP, g.id, ph, t - 1}), 1.0);
          up.rhs = dn.rhs = 0.0;
        } else {
          auto it = inputs.prev_gen_p.find(g.id);
          double prev = it == inputs.prev_gen_p.end() ? 0.0 : it->second[ph];
          up.rhs = prev;
          dn.rhs = -prev;
        }
        extra.push_back(std::move(up));
        extra.push_back(std::move(dn));
      }
    }
  }
  for (auto& c : extra) problem.constraints.push_back(std::move(c));
}

}  // namespace mgres::restoration
