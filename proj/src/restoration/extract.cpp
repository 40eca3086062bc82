#include "mgres/restoration/extract.hpp"

#include <cmath>
#include <stdexcept>

namespace mgres::restoration {

RestorationStage extract_stage(const milp::MilpSolution& solution, const ModelIndex& index,
                               const StageInputs& inputs, const NetworkModel& net,
                               double int_tol) {
  if (!solution.has_solution())
    throw std::runtime_error("extract_stage: solve produced no incumbent (" +
                             milp::to_string(solution.status) + ")");

  auto value = [&](const VarKey& k) { return solution.values.at(index.id(k)); };
  auto binary = [&](const VarKey& k) {
    double v = value(k);
    double r = std::round(v);
    if (std::abs(v - r) > int_tol)
      throw std::runtime_error("extract_stage: binary " + ModelIndex::describe(k) +
                               " not integral (value " + std::to_string(v) + ")");
    return static_cast<int>(r);
  };

  RestorationStage st;
  st.stage = inputs.stage;
  st.mg_id = inputs.mg.id;
  st.objective = solution.objective;

  const double kw = net.base.mva * 1000.0;

  for (const std::string& bid : inputs.mg.buses) {
    st.status.bus[bid] = binary({VarKind::BusStatus, bid, -1, 1});
    std::array<double, 3> u{};
    for (int ph = 0; ph < 3; ++ph) u[ph] = value({VarKind::VoltageSq, bid, ph, 1});
    st.voltage_sq[bid] = u;
  }
  for (const Line& l : net.lines) {
    if (!index.contains({VarKind::LineStatus, l.id, -1, 1})) continue;
    st.status.line[l.id] = binary({VarKind::LineStatus, l.id, -1, 1});
    std::array<double, 3> fp{}, fq{};
    for (int ph = 0; ph < 3; ++ph) {
      fp[ph] = value({VarKind::FlowP, l.id, ph, 1});
      fq[ph] = value({VarKind::FlowQ, l.id, ph, 1});
    }
    st.flow_p[l.id] = fp;
    st.flow_q[l.id] = fq;
  }
  for (const Generator& g : net.generators) {
    if (!index.contains({VarKind::GenP, g.id, 0, 1})) continue;
    if (g.kind == GeneratorKind::GridFollowing)
      st.status.gen[g.id] = binary({VarKind::GenStatus, g.id, -1, 1});
    std::array<double, 3> p{}, q{};
    for (int ph = 0; ph < 3; ++ph) {
      p[ph] = value({VarKind::GenP, g.id, ph, 1});
      q[ph] = value({VarKind::GenQ, g.id, ph, 1});
    }
    st.gen_p[g.id] = p;
    st.gen_q[g.id] = q;
    if (g.kind == GeneratorKind::GridForming)
      st.mls[g.id] = value({VarKind::MaxLoadStep, g.id, -1, 1});
  }
  for (const Load& d : net.loads) {
    if (!index.contains({VarKind::LoadStatus, d.id, -1, 1})) continue;
    int on = binary({VarKind::LoadStatus, d.id, -1, 1});
    st.status.load[d.id] = on;
    if (on) {
      st.restored_kw += d.total_p() * kw;
      st.restored_kvar += d.total_q() * kw;
    }
  }
  for (int b : inputs.mg.block_ids)
    st.status.block[b] = binary({VarKind::BlockStatus, std::to_string(b), -1, 1});

  return st;
}

}  // namespace mgres::restoration
