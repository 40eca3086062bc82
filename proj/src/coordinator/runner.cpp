#include "mgres/coordinator/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <set>
#include <stdexcept>

#include "mgres/restoration/builder.hpp"
#include "mgres/restoration/extract.hpp"

namespace mgres::coordinator {

using restoration::ElementStatuses;
using restoration::RestorationStage;
using restoration::StageInputs;

double update_max_load_step(double prev, double alpha, double delta_f_max, double delta_f_meas) {
  return std::max(0.0, prev + alpha * (delta_f_max - delta_f_meas));
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Saturated: return "saturated";
    case Termination::MaxStages: return "max_stages";
    case Termination::Infeasible: return "infeasible";
    case Termination::Instability: return "instability";
  }
  return "unknown";
}

namespace {

struct MgRuntime {
  Microgrid mg;
  ElementStatuses prev;
  std::map<std::string, std::array<double, 3>> prev_gen_p;
  std::map<std::string, double> prev_mls;   // bound carried into the next stage, pu
  double delta_f_meas = 0.0;                // from the last simulated trace
  sim::InverterState sim_state;
  double sim_p_load = 0.0;  // pu seen by the forming unit
  double sim_q_load = 0.0;
  double restored_kw = 0.0;
  double restorable_kw = 0.0;  // min(total load, total DG capacity)
  bool ever_simulated = false;
};

double mg_total_load_kw(const NetworkModel& net, const Microgrid& mg) {
  std::set<std::string> buses(mg.buses.begin(), mg.buses.end());
  double s = 0.0;
  for (const Load& d : net.loads)
    if (buses.count(d.bus)) s += d.total_p();
  return s * net.base.mva * 1000.0;
}

double mg_total_cap_kw(const NetworkModel& net, const Microgrid& mg) {
  std::set<std::string> buses(mg.buses.begin(), mg.buses.end());
  double s = 0.0;
  for (const Generator& g : net.generators)
    if (buses.count(g.bus)) s += g.total_p_max();
  return s * net.base.mva * 1000.0;
}

}  // namespace

bool stopping_criterion(const std::vector<StageResult>& stages, const NetworkModel& net,
                        const MicrogridPartition& partition, std::string* reason) {
  if (stages.empty()) return false;
  const StageResult& last = stages.back();

  bool all_at_max = true;
  for (size_t k = 0; k < partition.microgrids.size(); ++k) {
    const Microgrid& mg = partition.microgrids[k];
    double restorable = std::min(mg_total_load_kw(net, mg), mg_total_cap_kw(net, mg));
    double restored = 0.0;
    for (const MgStageOutcome& o : last.per_mg)
      if (o.stage.mg_id == mg.id) restored = o.stage.restored_kw;
    if (restored < restorable - 1e-6) {
      all_at_max = false;
      break;
    }
  }
  if (all_at_max) {
    if (reason) *reason = "all microgrids at their restorable maximum";
    return true;
  }
  if (last.delta_kw <= 1e-6) {
    if (reason) *reason = "no additional load restored in the last stage";
    return true;
  }
  return false;
}

RestorationRun run_sequential_restoration(const NetworkModel& net, const ScenarioConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  RestorationRun run;
  run.blocks = compute_bus_blocks(net);
  run.partition = partition_microgrids(net);
  if (run.partition.microgrids.empty())
    throw std::invalid_argument("run: no restorable microgrid (no grid-forming DG reachable)");

  std::vector<MgRuntime> rts;
  for (const Microgrid& mg : run.partition.microgrids) {
    MgRuntime rt;
    rt.mg = mg;
    rt.prev = ElementStatuses::all_zero(net, run.blocks);
    if (cfg.start_energized) {
      std::set<std::string> buses(mg.buses.begin(), mg.buses.end());
      for (const Bus& b : net.buses)
        if (buses.count(b.id)) rt.prev.bus[b.id] = 1;
      for (const Line& l : net.lines)
        if (!l.faulted && buses.count(l.from_bus) && buses.count(l.to_bus)) rt.prev.line[l.id] = 1;
      for (const Generator& g : net.generators)
        if (g.kind == GeneratorKind::GridFollowing && buses.count(g.bus)) rt.prev.gen[g.id] = 1;
      for (const Load& d : net.loads)
        if (buses.count(d.bus)) rt.prev.load[d.id] = 1;
      for (int b : mg.block_ids) rt.prev.block[b] = 1;
    }
    for (const Generator& g : net.generators) rt.prev_gen_p[g.id] = {0.0, 0.0, 0.0};
    for (const std::string& gid : mg.forming_generators) rt.prev_mls[gid] = 0.0;
    rt.restorable_kw = std::min(mg_total_load_kw(net, mg), mg_total_cap_kw(net, mg));
    const sim::InverterParams& prm = cfg.params_for(mg.id);
    rt.sim_state = sim::equilibrium_state(prm, 0.0, 0.0);
    rts.push_back(std::move(rt));
  }

  double cumulative_prev = 0.0;
  if (cfg.start_energized) {
    // Pre-energized elements count as already restored before stage 1.
    for (MgRuntime& rt : rts) {
      std::set<std::string> buses(rt.mg.buses.begin(), rt.mg.buses.end());
      for (const Load& d : net.loads)
        if (buses.count(d.bus)) rt.restored_kw += d.total_p() * net.base.mva * 1000.0;
      cumulative_prev += rt.restored_kw;
    }
  }

  for (int stage = 1; stage <= cfg.max_stages; ++stage) {
    StageResult sr;
    sr.stage = stage;

    auto solve_one = [&](MgRuntime& rt) -> MgStageOutcome {
      const auto ts0 = std::chrono::steady_clock::now();
      MgStageOutcome out;

      StageInputs in;
      in.stage = stage;
      in.horizon = cfg.horizon;
      in.mg = rt.mg;
      in.blocks = run.blocks;
      in.prev = rt.prev;
      in.prev_gen_p = rt.prev_gen_p;
      in.prev_mls = rt.prev_mls;
      in.delta_f_meas = rt.delta_f_meas;
      in.delta_f_max = cfg.delta_f_max;
      in.alpha = cfg.alpha;
      in.freq_constraints = cfg.freq_constraints;

      restoration::BuilderConfig bcfg;
      bcfg.big_m = cfg.big_m;
      auto [problem, index] = restoration::build_stage_problem(net, in, bcfg);
      restoration::add_frequency_constraints(problem, index, net, in);

      milp::MilpSolution sol = milp::solve_milp(problem, cfg.solver);
      out.solver_status = sol.status;
      out.nodes = sol.nodes_explored;
      if (!sol.has_solution()) {
        out.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - ts0).count();
        return out;  // caller inspects solver_status
      }
      out.stage = restoration::extract_stage(sol, index, in, net, cfg.solver.int_tol);

      // Net step seen by the forming unit = its dispatch change (restored load
      // minus grid-following pickup, by nodal balance).
      double p_new = 0.0, q_new = 0.0, ramp = 0.0;
      for (const std::string& gid : rt.mg.forming_generators) {
        const auto& gp = out.stage.gen_p.at(gid);
        const auto& gq = out.stage.gen_q.at(gid);
        const auto& prev = rt.prev_gen_p.at(gid);
        for (int ph = 0; ph < 3; ++ph) {
          p_new += gp[ph];
          q_new += gq[ph];
          ramp = std::max(ramp, std::abs(gp[ph] - prev[ph]));
        }
      }
      out.net_step_kw = (p_new - rt.sim_p_load) * net.base.mva * 1000.0;
      out.restored_delta_kw = out.stage.restored_kw - rt.restored_kw;

      const sim::InverterParams& prm = cfg.params_for(rt.mg.id);
      sim::SimOptions so = cfg.sim;
      sim::FrequencyTrace tr = sim::simulate_load_step(rt.sim_state, prm, p_new, q_new, so);
      tr.t_start = (stage - 1) * cfg.sim.duration;
      auto [fn, tn] = sim::frequency_nadir(tr);
      tr.f_nadir = fn;
      tr.t_nadir = tn;
      out.trace = tr;
      out.delta_f_meas = sim::delta_f_meas(tr, cfg.f0_hz);

      // Max-load-step input for the next stage: the realized first step at
      // stage 1 (the bound chain is inactive there), the Eq. (28) bound after.
      for (const std::string& gid : rt.mg.forming_generators) {
        double next;
        if (stage == 1) {
          next = ramp;
        } else {
          next = update_max_load_step(rt.prev_mls.at(gid), cfg.alpha, cfg.delta_f_max,
                                      rt.delta_f_meas);
        }
        out.mls_bound_pu = next;  // single forming DG per MG in bundled data
      }
      out.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - ts0).count();
      return out;
    };

    std::vector<MgStageOutcome> outcomes(rts.size());
    if (cfg.parallel_mgs && rts.size() > 1) {
      std::vector<std::future<MgStageOutcome>> futs;
      futs.reserve(rts.size());
      for (MgRuntime& rt : rts)
        futs.push_back(std::async(std::launch::async, solve_one, std::ref(rt)));
      for (size_t k = 0; k < futs.size(); ++k) outcomes[k] = futs[k].get();
    } else {
      for (size_t k = 0; k < rts.size(); ++k) outcomes[k] = solve_one(rts[k]);
    }

    // Inspect failures before committing state.
    for (size_t k = 0; k < rts.size(); ++k) {
      const MgStageOutcome& o = outcomes[k];
      if (o.solver_status == milp::SolveStatus::Infeasible ||
          o.solver_status == milp::SolveStatus::NumericError) {
        run.termination = Termination::Infeasible;
        run.termination_detail = "stage " + std::to_string(stage) + ": MG " +
                                 std::to_string(rts[k].mg.id) + " solve " +
                                 milp::to_string(o.solver_status);
        sr.per_mg = std::move(outcomes);
        run.stage_results.push_back(std::move(sr));
        run.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return run;
      }
    }

    double cumulative = 0.0;
    bool unstable = false;
    std::string unstable_detail;
    for (size_t k = 0; k < rts.size(); ++k) {
      MgRuntime& rt = rts[k];
      MgStageOutcome& o = outcomes[k];
      rt.prev = o.stage.status;
      for (const auto& [gid, gp] : o.stage.gen_p) rt.prev_gen_p[gid] = gp;
      for (const std::string& gid : rt.mg.forming_generators) rt.prev_mls[gid] = o.mls_bound_pu;
      rt.delta_f_meas = o.delta_f_meas;
      rt.sim_state = o.trace.end_state;
      double p_new = 0.0, q_new = 0.0;
      for (const std::string& gid : rt.mg.forming_generators) {
        for (int ph = 0; ph < 3; ++ph) {
          p_new += o.stage.gen_p.at(gid)[ph];
          q_new += o.stage.gen_q.at(gid)[ph];
        }
      }
      rt.sim_p_load = p_new;
      rt.sim_q_load = q_new;
      rt.restored_kw = o.stage.restored_kw;
      rt.ever_simulated = true;
      cumulative += rt.restored_kw;
      if (!o.trace.stable) {
        unstable = true;
        unstable_detail = "stage " + std::to_string(stage) + ": MG " + std::to_string(rt.mg.id) +
                          " frequency transient unstable";
      }
    }
    sr.per_mg = std::move(outcomes);
    sr.total_restored_kw = cumulative;
    sr.delta_kw = cumulative - cumulative_prev;
    cumulative_prev = cumulative;
    run.stage_results.push_back(std::move(sr));
    run.total_restored_kw = cumulative;

    if (unstable) {
      run.termination = Termination::Instability;
      run.termination_detail = unstable_detail;
      break;
    }
    std::string reason;
    if (stopping_criterion(run.stage_results, net, run.partition, &reason)) {
      run.termination = Termination::Saturated;
      run.termination_detail = reason;
      break;
    }
    if (stage == cfg.max_stages) {
      run.termination = Termination::MaxStages;
      run.termination_detail = "max_stages safeguard reached";
    }
  }

  run.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

std::vector<AlphaSummary> compare_alpha_sweep(const NetworkModel& net, const ScenarioConfig& cfg,
                                              const std::vector<double>& alphas) {
  std::vector<AlphaSummary> out;
  for (double a : alphas) {
    if (a < 0) throw std::invalid_argument("alpha sweep: alpha must be >= 0");
    ScenarioConfig c = cfg;
    c.alpha = a;
    RestorationRun run = run_sequential_restoration(net, c);
    AlphaSummary s;
    s.alpha = a;
    s.total_restored_kw = run.total_restored_kw;
    s.termination = run.termination;
    int last_progress = 0;
    for (const StageResult& sr : run.stage_results) {
      if (sr.delta_kw > 1e-6) last_progress = sr.stage;
      std::vector<double> nadirs;
      for (const MgStageOutcome& o : sr.per_mg) nadirs.push_back(o.trace.f_nadir);
      s.nadirs_by_stage.push_back(std::move(nadirs));
    }
    s.stages_to_completion = last_progress;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mgres::coordinator
