#include "mgres/feeder_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mgres {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("feeder: " + msg); }

const json& require(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) fail(ctx + ": missing field '" + key + "'");
  return *it;
}

double require_number(const json& j, const char* key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number()) fail(ctx + ": field '" + key + "' must be a number");
  return v.get<double>();
}

std::string require_string(const json& j, const char* key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_string()) fail(ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

PhaseSet require_phases(const json& j, const std::string& ctx) {
  std::string s = require_string(j, "phases", ctx);
  try {
    PhaseSet p = PhaseSet::parse(s);
    if (p.empty()) fail(ctx + ": empty phase set");
    return p;
  } catch (const std::invalid_argument& e) {
    fail(ctx + ": " + e.what());
  }
}

std::array<double, 3> phase_array(const json& j, const char* key, const std::string& ctx, double scale) {
  const json& v = require(j, key, ctx);
  if (!v.is_array() || v.size() != 3) fail(ctx + ": field '" + key + "' must be an array of 3 numbers");
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) fail(ctx + ": field '" + key + "' must contain numbers");
    out[i] = v[i].get<double>() * scale;
  }
  return out;
}

}  // namespace

NetworkModel parse_feeder(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");

  NetworkModel net;
  const json& base = require(doc, "base", "document");
  net.base.kv = require_number(base, "kv", "base");
  net.base.mva = require_number(base, "mva", "base");
  if (net.base.kv <= 0 || net.base.mva <= 0) fail("base kv and mva must be positive");

  const double z_base = net.base.kv * net.base.kv / net.base.mva;  // ohm
  const double kw_to_pu = 1.0 / (net.base.mva * 1000.0);

  const json& buses = require(doc, "buses", "document");
  if (!buses.is_array()) fail("'buses' must be an array");
  for (const json& jb : buses) {
    std::string ctx = "bus";
    Bus b;
    b.id = require_string(jb, "id", ctx);
    ctx = "bus '" + b.id + "'";
    b.phases = require_phases(jb, ctx);
    b.v_min_sq = require_number(jb, "v_min", ctx);
    b.v_max_sq = require_number(jb, "v_max", ctx);
    b.v_min_sq *= b.v_min_sq;
    b.v_max_sq *= b.v_max_sq;
    net.buses.push_back(std::move(b));
  }

  const json& lines = require(doc, "lines", "document");
  if (!lines.is_array()) fail("'lines' must be an array");
  for (const json& jl : lines) {
    std::string ctx = "line";
    Line l;
    l.id = require_string(jl, "id", ctx);
    ctx = "line '" + l.id + "'";
    l.from_bus = require_string(jl, "from", ctx);
    l.to_bus = require_string(jl, "to", ctx);
    l.phases = require_phases(jl, ctx);
    const json& zj = require(jl, "impedance_ohm", ctx);
    if (!zj.is_array() || zj.size() != 3) fail(ctx + ": impedance_ohm must be a 3x3 array of [re, im] pairs");
    for (int r = 0; r < 3; ++r) {
      if (!zj[r].is_array() || zj[r].size() != 3) fail(ctx + ": impedance_ohm row " + std::to_string(r) + " malformed");
      for (int c = 0; c < 3; ++c) {
        const json& e = zj[r][c];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          fail(ctx + ": impedance entry must be [re, im]");
        l.impedance(r, c) = std::complex<double>(e[0].get<double>() / z_base, e[1].get<double>() / z_base);
      }
    }
    const json& sw = require(jl, "switchable", ctx);
    if (!sw.is_boolean()) fail(ctx + ": 'switchable' must be a boolean");
    l.switchable = sw.get<bool>();
    l.p_max = require_number(jl, "p_max_kw", ctx) * kw_to_pu;
    l.q_max = require_number(jl, "q_max_kvar", ctx) * kw_to_pu;
    net.lines.push_back(std::move(l));
  }

  const json& loads = require(doc, "loads", "document");
  if (!loads.is_array()) fail("'loads' must be an array");
  for (const json& jd : loads) {
    std::string ctx = "load";
    Load d;
    d.id = require_string(jd, "id", ctx);
    ctx = "load '" + d.id + "'";
    d.bus = require_string(jd, "bus", ctx);
    d.phases = require_phases(jd, ctx);
    d.p = phase_array(jd, "p_kw", ctx, kw_to_pu);
    d.q = phase_array(jd, "q_kvar", ctx, kw_to_pu);
    const json& sw = require(jd, "switchable", ctx);
    if (!sw.is_boolean()) fail(ctx + ": 'switchable' must be a boolean");
    d.switchable = sw.get<bool>();
    d.priority = jd.contains("priority") ? require_number(jd, "priority", ctx) : 1.0;
    net.loads.push_back(std::move(d));
  }

  const json& gens = require(doc, "generators", "document");
  if (!gens.is_array()) fail("'generators' must be an array");
  for (const json& jg : gens) {
    std::string ctx = "generator";
    Generator g;
    g.id = require_string(jg, "id", ctx);
    ctx = "generator '" + g.id + "'";
    g.bus = require_string(jg, "bus", ctx);
    std::string kind = require_string(jg, "kind", ctx);
    if (kind == "grid_forming") g.kind = GeneratorKind::GridForming;
    else if (kind == "grid_following") g.kind = GeneratorKind::GridFollowing;
    else fail(ctx + ": kind must be 'grid_forming' or 'grid_following'");
    g.phases = require_phases(jg, ctx);
    g.p_max = phase_array(jg, "p_max_kw", ctx, kw_to_pu);
    g.q_max = phase_array(jg, "q_max_kvar", ctx, kw_to_pu);
    net.generators.push_back(std::move(g));
  }

  try {
    net.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }

  if (doc.contains("faults")) {
    const json& faults = doc["faults"];
    if (!faults.is_array()) fail("'faults' must be an array of line ids");
    std::vector<std::string> ids;
    for (const json& f : faults) {
      if (!f.is_string()) fail("fault entries must be line ids");
      ids.push_back(f.get<std::string>());
    }
    try {
      net = apply_faults(net, ids);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  return net;
}

NetworkModel load_feeder_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open feeder file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_feeder(ss.str());
}

}  // namespace mgres
