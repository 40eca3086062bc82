#include "mgres/restoration/serialize.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mgres::restoration {

using nlohmann::json;

namespace {

json arr3(const std::array<double, 3>& a) { return json::array({a[0], a[1], a[2]}); }

std::array<double, 3> to_arr3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("stage json: expected 3-array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

json stage_to_json(const RestorationStage& st) {
  json j;
  j["stage"] = st.stage;
  j["mg_id"] = st.mg_id;
  j["objective"] = st.objective;
  j["restored_kw"] = st.restored_kw;
  j["restored_kvar"] = st.restored_kvar;
  json buses = json::object();
  for (const auto& [id, s] : st.status.bus) {
    json b;
    b["status"] = s;
    b["u"] = arr3(st.voltage_sq.at(id));
    buses[id] = std::move(b);
  }
  j["bus"] = std::move(buses);
  json lines = json::object();
  for (const auto& [id, s] : st.status.line) {
    json l;
    l["status"] = s;
    l["p"] = arr3(st.flow_p.at(id));
    l["q"] = arr3(st.flow_q.at(id));
    lines[id] = std::move(l);
  }
  j["line"] = std::move(lines);
  json gens = json::object();
  for (const auto& [id, p] : st.gen_p) {
    json g;
    auto it = st.status.gen.find(id);
    g["status"] = it == st.status.gen.end() ? 1 : it->second;  // forming units are always on
    g["p"] = arr3(p);
    g["q"] = arr3(st.gen_q.at(id));
    gens[id] = std::move(g);
  }
  j["gen"] = std::move(gens);
  json loads = json::object();
  for (const auto& [id, s] : st.status.load) loads[id] = s;
  j["load"] = std::move(loads);
  json blocks = json::object();
  for (const auto& [id, s] : st.status.block) blocks[std::to_string(id)] = s;
  j["block"] = std::move(blocks);
  json mls = json::object();
  for (const auto& [id, v] : st.mls) mls[id] = v;
  j["mls"] = std::move(mls);
  return j;
}

RestorationStage stage_from_json(const json& j) {
  RestorationStage st;
  st.stage = j.at("stage").get<int>();
  st.mg_id = j.at("mg_id").get<int>();
  st.objective = j.at("objective").get<double>();
  st.restored_kw = j.at("restored_kw").get<double>();
  st.restored_kvar = j.at("restored_kvar").get<double>();
  for (const auto& [id, b] : j.at("bus").items()) {
    st.status.bus[id] = b.at("status").get<int>();
    st.voltage_sq[id] = to_arr3(b.at("u"));
  }
  for (const auto& [id, l] : j.at("line").items()) {
    st.status.line[id] = l.at("status").get<int>();
    st.flow_p[id] = to_arr3(l.at("p"));
    st.flow_q[id] = to_arr3(l.at("q"));
  }
  for (const auto& [id, g] : j.at("gen").items()) {
    st.gen_p[id] = to_arr3(g.at("p"));
    st.gen_q[id] = to_arr3(g.at("q"));
    st.status.gen[id] = g.at("status").get<int>();
  }
  for (const auto& [id, s] : j.at("load").items()) st.status.load[id] = s.get<int>();
  for (const auto& [id, s] : j.at("block").items()) st.status.block[std::stoi(id)] = s.get<int>();
  for (const auto& [id, v] : j.at("mls").items()) st.mls[id] = v.get<double>();
  return st;
}

std::string stages_to_csv(const std::vector<RestorationStage>& stages) {
  std::ostringstream os;
  os << "stage,mg_id,kind,id,status,a1,a2,a3,b1,b2,b3\n";
  auto row = [&](int stage, int mg, const char* kind, const std::string& id, int status,
                 const std::array<double, 3>& a, const std::array<double, 3>& b) {
    os << stage << ',' << mg << ',' << kind << ',' << id << ',' << status;
    for (double v : a) os << ',' << num(v);
    for (double v : b) os << ',' << num(v);
    os << '\n';
  };
  const std::array<double, 3> zero{};
  for (const RestorationStage& st : stages) {
    for (const auto& [id, s] : st.status.bus) row(st.stage, st.mg_id, "bus", id, s, st.voltage_sq.at(id), zero);
    for (const auto& [id, s] : st.status.line)
      row(st.stage, st.mg_id, "line", id, s, st.flow_p.at(id), st.flow_q.at(id));
    for (const auto& [id, p] : st.gen_p) {
      auto it = st.status.gen.find(id);
      row(st.stage, st.mg_id, "gen", id, it == st.status.gen.end() ? 1 : it->second, p, st.gen_q.at(id));
    }
    for (const auto& [id, s] : st.status.load) row(st.stage, st.mg_id, "load", id, s, zero, zero);
    for (const auto& [id, s] : st.status.block)
      row(st.stage, st.mg_id, "block", std::to_string(id), s, zero, zero);
    for (const auto& [id, v] : st.mls)
      row(st.stage, st.mg_id, "mls", id, 1, {v, 0.0, 0.0}, zero);
  }
  return os.str();
}

std::vector<RestorationStage> stages_from_csv(const std::string& csv) {
  std::vector<RestorationStage> out;
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("stages csv: empty");
  if (line != "stage,mg_id,kind,id,status,a1,a2,a3,b1,b2,b3")
    throw std::invalid_argument("stages csv: unexpected header");
  auto find_stage = [&](int stage, int mg) -> RestorationStage& {
    for (RestorationStage& s : out)
      if (s.stage == stage && s.mg_id == mg) return s;
    RestorationStage s;
    s.stage = stage;
    s.mg_id = mg;
    out.push_back(std::move(s));
    return out.back();
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> f;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    if (f.size() != 11) throw std::invalid_argument("stages csv: malformed row '" + line + "'");
    RestorationStage& st = find_stage(std::stoi(f[0]), std::stoi(f[1]));
    const std::string& kind = f[2];
    const std::string& id = f[3];
    int status = std::stoi(f[4]);
    std::array<double, 3> a{std::stod(f[5]), std::stod(f[6]), std::stod(f[7])};
    std::array<double, 3> b{std::stod(f[8]), std::stod(f[9]), std::stod(f[10])};
    if (kind == "bus") {
      st.status.bus[id] = status;
      st.voltage_sq[id] = a;
    } else if (kind == "line") {
      st.status.line[id] = status;
      st.flow_p[id] = a;
      st.flow_q[id] = b;
    } else if (kind == "gen") {
      st.status.gen[id] = status;
      st.gen_p[id] = a;
      st.gen_q[id] = b;
    } else if (kind == "load") {
      st.status.load[id] = status;
    } else if (kind == "block") {
      st.status.block[std::stoi(id)] = status;
    } else if (kind == "mls") {
      st.mls[id] = a[0];
    } else {
      throw std::invalid_argument("stages csv: unknown kind '" + kind + "'");
    }
  }
  return out;
}

}  // namespace mgres::restoration
