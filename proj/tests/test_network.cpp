#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "mgres/feeder_io.hpp"
#include "mgres/network.hpp"

using namespace mgres;

namespace {

std::string toy3_doc(bool bad_phase_load = false) {
  // 3 buses in a chain, both lines switchable, one forming DG at b1.
  std::string load_phases = bad_phase_load ? "c" : "a";
  std::string load_p = bad_phase_load ? "[0, 0, 20]" : "[20, 0, 0]";
  return std::string(R"({
  "base": {"kv": 4.16, "mva": 1.0},
  "buses": [
    {"id": "b1", "phases": "abc", "v_min": 0.95, "v_max": 1.05},
    {"id": "b2", "phases": "ab",  "v_min": 0.95, "v_max": 1.05},
    {"id": "b3", "phases": "abc", "v_min": 0.95, "v_max": 1.05}
  ],
  "lines": [
    {"id": "l12", "from": "b1", "to": "b2", "phases": "ab", "switchable": true,
     "impedance_ohm": [[[0.1,0.2],[0.01,0.03],[0,0]],[[0.01,0.03],[0.1,0.2],[0,0]],[[0,0],[0,0],[0,0]]],
     "p_max_kw": 500, "q_max_kvar": 300},
    {"id": "l13", "from": "b1", "to": "b3", "phases": "abc", "switchable": true,
     "impedance_ohm": [[[0.1,0.2],[0,0],[0,0]],[[0,0],[0.1,0.2],[0,0]],[[0,0],[0,0],[0.1,0.2]]],
     "p_max_kw": 500, "q_max_kvar": 300}
  ],
  "loads": [
    {"id": "d2", "bus": "b2", "phases": ")") + load_phases + R"(", "p_kw": )" + load_p +
         R"(, "q_kvar": [0, 0, 0], "switchable": true, "priority": 1.0},
    {"id": "d3", "bus": "b3", "phases": "abc", "p_kw": [10, 10, 10], "q_kvar": [2, 2, 2],
     "switchable": true, "priority": 1.0}
  ],
  "generators": [
    {"id": "g1", "bus": "b1", "kind": "grid_forming", "phases": "abc",
     "p_max_kw": [100, 100, 100], "q_max_kvar": [50, 50, 50]}
  ],
  "faults": []
})";
}

NetworkModel chain6(bool middle_switchable) {
  NetworkModel net;
  net.base = {4.16, 1.0};
  for (int i = 1; i <= 6; ++i) {
    Bus b;
    b.id = "n" + std::to_string(i);
    b.phases = PhaseSet::abc();
    net.buses.push_back(b);
  }
  for (int i = 1; i <= 5; ++i) {
    Line l;
    l.id = "e" + std::to_string(i);
    l.from_bus = "n" + std::to_string(i);
    l.to_bus = "n" + std::to_string(i + 1);
    l.phases = PhaseSet::abc();
    l.switchable = middle_switchable && i == 3;
    net.lines.push_back(l);
  }
  net.validate();
  return net;
}

}  // namespace

TEST_CASE("parse_feeder round-trips the toy document") {
  NetworkModel net = parse_feeder(toy3_doc());
  CHECK(net.buses.size() == 3);
  CHECK(net.lines.size() == 2);
  CHECK(net.loads.size() == 2);
  CHECK(net.generators.size() == 1);
  CHECK(net.lines[0].switchable);
  CHECK(net.lines[1].switchable);
  CHECK_FALSE(net.lines[0].faulted);
  // per-unit: 20 kW on a 1 MVA base
  CHECK(net.loads[0].p[0] == doctest::Approx(0.02));
  // impedance in pu on 4.16 kV / 1 MVA: z_base = 17.3056 ohm
  CHECK(net.lines[0].impedance(0, 0).real() == doctest::Approx(0.1 / 17.3056));
  // squared voltage bounds
  CHECK(net.buses[0].v_min_sq == doctest::Approx(0.9025));
  CHECK(net.buses[0].v_max_sq == doctest::Approx(1.1025));
}

TEST_CASE("parse_feeder rejects a load on an absent phase") {
  CHECK_THROWS_WITH_AS(parse_feeder(toy3_doc(true)),
                       doctest::Contains("phase absent"), std::invalid_argument);
}

TEST_CASE("parse_feeder rejects schema violations") {
  CHECK_THROWS_AS(parse_feeder("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_feeder("{}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_feeder(R"({"base": {"kv": 4.16}, "buses": [], "lines": [],
                                   "loads": [], "generators": []})"),
                  std::invalid_argument);
}

TEST_CASE("bus blocks: all switchable lines give one block per bus") {
  NetworkModel net = parse_feeder(toy3_doc());
  auto blocks = compute_bus_blocks(net);
  CHECK(blocks.size() == 3);
  for (const auto& b : blocks) CHECK(b.buses.size() == 1);
  // block ids ordered by smallest contained bus id
  CHECK(blocks[0].buses[0] == "b1");
  CHECK(blocks[1].buses[0] == "b2");
  CHECK(blocks[2].buses[0] == "b3");
}

TEST_CASE("bus blocks: connected non-switchable graph is a single block") {
  NetworkModel net = chain6(false);
  auto blocks = compute_bus_blocks(net);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].buses.size() == 6);
}

TEST_CASE("bus blocks: 6-bus chain with switchable middle line") {
  NetworkModel net = chain6(true);
  auto blocks = compute_bus_blocks(net);
  // Hand-run union-find: e1,e2 join {n1,n2,n3}; e4,e5 join {n4,n5,n6}; e3 is a switch.
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].buses == std::vector<std::string>{"n1", "n2", "n3"});
  CHECK(blocks[1].buses == std::vector<std::string>{"n4", "n5", "n6"});
  CHECK(blocks[0].incident_switchable_lines == std::vector<std::string>{"e3"});
  CHECK(blocks[1].incident_switchable_lines == std::vector<std::string>{"e3"});
}

TEST_CASE("bus blocks are stable under reordering of the document") {
  NetworkModel net = chain6(true);
  NetworkModel shuffled = net;
  std::mt19937_64 rng(11);
  std::shuffle(shuffled.buses.begin(), shuffled.buses.end(), rng);
  std::shuffle(shuffled.lines.begin(), shuffled.lines.end(), rng);
  shuffled.validate();
  auto a = compute_bus_blocks(net);
  auto b = compute_bus_blocks(shuffled);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].buses == b[i].buses);
}

TEST_CASE("apply_faults marks lines and is idempotent") {
  NetworkModel net = chain6(false);
  auto f1 = apply_faults(net, {"e2"});
  CHECK(f1.line("e2").faulted);
  CHECK_FALSE(net.line("e2").faulted);
  auto f2 = apply_faults(f1, {"e2"});
  CHECK(f2.line("e2").faulted);
  CHECK(f2.lines.size() == f1.lines.size());

  auto same = apply_faults(net, {});
  for (const auto& l : same.lines) CHECK_FALSE(l.faulted);

  CHECK_THROWS_AS(apply_faults(net, {"nope"}), std::invalid_argument);
}

TEST_CASE("fault every line isolates every bus") {
  NetworkModel net = chain6(false);
  std::vector<std::string> all;
  for (const auto& l : net.lines) all.push_back(l.id);
  auto f = apply_faults(net, all);
  auto part = partition_microgrids(f);
  CHECK(part.microgrids.empty());
  CHECK(part.unrestorable_islands.size() == 6);
}

TEST_CASE("partition: single island with one forming DG") {
  NetworkModel net = chain6(true);
  Generator g;
  g.id = "gf";
  g.bus = "n1";
  g.kind = GeneratorKind::GridForming;
  g.phases = PhaseSet::abc();
  g.p_max = {0.1, 0.1, 0.1};
  g.q_max = {0.05, 0.05, 0.05};
  net.generators.push_back(g);
  net.validate();
  auto part = partition_microgrids(net);
  REQUIRE(part.microgrids.size() == 1);
  CHECK(part.microgrids[0].buses.size() == 6);
  CHECK(part.microgrids[0].forming_generators == std::vector<std::string>{"gf"});
  CHECK(part.unrestorable_islands.empty());

  // Fault the middle switch: the far half has no forming DG.
  auto faulted = apply_faults(net, {"e3"});
  auto part2 = partition_microgrids(faulted);
  REQUIRE(part2.microgrids.size() == 1);
  CHECK(part2.microgrids[0].buses == std::vector<std::string>{"n1", "n2", "n3"});
  REQUIRE(part2.unrestorable_islands.size() == 1);
  CHECK(part2.unrestorable_islands[0] == std::vector<std::string>{"n4", "n5", "n6"});
}

TEST_CASE("equivalent impedance: diagonal real matrix is unchanged") {
  Mat3cd z = Mat3cd::Zero();
  z(0, 0) = z(1, 1) = z(2, 2) = std::complex<double>(0.3, 0.0);
  auto [r, x] = equivalent_impedance(z);
  for (int i = 0; i < 3; ++i) CHECK(r(i, i) == doctest::Approx(0.3));
  CHECK(x.cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("equivalent impedance: off-diagonal phase rotation") {
  Mat3cd z = Mat3cd::Zero();
  z(0, 1) = std::complex<double>(0.1, 0.2);
  auto [r, x] = equivalent_impedance(z);
  CHECK(r(0, 1) == doctest::Approx(-0.2232).epsilon(1e-3));
  CHECK(x(0, 1) == doctest::Approx(-0.0134).epsilon(2e-2));
}

TEST_CASE("equivalent impedance: zero maps to zero and is linear") {
  auto [r0, x0] = equivalent_impedance(Mat3cd::Zero());
  CHECK(r0.cwiseAbs().maxCoeff() == 0.0);
  CHECK(x0.cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Mat3cd a, b;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a(i, j) = std::complex<double>(d(rng), d(rng));
        b(i, j) = std::complex<double>(d(rng), d(rng));
      }
    auto [ra, xa] = equivalent_impedance(a);
    auto [rb, xb] = equivalent_impedance(b);
    auto [rs, xs] = equivalent_impedance(a + b);
    CHECK((rs - (ra + rb)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((xs - (xa + xb)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("equivalent impedance symmetry on random symmetric z") {
  // The phase-shift matrix a a^H is Hermitian, so a real symmetric z yields a
  // Hermitian z-hat: symmetric real part, antisymmetric imaginary part.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Mat3cd z;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        z(i, j) = std::complex<double>(d(rng), 0.0);
        z(j, i) = z(i, j);
      }
    auto [r, x] = equivalent_impedance(z);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(r(i, j) == doctest::Approx(r(j, i)).epsilon(1e-12));
        if (i != j) CHECK(x(i, j) == doctest::Approx(-x(j, i)).epsilon(1e-12));
      }
  }
}
