#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "eeschematic/netlist.hpp"
#include "eeschematic/substructure.hpp"
#include "oracles.hpp"

namespace {

using namespace eeschematic;

std::set<SubstructureKind> kinds_of(const std::vector<SubstructureMatch>& ms) {
  std::set<SubstructureKind> out;
  for (const auto& m : ms) out.insert(m.kind);
  return out;
}

const SubstructureMatch& match_of(const std::vector<SubstructureMatch>& ms,
                                  SubstructureKind k) {
  for (const auto& m : ms)
    if (m.kind == k) return m;
  REQUIRE(false);
  return ms.front();
}

}  // namespace

TEST_CASE("predicate: differential pair needs a floating shared source") {
  Circuit c = parse_netlist(
      "M1 O1 I1 TAIL GND NMOS\n"
      "M2 O2 I2 TAIL GND NMOS\n"
      "M3 O1 I1 GND GND NMOS\n"
      "M4 O2 I2 GND GND NMOS\n"
      ".end\n");
  CHECK(is_differential_pair(c, "M1", "M2"));
  CHECK(is_differential_pair(c, "M2", "M1"));
  CHECK_FALSE(is_differential_pair(c, "M3", "M4"));  // source is a rail
  CHECK_FALSE(is_differential_pair(c, "M1", "M3"));  // different sources
  CHECK_FALSE(is_differential_pair(c, "M1", "M1"));
}

TEST_CASE("predicate: differential pair rejects tied gates or drains") {
  Circuit c = parse_netlist(
      "M1 O1 IN TAIL GND NMOS\n"
      "M2 O2 IN TAIL GND NMOS\n"
      "M3 O3 I3 TAIL GND NMOS\n"
      "M4 O3 I4 TAIL GND NMOS\n"
      ".end\n");
  CHECK_FALSE(is_differential_pair(c, "M1", "M2"));  // same gate
  CHECK_FALSE(is_differential_pair(c, "M3", "M4"));  // same drain
}

TEST_CASE("predicate: current mirror needs a diode-connected leg") {
  Circuit c = parse_netlist(
      "M1 B B GND GND NMOS\n"
      "M2 OUT B GND GND NMOS\n"
      "M3 X B2 GND GND NMOS\n"
      "M4 Y B2 GND GND NMOS\n"
      ".end\n");
  CHECK(is_diode_connected(c, "M1"));
  CHECK_FALSE(is_diode_connected(c, "M2"));
  CHECK(is_current_mirror(c, "M1", "M2"));
  CHECK(is_current_mirror(c, "M2", "M1"));
  CHECK_FALSE(is_current_mirror(c, "M3", "M4"));  // no diode leg
}

TEST_CASE("predicate: cascode stack is series through a floating node") {
  Circuit c = parse_netlist(
      "M1 MID IN GND GND NMOS\n"
      "M2 OUT VB MID GND NMOS\n"
      "M3 OUT2 VB VDD VDD PMOS\n"
      "M4 VDD IN2 OUT2 VDD PMOS\n"
      ".end\n");
  CHECK(is_two_transistor_cascode(c, "M1", "M2"));
  CHECK_FALSE(is_two_transistor_cascode(c, "M2", "M1"));
  // M3 drain (OUT2) feeds M4 source, but M4 drain is a rail; still a stack.
  CHECK(is_two_transistor_cascode(c, "M3", "M4"));
  CHECK_FALSE(is_two_transistor_cascode(c, "M1", "M3"));  // kinds differ
}

TEST_CASE("predicate: single current source needs a dedicated bias") {
  Circuit c = parse_netlist(
      "M1 OUT VB GND GND NMOS\n"
      "M2 OUT2 VB2 X GND NMOS\n"
      "M3 OUT3 VB3 GND GND NMOS\n"
      "M4 OUT4 VB3 GND GND NMOS\n"
      ".end\n");
  CHECK(is_single_current_source(c, "M1"));
  CHECK_FALSE(is_single_current_source(c, "M2"));  // source not a rail
  CHECK_FALSE(is_single_current_source(c, "M3"));  // shared bias net
}

TEST_CASE("detect: five-transistor amplifier decomposition") {
  Circuit c = parse_netlist(
      "M1 N1 INP TAIL GND NMOS W=4u L=360n\n"
      "M2 OUT INN TAIL GND NMOS W=4u L=360n\n"
      "M3 N1 N1 VDD VDD PMOS W=8u L=360n\n"
      "M4 OUT N1 VDD VDD PMOS W=8u L=360n\n"
      "M5 TAIL VBIAS GND GND NMOS W=2u L=720n\n"
      ".io INP INN OUT VBIAS\n"
      ".end\n");
  auto ms = detect(c);
  REQUIRE(ms.size() == 3);
  CHECK(kinds_of(ms) ==
        std::set<SubstructureKind>{SubstructureKind::DIFFERENTIAL_PAIR,
                                   SubstructureKind::CURRENT_MIRROR,
                                   SubstructureKind::SINGLE_CURRENT_SOURCE});

  const auto& pair = match_of(ms, SubstructureKind::DIFFERENTIAL_PAIR);
  CHECK(pair.members[0] ==
        std::pair<std::string, MemberRole>{"M1", MemberRole::LEFT});
  CHECK(pair.members[1] ==
        std::pair<std::string, MemberRole>{"M2", MemberRole::RIGHT});
  CHECK(pair.shared_nets == std::vector<std::string>{"TAIL"});

  const auto& mirror = match_of(ms, SubstructureKind::CURRENT_MIRROR);
  CHECK(mirror.members[0] ==
        std::pair<std::string, MemberRole>{"M3", MemberRole::REFERENCE});
  CHECK(mirror.members[1] ==
        std::pair<std::string, MemberRole>{"M4", MemberRole::OUTPUT});

  const auto& tail = match_of(ms, SubstructureKind::SINGLE_CURRENT_SOURCE);
  CHECK(tail.members[0].first == "M5");
}

TEST_CASE("detect: priority consumes devices top-down") {
  // M1/M2 qualify as both a mirror (shared gate via diode M1) and nothing
  // higher; M1 alone is diode-connected but the mirror claims it first.
  Circuit c = parse_netlist(
      "M1 B B GND GND NMOS\n"
      "M2 OUT B GND GND NMOS\n"
      ".end\n");
  auto ms = detect(c);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].kind == SubstructureKind::CURRENT_MIRROR);
}

TEST_CASE("detect: leftover singles classify by shape") {
  Circuit c = parse_netlist(
      "M1 D1 D1 GND GND NMOS\n"   // diode-connected, no mirror partner
      "M2 OUT VB GND GND NMOS\n"  // rail source, dedicated bias
      "M3 OUT2 VB2 X GND NMOS\n"  // floating source
      ".end\n");
  auto ms = detect(c);
  REQUIRE(ms.size() == 3);
  CHECK(match_of(ms, SubstructureKind::DIODE_CONNECTED).members[0].first ==
        "M1");
  CHECK(match_of(ms, SubstructureKind::SINGLE_CURRENT_SOURCE)
            .members[0]
            .first == "M2");
  CHECK(match_of(ms, SubstructureKind::SINGLE_CASCODE).members[0].first ==
        "M3");
}

TEST_CASE("detect: non-MOS devices are never members") {
  Circuit c = parse_netlist(
      "M1 OUT VB GND GND NMOS\n"
      "R1 OUT VDD 10k\n"
      "C1 OUT GND 1p\n"
      ".end\n");
  auto ms = detect(c);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].members[0].first == "M1");
}

TEST_CASE("detect: matches are sorted by priority then first member") {
  Circuit c = parse_netlist(
      "M1 O1 I1 TAIL GND NMOS\n"
      "M2 O2 I2 TAIL GND NMOS\n"
      "M3 B B VDD VDD PMOS\n"
      "M4 O3 B VDD VDD PMOS\n"
      "M5 TAIL VB GND GND NMOS\n"
      ".end\n");
  auto ms = detect(c);
  REQUIRE(ms.size() == 3);
  CHECK(ms[0].kind == SubstructureKind::DIFFERENTIAL_PAIR);
  CHECK(ms[1].kind == SubstructureKind::CURRENT_MIRROR);
  CHECK(ms[2].kind == SubstructureKind::SINGLE_CURRENT_SOURCE);
}

TEST_CASE("property: every emitted match satisfies its oracle predicate") {
  std::mt19937_64 rng(0x5eed5u);
  for (int trial = 0; trial < 300; ++trial) {
    Circuit c = parse_netlist(oracle::random_circuit_text(rng));
    std::set<std::string> consumed;
    for (const auto& m : detect(c)) {
      for (const auto& [name, role] : m.members) {
        CAPTURE(trial);
        CAPTURE(name);
        CHECK(consumed.insert(name).second);  // disjoint membership
      }
      const Device* a = c.device(m.members[0].first);
      REQUIRE(a != nullptr);
      switch (m.kind) {
        case SubstructureKind::DIFFERENTIAL_PAIR:
          CHECK(oracle::diff_pair(c, *a, *c.device(m.members[1].first)));
          break;
        case SubstructureKind::CURRENT_MIRROR:
          CHECK(oracle::current_mirror(c, *a, *c.device(m.members[1].first)));
          break;
        case SubstructureKind::TWO_TRANSISTOR_CASCODE:
          CHECK(oracle::cascode_stack(c, *a, *c.device(m.members[1].first)));
          break;
        case SubstructureKind::DIODE_CONNECTED:
          CHECK(oracle::diode_connected(c, *a));
          break;
        case SubstructureKind::SINGLE_CURRENT_SOURCE:
          CHECK(oracle::single_source(c, *a));
          break;
        case SubstructureKind::SINGLE_CASCODE:
          CHECK_FALSE(oracle::diode_connected(c, *a));
          CHECK_FALSE(oracle::single_source(c, *a));
          break;
      }
    }
    // Every MOS device lands in exactly one match.
    size_t mos_count = 0;
    for (const auto& d : c.devices) mos_count += is_mos(d.kind);
    CHECK(consumed.size() == mos_count);
  }
}

TEST_CASE("kind names round-trip") {
  for (int i = 0; i < kSubstructureKindCount; ++i) {
    auto k = SubstructureKind(i);
    CHECK(substructure_kind_from_name(substructure_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(substructure_kind_from_name("FLUX_CAPACITOR"), Error);
}
