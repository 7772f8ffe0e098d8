#include <string>
#include <vector>

#include "doctest.h"
#include "eeschematic/netlist.hpp"

namespace {

using namespace eeschematic;

const Net& net_of(const Circuit& c, const std::string& name) {
  const Net* n = c.net(name);
  REQUIRE(n != nullptr);
  return *n;
}

ErrorCode code_of(const std::string& text) {
  try {
    parse_netlist(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected parse error");
  return ErrorCode::SyntaxError;
}

}  // namespace

TEST_CASE("parse_netlist reads the two-transistor inverter") {
  Circuit c = parse_netlist(
      "* two-transistor inverting stage\n"
      "M1 OUT IN VDD VDD PMOS W=2u L=180n\n"
      "M2 OUT IN GND GND NMOS W=1u L=180n\n"
      ".io IN OUT\n"
      ".end\n");

  REQUIRE(c.devices.size() == 2);
  CHECK(c.devices[0].name == "M1");
  CHECK(c.devices[0].kind == DeviceKind::PMOS);
  CHECK(c.devices[1].kind == DeviceKind::NMOS);
  CHECK(*c.devices[0].net_of(TerminalRole::DRAIN) == "OUT");
  CHECK(*c.devices[0].net_of(TerminalRole::GATE) == "IN");
  CHECK(*c.devices[0].net_of(TerminalRole::SOURCE) == "VDD");
  CHECK(*c.devices[0].net_of(TerminalRole::BULK) == "VDD");
  CHECK(*c.devices[0].param("W") == "2u");
  CHECK(*c.devices[1].param("L") == "180n");

  CHECK(c.io_ports == std::vector<std::string>{"IN", "OUT"});
  CHECK(net_of(c, "VDD").klass == NetClass::POWER);
  CHECK(net_of(c, "GND").klass == NetClass::GROUND);
  CHECK(net_of(c, "IN").klass == NetClass::IO);
  CHECK(net_of(c, "OUT").klass == NetClass::IO);
}

TEST_CASE("io ports inject PIN terminals on non-rail nets") {
  Circuit c = parse_netlist(
      "M1 OUT IN GND GND NMOS\n"
      ".io IN OUT VDD\n"
      ".end\n");

  CHECK(net_of(c, "IN").terminals.count({"PORT_IN", TerminalRole::PIN}) == 1);
  CHECK(net_of(c, "OUT").terminals.count({"PORT_OUT", TerminalRole::PIN}) == 1);
  // Rail names never grow pins, even when listed as ports.
  const Net& vdd = net_of(c, "VDD");
  CHECK(vdd.klass == NetClass::POWER);
  for (const auto& [dev, role] : vdd.terminals) CHECK(role != TerminalRole::PIN);
}

TEST_CASE("continuation lines merge into one card") {
  Circuit c = parse_netlist(
      "M1 OUT IN\n"
      "+ GND GND\n"
      "+ NMOS W=1u\n"
      ".end\n");
  REQUIRE(c.devices.size() == 1);
  CHECK(c.devices[0].terminals.size() == 4);
  CHECK(*c.devices[0].param("W") == "1u");
}

TEST_CASE("comments and blank lines are skipped") {
  Circuit c = parse_netlist(
      "\n"
      "* header comment\n"
      "R1 A B 10k ; trailing comment\n"
      "   * indented comment\n"
      ".end\n");
  REQUIRE(c.devices.size() == 1);
  CHECK(c.devices[0].kind == DeviceKind::RESISTOR);
  CHECK(*c.devices[0].param("VALUE") == "10k");
}

TEST_CASE("identifiers are normalized to upper case") {
  Circuit c = parse_netlist("m1 out in gnd gnd nmos\n.io in out\n.end\n");
  CHECK(c.devices[0].name == "M1");
  CHECK(*c.devices[0].net_of(TerminalRole::DRAIN) == "OUT");
  CHECK(c.io_ports == std::vector<std::string>{"IN", "OUT"});
}

TEST_CASE("two-terminal cards carry a bare value and sources parse") {
  Circuit c = parse_netlist(
      "R1 A B 10k\n"
      "C1 B GND 1p\n"
      "V1 VDD GND 1.8\n"
      "I1 VDD A 10u\n"
      ".end\n");
  REQUIRE(c.devices.size() == 4);
  CHECK(c.devices[1].kind == DeviceKind::CAPACITOR);
  CHECK(c.devices[2].kind == DeviceKind::VSOURCE);
  CHECK(c.devices[3].kind == DeviceKind::ISOURCE);
  CHECK(*c.devices[2].net_of(TerminalRole::POS) == "VDD");
  CHECK(*c.devices[2].net_of(TerminalRole::NEG) == "GND");
  CHECK(*c.devices[3].param("VALUE") == "10u");
}

TEST_CASE("cards after .end are ignored") {
  Circuit c = parse_netlist(
      "R1 A B 10k\n"
      ".end\n"
      "R2 C D 20k\n");
  CHECK(c.devices.size() == 1);
}

TEST_CASE("parse errors carry codes and positions") {
  CHECK(code_of("") == ErrorCode::EmptyNetlist);
  CHECK(code_of("* only comments\n.end\n") == ErrorCode::EmptyNetlist);
  CHECK(code_of("M1 A B C D NMOS\nM1 A B C D NMOS\n.end\n") ==
        ErrorCode::DuplicateDevice);
  CHECK(code_of("M1 A B C NMOS\n.end\n") == ErrorCode::ArityError);
  CHECK(code_of("R1 A B C D\n.end\n") == ErrorCode::SyntaxError);
  CHECK(code_of("M1 A B C D\n.end\n") == ErrorCode::SyntaxError);  // no model
  CHECK(code_of("M1 A B C D FINFET\n.end\n") == ErrorCode::SyntaxError);
  CHECK(code_of("Q1 A B C\n.end\n") == ErrorCode::SyntaxError);
  CHECK(code_of("R1 A B W= \n.end\n") == ErrorCode::SyntaxError);
  CHECK(code_of("R1 A W=1u B\n.end\n") == ErrorCode::SyntaxError);
  CHECK(code_of("M1 A B C D NMOS W=1u W=2u\n.end\n") == ErrorCode::SyntaxError);
  CHECK(code_of("+ M1 A B C D NMOS\n.end\n") == ErrorCode::SyntaxError);

  try {
    parse_netlist("R1 A B 10k\nM1 A B C D\n.end\n");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.line() == 2);
    CHECK(e.col() >= 1);
    std::string diag = e.diagnostic("x.sp");
    CHECK(diag.find("x.sp:2:") == 0);
    CHECK(diag.find("SyntaxError") != std::string::npos);
  }
}

TEST_CASE("unknown dot-cards and duplicate ports produce warnings") {
  std::vector<Diagnostic> warnings;
  Circuit c = parse_netlist(
      ".param foo=1\n"
      "R1 A B 10k\n"
      ".io A A\n"
      ".end\n",
      &warnings);
  REQUIRE(warnings.size() == 2);
  CHECK(warnings[0].code == "unknown-card");
  CHECK(warnings[0].line == 1);
  CHECK(warnings[1].code == "duplicate-io");
  CHECK(c.io_ports == std::vector<std::string>{"A"});
}

TEST_CASE("write_netlist round-trips structurally") {
  const char* sources[] = {
      "M1 OUT IN VDD VDD PMOS W=2u L=180n\nM2 OUT IN GND GND NMOS\n"
      ".io IN OUT\n.end\n",
      "R1 A B 10k\nC1 B GND 1p\nV1 VDD GND 1.8\nI1 VDD A 10u\n.end\n",
      "M1 N1 INP TAIL GND NMOS W=4u L=360n\nM2 OUT INN TAIL GND NMOS\n"
      "M5 TAIL VBIAS GND GND NMOS\n.io INP INN OUT VBIAS\n.end\n",
  };
  for (const char* src : sources) {
    Circuit c = parse_netlist(src);
    Circuit again = parse_netlist(write_netlist(c));
    CHECK(again == c);
  }
}

TEST_CASE("net_groups mirrors the per-net terminal sets") {
  Circuit c = parse_netlist("M1 OUT IN GND GND NMOS\n.io IN OUT\n.end\n");
  auto groups = net_groups(c);
  CHECK(groups.at("GND").size() == 2);  // source + bulk
  CHECK(groups.at("OUT").count({"M1", TerminalRole::DRAIN}) == 1);
  CHECK(groups.at("OUT").count({"PORT_OUT", TerminalRole::PIN}) == 1);
}

TEST_CASE("rail aliases classify as supplies") {
  CHECK(is_power_alias("VDD"));
  CHECK(is_power_alias("VCC"));
  CHECK(is_ground_alias("GND"));
  CHECK(is_ground_alias("VSS"));
  CHECK(is_ground_alias("0"));
  CHECK(classify_name("X", false) == NetClass::SIGNAL);
  CHECK(classify_name("X", true) == NetClass::IO);
  CHECK(classify_name("AVDD", true) == NetClass::POWER);
}
