#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eeschematic/error.hpp"

namespace eeschematic {

enum class DeviceKind { NMOS, PMOS, RESISTOR, CAPACITOR, VSOURCE, ISOURCE };

enum class TerminalRole { DRAIN, GATE, SOURCE, BULK, POS, NEG, PIN };

enum class NetClass { POWER, GROUND, SIGNAL, IO };

const char* device_kind_name(DeviceKind k);
const char* terminal_role_name(TerminalRole r);
const char* net_class_name(NetClass c);
bool is_mos(DeviceKind k);

/// Roles in declaration order for a device kind: MOS cards are
/// Drain Gate Source Bulk, two-terminal cards are positive then negative.
const std::vector<TerminalRole>& terminal_roles(DeviceKind k);

struct TerminalRef {
  TerminalRole role;
  std::string net;

  friend bool operator==(const TerminalRef&, const TerminalRef&) = default;
};

struct Device {
  std::string name;  // normalized upper case, unique
  DeviceKind kind;
  std::vector<TerminalRef> terminals;              // fixed order per kind
  std::vector<std::pair<std::string, std::string>> params;  // verbatim values

  const std::string* net_of(TerminalRole role) const;
  const std::string* param(const std::string& key) const;

  friend bool operator==(const Device&, const Device&) = default;
};

struct Net {
  std::string name;  // normalized
  NetClass klass = NetClass::SIGNAL;
  /// (device name, terminal role) pairs; PIN entries come from io ports.
  std::set<std::pair<std::string, TerminalRole>> terminals;

  friend bool operator==(const Net&, const Net&) = default;
};

struct Circuit {
  std::vector<Device> devices;
  std::vector<Net> nets;  // sorted by name
  std::vector<std::string> io_ports;  // declaration order
  std::string source_text;

  const Device* device(const std::string& name) const;
  const Net* net(const std::string& name) const;
  Net* net(const std::string& name);
  size_t terminal_count() const;

  /// Structural equality; source_text is diagnostics-only and ignored.
  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.devices == b.devices && a.nets == b.nets &&
           a.io_ports == b.io_ports;
  }
};

/// Parses the SPICE subset: M/R/C/V/I element cards, `*` comment lines,
/// `;` trailing comments, `+` continuations, `.io` port declarations,
/// optional `.end`. Identifiers are normalized to upper case. Unknown
/// dot-cards are skipped with a warning appended to `warnings`.
Circuit parse_netlist(const std::string& text,
                      std::vector<Diagnostic>* warnings = nullptr);

/// Canonical netlist text; parse_netlist(write_netlist(c)) == c.
std::string write_netlist(const Circuit& c);

/// Terminals sharing a net name, grouped per net.
std::map<std::string, std::set<std::pair<std::string, TerminalRole>>>
net_groups(const Circuit& c);

/// Recomputes every net's klass from the power/ground alias tables and the
/// io_ports list. parse_netlist already applies this; the call is idempotent.
Circuit classify_nets(Circuit c);

bool is_power_alias(const std::string& name);
bool is_ground_alias(const std::string& name);
NetClass classify_name(const std::string& name, bool is_io_port);

}  // namespace eeschematic
