#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eeschematic/geometry.hpp"
#include "eeschematic/netlist.hpp"
#include "eeschematic/symbols.hpp"

namespace eeschematic {

/// I/O pins are placed as PORT components with id "PORT_<net>".
std::string port_component_id(const std::string& net);
std::optional<std::string> port_net_of(const std::string& component_id);

struct PlacedComponent {
  std::string id;
  SymbolKind kind;
  Point pos;  // symbol-box top-left, grid units
  Orientation orient;

  Rect box() const { return symbol_box(kind, pos, orient); }

  friend bool operator==(const PlacedComponent&, const PlacedComponent&) = default;
};

struct WirePolyline {
  std::string net;
  std::vector<Point> points;  // rectilinear, length >= 2

  friend bool operator==(const WirePolyline&, const WirePolyline&) = default;
};

struct Label {
  std::string net;
  Point pos;

  friend bool operator==(const Label&, const Label&) = default;
};

struct SchematicLayout {
  int grid_width = 64;
  int grid_height = 64;
  std::vector<PlacedComponent> components;
  std::vector<WirePolyline> wires;
  std::vector<Label> labels;

  const PlacedComponent* component(const std::string& id) const;
  int centerline_x() const { return grid_width / 2; }

  friend bool operator==(const SchematicLayout&, const SchematicLayout&) = default;
};

struct Violation {
  enum class Kind {
    Overlap,        // two component boxes intersect
    OutOfBounds,    // box or wire point outside the grid
    UnknownDevice,  // component id not in the circuit / kind mismatch
    UnknownNet,     // wire or label net not in the circuit
    DuplicateId,    // two components share an id
    WireShape,      // non-rectilinear or degenerate polyline
  };
  Kind kind;
  std::string subject;  // component id or net name
  std::string message;
};

const char* violation_kind_name(Violation::Kind k);

/// Structural validation; all violations are returned as data. The circuit
/// cross-checks (UnknownDevice/UnknownNet) run only when `c` is non-null.
std::vector<Violation> validate_layout(const SchematicLayout& l,
                                       const Circuit* c = nullptr);

inline std::vector<Violation> validate_layout(const SchematicLayout& l,
                                              const Circuit& c) {
  return validate_layout(l, &c);
}

/// Canonical JSON: two-space indent, keys ordered grid/components/wires/labels,
/// components sorted by id. write_layout(read_layout(x)) is byte-stable.
std::string write_layout(const SchematicLayout& l);

/// Strict on required fields and types (SchemaError with a JSON-pointer-style
/// path); tolerant of unknown extra fields, which are reported as warnings.
SchematicLayout read_layout(const std::string& json_text,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace eeschematic
