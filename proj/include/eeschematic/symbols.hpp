#pragma once

#include <map>
#include <string>
#include <vector>

#include "eeschematic/geometry.hpp"
#include "eeschematic/netlist.hpp"

namespace eeschematic {

/// Component kinds placeable on the grid: every DeviceKind plus PORT.
enum class SymbolKind { NMOS, PMOS, RESISTOR, CAPACITOR, VSOURCE, ISOURCE, PORT };

const char* symbol_kind_name(SymbolKind k);
SymbolKind symbol_kind_from_name(const std::string& name);  // throws UnknownKind
SymbolKind symbol_kind_of(DeviceKind k);

struct Stroke {
  enum class Shape { Line, Circle, Arc };
  Shape shape;
  // Line: x1 y1 x2 y2. Circle: cx cy r. Arc: cx cy r startDeg endDeg.
  std::vector<double> v;
};

struct SymbolDef {
  SymbolKind kind;
  int width = 0;
  int height = 0;
  std::vector<Stroke> strokes;                    // symbol-local units
  std::map<TerminalRole, Point> anchors;          // on the box boundary
};

/// The frozen symbol table, parsed once from the versioned data file that is
/// embedded at build time. Throws AssetCorrupt if the data fails validation.
const std::map<SymbolKind, SymbolDef>& symbol_table();

const SymbolDef& symbol_def(SymbolKind k);  // throws UnknownKind

/// Oriented bounding box of a symbol anchored at `pos`.
Rect symbol_box(SymbolKind k, Point pos, Orientation o);

/// Absolute grid coordinate of a terminal anchor.
Point anchor_point(SymbolKind k, Point pos, Orientation o, TerminalRole role);

}  // namespace eeschematic
