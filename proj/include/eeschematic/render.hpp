#pragma once

#include <set>
#include <string>
#include <vector>

#include "eeschematic/layout.hpp"
#include "eeschematic/wiring.hpp"

namespace eeschematic {

struct RenderOptions {
  int unit_px = 12;  // pixels per grid unit, >= 4
  bool show_labels = true;
  bool show_grid = false;
  std::set<std::string> highlight;  // component ids in accent color
};

/// Deterministic SVG 1.1 text for a layout. Every component renders as a
/// <g id="..."> group; terminal anchors carry
/// data-terminal="device:role:x:y" metadata (grid coordinates); junction
/// dots follow the wiring module's T-rule; structural violations are drawn
/// with warning styling. Byte-identical output for identical inputs.
std::string render_svg(const SchematicLayout& l, const RenderOptions& opts = {});

/// Pure anchor geometry for every component terminal of the layout. The net
/// field is resolved only for PORT components; pair with the circuit via
/// wiring's terminal_points when net binding matters.
std::vector<TerminalPoint> terminal_positions(const SchematicLayout& l);

}  // namespace eeschematic
