#pragma once

#include "eeschematic/layout.hpp"
#include "eeschematic/substructure.hpp"

namespace eeschematic {

/// Deterministic initial placement on the default 64x64 grid.
///
/// Devices are stacked into horizontal bands by supply proximity: PMOS
/// chains grow down from the power rail, NMOS chains grow up from ground,
/// two-terminal devices and unchained MOS sit in a middle band.
/// DIFFERENTIAL_PAIR and CURRENT_MIRROR members share a row and are placed
/// mirror-symmetric about the vertical centerline (x_left + x_right =
/// 2 * centerline_x, right member mirrored). I/O pins become PORT
/// components on the left (gate-driven nets) or right margin.
///
/// Output has empty wires and passes validate_layout with zero violations.
/// Throws PlacementOverflow when the circuit cannot fit the grid bounds.
SchematicLayout initial_place(const Circuit& c,
                              const std::vector<SubstructureMatch>& matches);

}  // namespace eeschematic
