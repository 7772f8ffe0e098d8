#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "eeschematic/layout.hpp"
#include "eeschematic/netlist.hpp"

namespace eeschematic {

struct TerminalPoint {
  std::string device;  // component id (device name or PORT_<net>)
  TerminalRole role;
  std::string net;  // empty when not resolvable from the layout alone
  Point point;
};

struct ConnectionTask {
  std::string net;
  std::vector<TerminalPoint> terminals;  // role priority, then device name
  int priority_rank = 0;
};

/// Occupancy model for the router: grid points in [0,w]x[0,h]. Symbol boxes
/// block every covered point except their own terminal anchors; routed wires
/// occupy points with a per-axis direction mask so perpendicular crossings
/// stay distinguishable from lengthwise sharing.
class RoutingGrid {
 public:
  RoutingGrid(int width, int height) : width_(width), height_(height) {}

  /// Grid for a placed layout: obstacles from every component box, anchors
  /// registered per net (nets resolved through the circuit).
  static RoutingGrid from_layout(const Circuit& c, const SchematicLayout& l);

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Point p) const {
    return p.x >= 0 && p.x <= width_ && p.y >= 0 && p.y <= height_;
  }

  void block_box(const Rect& box, const std::vector<Point>& keep_open = {});
  void add_anchor(Point p, const std::string& net);
  void occupy_path(const std::vector<Point>& pts, const std::string& net);

  bool is_obstacle(Point p) const { return obstacles_.count(p) > 0; }
  /// Net owning an anchor at p, or nullptr.
  const std::string* anchor_net(Point p) const;

  struct CellUse {
    std::string horiz_net;  // net running horizontally through p ("" = free)
    std::string vert_net;
  };
  const CellUse* occupancy(Point p) const;

 private:
  int width_;
  int height_;
  std::set<Point> obstacles_;
  std::map<Point, std::string> anchors_;
  std::map<Point, CellUse> occupied_;
};

/// Connection tasks ordered by the wiring priority: POWER nets first, then
/// GROUND, then nets ranked by the highest-priority terminal role they
/// contain (Gate, Drain, Source, Bulk), and finally I/O, resistor, capacitor
/// and other pins. Ties break by net name.
std::vector<ConnectionTask> priority_order(const Circuit& c,
                                           const SchematicLayout& l);

/// Rank of one net under the same rule (0 = POWER ... 6 = IO/R/C/other).
int net_priority_rank(const Circuit& c, const std::string& net);

/// All terminal points of the layout with nets resolved via the circuit.
std::vector<TerminalPoint> terminal_points(const Circuit& c,
                                           const SchematicLayout& l);

/// Routes one net: sequential spanning construction (each terminal joins the
/// nearest already-routed point of its net), uniform-cost search with unit
/// step cost and bend penalty 2, ties horizontal-first then lower y then
/// lower x. Perpendicular crossings of other nets are allowed; lengthwise
/// sharing is not. Updates grid occupancy. Single-terminal tasks get a
/// 2-unit stub toward free space. Returns the routed polylines; terminals
/// the search cannot reach are reported in `unroutable`.
std::vector<WirePolyline> route_net(const ConnectionTask& task,
                                    RoutingGrid& grid,
                                    bool* unroutable = nullptr);

struct ConflictCleanup {
  std::vector<WirePolyline> wires;  // canonical maximal straight segments
  std::vector<std::string> flagged_nets;  // connectivity lost, needs re-route
  int removed_segments = 0;
};

/// Post-processing: deduplicates same-net segments, removes lengthwise
/// overlaps between different nets (the net routed earlier in `wires` keeps
/// its geometry), and rebuilds every net as maximal straight start-end
/// segments. Nets whose own wire graph loses connectivity are flagged.
ConflictCleanup remove_conflicts(const std::vector<WirePolyline>& wires);

struct NetRouteRecord {
  std::string net;
  int rank = 0;
  int length = 0;  // unit edges
  int bends = 0;
  std::vector<std::string> flags;  // "unroutable", "conflict_trimmed", ...
};

struct RoutingReport {
  std::vector<NetRouteRecord> nets;  // routing order

  std::string to_text() const;
  std::string to_json() const;
  bool has_flag(const std::string& flag) const;
};

/// priority_order -> route_net per task -> remove_conflicts.
SchematicLayout wire_layout(const Circuit& c, const SchematicLayout& l,
                            RoutingReport* report = nullptr);

/// Unit-edge decomposition of a polyline (consecutive rectilinear steps).
std::vector<UnitEdge> polyline_edges(const WirePolyline& w);

/// Per-net unit-edge sets for a wire list.
std::map<std::string, std::set<UnitEdge>> net_edges(
    const std::vector<WirePolyline>& wires);

/// Junction dots: points where a net's wire graph has degree >= 3.
std::set<Point> junction_points(const std::vector<WirePolyline>& wires);

}  // namespace eeschematic
