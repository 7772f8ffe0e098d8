#pragma once

// Independent test oracles. Everything here is deliberately re-derived from
// the documented semantics with different data structures than the library
// (flood fill instead of union-find, map-based Dijkstra instead of the
// indexed search, direct terminal lookups instead of the matcher helpers),
// so agreement between the two is evidence rather than tautology.

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "eeschematic/layout.hpp"
#include "eeschematic/netlist.hpp"
#include "eeschematic/wiring.hpp"

namespace oracle {

using eeschematic::Circuit;
using eeschematic::Device;
using eeschematic::Point;
using eeschematic::SchematicLayout;
using eeschematic::TerminalRole;
using eeschematic::WirePolyline;

// ---------------------------------------------------------------------------
// Routing cost

/// Cost of one routed path: unit edges + 2 per direction change.
inline int path_cost(const std::vector<WirePolyline>& wires) {
  int cost = 0;
  for (const auto& w : wires) {
    for (size_t i = 0; i + 1 < w.points.size(); ++i)
      cost += eeschematic::manhattan(w.points[i], w.points[i + 1]);
    for (size_t i = 0; i + 2 < w.points.size(); ++i) {
      bool ab_h = w.points[i].y == w.points[i + 1].y;
      bool bc_h = w.points[i + 1].y == w.points[i + 2].y;
      if (ab_h != bc_h) cost += 2;
    }
  }
  return cost;
}

/// Minimal (steps + 2 * bends) between two points of an empty w x h grid,
/// found by Dijkstra over (point, incoming axis) states. The first move
/// carries no bend penalty and arrival direction is unconstrained.
inline int dijkstra_cost(int grid_w, int grid_h, Point from, Point to) {
  using State = std::tuple<int, int, int>;  // x, y, axis (0 none, 1 h, 2 v)
  std::map<State, int> dist;
  using QE = std::pair<int, State>;
  std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
  dist[{from.x, from.y, 0}] = 0;
  pq.push({0, {from.x, from.y, 0}});
  int best = -1;
  while (!pq.empty()) {
    auto [cost, s] = pq.top();
    pq.pop();
    auto [x, y, axis] = s;
    auto it = dist.find(s);
    if (it != dist.end() && cost > it->second) continue;
    if (x == to.x && y == to.y) {
      best = cost;
      break;
    }
    const int step[4][3] = {{1, 0, 1}, {-1, 0, 1}, {0, 1, 2}, {0, -1, 2}};
    for (const auto& d : step) {
      int nx = x + d[0], ny = y + d[1];
      if (nx < 0 || ny < 0 || nx > grid_w || ny > grid_h) continue;
      int ncost = cost + 1 + (axis != 0 && axis != d[2] ? 2 : 0);
      State ns{nx, ny, d[2]};
      auto found = dist.find(ns);
      if (found != dist.end() && found->second <= ncost) continue;
      dist[ns] = ncost;
      pq.push({ncost, ns});
    }
  }
  return best;
}

/// Closed form for empty grids: manhattan distance plus one bend when the
/// endpoints share neither row nor column.
inline int straight_line_cost(Point a, Point b) {
  int m = eeschematic::manhattan(a, b);
  if (a.x != b.x && a.y != b.y) m += 2;
  return m;
}

// ---------------------------------------------------------------------------
// Connectivity

/// Unit-step points of a rectilinear polyline (diagonal jumps dropped, the
/// same tolerance the library applies).
inline std::vector<Point> walk_points(const WirePolyline& w) {
  std::vector<Point> pts;
  for (size_t i = 0; i + 1 < w.points.size(); ++i) {
    Point a = w.points[i], b = w.points[i + 1];
    if (a.x != b.x && a.y != b.y) continue;
    int dx = (b.x > a.x) - (b.x < a.x);
    int dy = (b.y > a.y) - (b.y < a.y);
    for (Point p = a;; p = Point{p.x + dx, p.y + dy}) {
      pts.push_back(p);
      if (p == b) break;
    }
  }
  return pts;
}

/// Flood-fill verdict: all terminals reachable through the net's own wires.
/// Adjacency holds only along actually drawn unit edges; distinct wires join
/// where they share a point.
inline bool net_connected(const std::vector<WirePolyline>& net_wires,
                          const std::vector<Point>& terminals) {
  if (terminals.size() < 2) return true;
  std::set<std::pair<Point, Point>> edges;
  for (const auto& w : net_wires) {
    auto pts = walk_points(w);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      // Consecutive walk points of one segment are adjacent by construction,
      // but segment boundaries inside `pts` are not; re-check distance.
      if (eeschematic::manhattan(pts[i], pts[i + 1]) != 1) continue;
      edges.insert({pts[i], pts[i + 1]});
      edges.insert({pts[i + 1], pts[i]});
    }
  }
  std::map<Point, std::vector<Point>> adj;
  for (const auto& [a, b] : edges) adj[a].push_back(b);

  std::set<Point> seen{terminals[0]};
  std::queue<Point> frontier;
  frontier.push(terminals[0]);
  while (!frontier.empty()) {
    Point p = frontier.front();
    frontier.pop();
    auto it = adj.find(p);
    if (it == adj.end()) continue;
    for (Point q : it->second)
      if (seen.insert(q).second) frontier.push(q);
  }
  for (const Point& t : terminals)
    if (!seen.count(t)) return false;
  return true;
}

/// Wires of one net, in layout order.
inline std::vector<WirePolyline> wires_of(const SchematicLayout& l,
                                          const std::string& net) {
  std::vector<WirePolyline> out;
  for (const auto& w : l.wires)
    if (w.net == net) out.push_back(w);
  return out;
}

// ---------------------------------------------------------------------------
// Substructure predicates (re-derived from the definitions)

inline std::string term_net(const Device& d, TerminalRole role) {
  for (const auto& t : d.terminals)
    if (t.role == role) return t.net;
  return {};
}

inline bool supply_net(const Circuit& c, const std::string& net) {
  const eeschematic::Net* n = c.net(net);
  return n && (n->klass == eeschematic::NetClass::POWER ||
               n->klass == eeschematic::NetClass::GROUND);
}

inline bool diode_connected(const Circuit& c, const Device& d) {
  return term_net(d, TerminalRole::GATE) == term_net(d, TerminalRole::DRAIN);
}

inline bool diff_pair(const Circuit& c, const Device& a, const Device& b) {
  if (a.kind != b.kind) return false;
  std::string sa = term_net(a, TerminalRole::SOURCE);
  if (sa != term_net(b, TerminalRole::SOURCE) || supply_net(c, sa))
    return false;
  return term_net(a, TerminalRole::GATE) != term_net(b, TerminalRole::GATE) &&
         term_net(a, TerminalRole::DRAIN) != term_net(b, TerminalRole::DRAIN);
}

inline bool current_mirror(const Circuit& c, const Device& ref,
                           const Device& out) {
  if (ref.kind != out.kind) return false;
  if (term_net(ref, TerminalRole::GATE) != term_net(out, TerminalRole::GATE))
    return false;
  return diode_connected(c, ref);
}

inline bool cascode_stack(const Circuit& c, const Device& driver,
                          const Device& cascode) {
  if (driver.kind != cascode.kind) return false;
  std::string series = term_net(driver, TerminalRole::DRAIN);
  if (series != term_net(cascode, TerminalRole::SOURCE)) return false;
  if (supply_net(c, series)) return false;
  return term_net(driver, TerminalRole::GATE) !=
         term_net(cascode, TerminalRole::GATE);
}

inline bool single_source(const Circuit& c, const Device& d) {
  if (!supply_net(c, term_net(d, TerminalRole::SOURCE))) return false;
  if (diode_connected(c, d)) return false;
  std::string bias = term_net(d, TerminalRole::GATE);
  for (const auto& other : c.devices) {
    if (other.name == d.name || !eeschematic::is_mos(other.kind)) continue;
    if (term_net(other, TerminalRole::GATE) == bias) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random generators

/// Random MOS-only circuit text: 2..max_devices transistors over a small net
/// pool, always parseable. Topology is unconstrained on purpose — soundness
/// checks run on whatever patterns emerge.
inline std::string random_circuit_text(std::mt19937_64& rng,
                                       int max_devices = 8) {
  static const char* kPool[] = {"VDD", "GND", "A", "B", "C", "D",
                                "E",   "F",   "IN", "OUT"};
  std::uniform_int_distribution<int> net_pick(0, 9);
  std::uniform_int_distribution<int> dev_count(2, max_devices);
  std::uniform_int_distribution<int> kind_pick(0, 1);

  int n = dev_count(rng);
  std::string text = "* randomized transistor soup\n";
  for (int i = 1; i <= n; ++i) {
    text += "M" + std::to_string(i);
    for (int t = 0; t < 4; ++t) text += std::string(" ") + kPool[net_pick(rng)];
    text += kind_pick(rng) ? " PMOS" : " NMOS";
    text += " W=1u L=180n\n";
  }
  text += ".end\n";
  return text;
}

/// Layout translated by (dx, dy): every component position and wire point
/// shifts, grid size unchanged.
inline SchematicLayout translate_layout(SchematicLayout l, int dx, int dy) {
  for (auto& comp : l.components) {
    comp.pos.x += dx;
    comp.pos.y += dy;
  }
  for (auto& w : l.wires)
    for (auto& p : w.points) {
      p.x += dx;
      p.y += dy;
    }
  for (auto& lab : l.labels) {
    lab.pos.x += dx;
    lab.pos.y += dy;
  }
  return l;
}

/// Whole-layout reflection about the vertical grid axis: x -> grid_width - x
/// for wire points; boxes map interval-to-interval with the mirror flag
/// flipped so every terminal anchor lands on the reflected point. Valid for
/// rotations 0 and 180 (all the placer emits); 90/270 would need a rotation
/// change instead of a mirror flip.
inline SchematicLayout mirror_layout(SchematicLayout l) {
  int gw = l.grid_width;
  for (auto& comp : l.components) {
    auto [w, h] = eeschematic::orient_dims(
        eeschematic::symbol_def(comp.kind).width,
        eeschematic::symbol_def(comp.kind).height, comp.orient);
    comp.pos.x = gw - comp.pos.x - w;
    comp.orient.mirror = !comp.orient.mirror;
  }
  for (auto& w : l.wires)
    for (auto& p : w.points) p.x = gw - p.x;
  for (auto& lab : l.labels) lab.pos.x = gw - lab.pos.x;
  return l;
}

}  // namespace oracle
