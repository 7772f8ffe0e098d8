#include "eeschematic/wiring.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <queue>
#include <sstream>
#include <tuple>

#include "nlohmann/json.hpp"

namespace eeschematic {

namespace {

// E, W, N, S; the first two are horizontal for the tie-break.
constexpr std::array<Point, 4> kDirs = {{{1, 0}, {-1, 0}, {0, -1}, {0, 1}}};

bool dir_vertical(int d) { return d >= 2; }

int role_priority(TerminalRole r) {
  switch (r) {
    case TerminalRole::GATE: return 0;
    case TerminalRole::DRAIN: return 1;
    case TerminalRole::SOURCE: return 2;
    case TerminalRole::BULK: return 3;
    case TerminalRole::POS: return 4;
    case TerminalRole::NEG: return 5;
    case TerminalRole::PIN: return 6;
  }
  return 7;
}

std::vector<Point> compress_corners(const std::vector<Point>& pts) {
  std::vector<Point> out;
  for (const Point& p : pts) {
    if (out.size() >= 2) {
      Point& b = out[out.size() - 1];
      Point& a = out[out.size() - 2];
      bool collinear = (a.x == b.x && b.x == p.x) || (a.y == b.y && b.y == p.y);
      if (collinear) {
        b = p;
        continue;
      }
    }
    out.push_back(p);
  }
  return out;
}

int polyline_length(const WirePolyline& w) {
  int len = 0;
  for (size_t i = 0; i + 1 < w.points.size(); ++i)
    len += manhattan(w.points[i], w.points[i + 1]);
  return len;
}

int polyline_bends(const WirePolyline& w) {
  int bends = 0;
  for (size_t i = 0; i + 2 < w.points.size(); ++i) {
    const Point &a = w.points[i], &b = w.points[i + 1], &c = w.points[i + 2];
    bool ab_horiz = a.y == b.y;
    bool bc_horiz = b.y == c.y;
    if (ab_horiz != bc_horiz) ++bends;
  }
  return bends;
}

}  // namespace

// ---------------------------------------------------------------------------
// RoutingGrid

void RoutingGrid::block_box(const Rect& box, const std::vector<Point>& keep_open) {
  int x1 = std::max(0, box.x), x2 = std::min(width_, box.x2());
  int y1 = std::max(0, box.y), y2 = std::min(height_, box.y2());
  for (int x = x1; x <= x2; ++x)
    for (int y = y1; y <= y2; ++y) {
      Point p{x, y};
      if (std::find(keep_open.begin(), keep_open.end(), p) == keep_open.end())
        obstacles_.insert(p);
    }
}

void RoutingGrid::add_anchor(Point p, const std::string& net) {
  anchors_[p] = net;
}

const std::string* RoutingGrid::anchor_net(Point p) const {
  auto it = anchors_.find(p);
  return it == anchors_.end() ? nullptr : &it->second;
}

const RoutingGrid::CellUse* RoutingGrid::occupancy(Point p) const {
  auto it = occupied_.find(p);
  return it == occupied_.end() ? nullptr : &it->second;
}

void RoutingGrid::occupy_path(const std::vector<Point>& pts,
                              const std::string& net) {
  auto claim = [&](Point p, bool horiz) {
    CellUse& use = occupied_[p];
    std::string& slot = horiz ? use.horiz_net : use.vert_net;
    if (slot.empty()) slot = net;
  };
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Point a = pts[i], b = pts[i + 1];
    if (a == b || (a.x != b.x && a.y != b.y)) continue;
    int dx = (b.x > a.x) - (b.x < a.x);
    int dy = (b.y > a.y) - (b.y < a.y);
    bool horiz = dy == 0;
    for (Point p = a;; p = Point{p.x + dx, p.y + dy}) {
      claim(p, horiz);
      if (p == b) break;
    }
  }
}

RoutingGrid RoutingGrid::from_layout(const Circuit& c, const SchematicLayout& l) {
  RoutingGrid grid(l.grid_width, l.grid_height);
  auto points = terminal_points(c, l);
  std::map<std::string, std::vector<Point>> open_by_component;
  for (const auto& tp : points) open_by_component[tp.device].push_back(tp.point);
  std::map<std::string, Rect> boxes;
  for (const auto& comp : l.components) {
    boxes[comp.id] = comp.box();
    grid.block_box(comp.box(), open_by_component[comp.id]);
  }
  for (const auto& tp : points) grid.add_anchor(tp.point, tp.net);
  // Reserve every terminal's escape edge before any net routes: an anchor on
  // a box edge has exactly one off-box neighbor, and a foreign corner parked
  // there would seal the terminal permanently. Pre-claiming the one-unit
  // approach keeps that slot for the owner; perpendicular crossings of the
  // approach point stay legal.
  for (const auto& tp : points) {
    if (tp.net.empty()) continue;
    const Rect& box = boxes[tp.device];
    std::vector<Point> outside;
    for (Point d : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
      Point n{tp.point.x + d.x, tp.point.y + d.y};
      if (grid.in_bounds(n) && !box.contains(n)) outside.push_back(n);
    }
    if (outside.size() == 1)
      grid.occupy_path({tp.point, outside[0]}, tp.net);
  }
  for (const auto& w : l.wires) grid.occupy_path(w.points, w.net);
  return grid;
}

// ---------------------------------------------------------------------------
// Tasks

std::vector<TerminalPoint> terminal_points(const Circuit& c,
                                           const SchematicLayout& l) {
  std::vector<TerminalPoint> out;
  for (const auto& comp : l.components) {
    if (auto net = port_net_of(comp.id)) {
      out.push_back({comp.id, TerminalRole::PIN, *net,
                     anchor_point(comp.kind, comp.pos, comp.orient,
                                  TerminalRole::PIN)});
      continue;
    }
    const Device* dev = c.device(comp.id);
    if (dev && symbol_kind_of(dev->kind) == comp.kind) {
      for (const auto& t : dev->terminals)
        out.push_back({comp.id, t.role, t.net,
                       anchor_point(comp.kind, comp.pos, comp.orient, t.role)});
      continue;
    }
    // Unknown component: geometry still computable, net binding is not.
    for (const auto& [role, local] : symbol_def(comp.kind).anchors)
      out.push_back({comp.id, role, "",
                     anchor_point(comp.kind, comp.pos, comp.orient, role)});
  }
  return out;
}

int net_priority_rank(const Circuit& c, const std::string& net) {
  const Net* n = c.net(net);
  if (!n) return 6;
  if (n->klass == NetClass::POWER) return 0;
  if (n->klass == NetClass::GROUND) return 1;
  int best = 6;
  for (const auto& [dev, role] : n->terminals) {
    switch (role) {
      case TerminalRole::GATE: best = std::min(best, 2); break;
      case TerminalRole::DRAIN: best = std::min(best, 3); break;
      case TerminalRole::SOURCE: best = std::min(best, 4); break;
      case TerminalRole::BULK: best = std::min(best, 5); break;
      default: break;
    }
  }
  return best;
}

std::vector<ConnectionTask> priority_order(const Circuit& c,
                                           const SchematicLayout& l) {
  std::map<std::string, std::vector<TerminalPoint>> by_net;
  for (auto& tp : terminal_points(c, l))
    if (!tp.net.empty()) by_net[tp.net].push_back(tp);

  std::vector<ConnectionTask> tasks;
  for (auto& [net, terms] : by_net) {
    std::sort(terms.begin(), terms.end(),
              [](const TerminalPoint& a, const TerminalPoint& b) {
                return std::tuple(role_priority(a.role), a.device,
                                  int(a.role)) <
                       std::tuple(role_priority(b.role), b.device, int(b.role));
              });
    tasks.push_back({net, std::move(terms), net_priority_rank(c, net)});
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const ConnectionTask& a, const ConnectionTask& b) {
              return std::tuple(a.priority_rank, a.net) <
                     std::tuple(b.priority_rank, b.net);
            });
  return tasks;
}

// ---------------------------------------------------------------------------
// Route search

namespace {

struct SearchGrid {
  const RoutingGrid& grid;
  const std::string& net;

  bool point_passable(Point p) const {
    if (!grid.in_bounds(p) || grid.is_obstacle(p)) return false;
    const std::string* a = grid.anchor_net(p);
    return !a || *a == net;
  }
  // Unit move from p along dir d; checks the edge's axis slot on both ends.
  bool edge_passable(Point p, int d) const {
    Point q{p.x + kDirs[d].x, p.y + kDirs[d].y};
    if (!point_passable(q)) return false;
    bool horiz = !dir_vertical(d);
    for (Point r : {p, q}) {
      const RoutingGrid::CellUse* use = grid.occupancy(r);
      if (!use) continue;
      const std::string& slot = horiz ? use->horiz_net : use->vert_net;
      if (!slot.empty() && slot != net) return false;
    }
    return true;
  }
};

/// Uniform-cost search from `from` to `to`: unit step cost, bend penalty 2,
/// pops tie-broken horizontal-first then lower y then lower x. Runs from the
/// new terminal toward the target cell so the tie-break favors paths that
/// leave the target horizontally once the result is reversed.
std::vector<Point> search_path(const SearchGrid& sg, Point from, Point to) {
  constexpr int kNoDir = 4;
  const int w = sg.grid.width() + 1, h = sg.grid.height() + 1;
  auto state_id = [&](Point p, int d) { return (p.y * w + p.x) * 5 + d; };
  std::vector<int> dist(size_t(w) * h * 5, std::numeric_limits<int>::max());
  std::vector<int> parent(size_t(w) * h * 5, -1);

  using Key = std::tuple<int, bool, int, int, int>;  // cost, vert, y, x, dir
  struct Entry {
    Key key;
    Point p;
    int dir;
  };
  auto cmp = [](const Entry& a, const Entry& b) { return a.key > b.key; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> pq(cmp);

  dist[state_id(from, kNoDir)] = 0;
  pq.push({{0, false, from.y, from.x, kNoDir}, from, kNoDir});
  while (!pq.empty()) {
    Entry e = pq.top();
    pq.pop();
    int cost = std::get<0>(e.key);
    int sid = state_id(e.p, e.dir);
    if (cost > dist[sid]) continue;
    if (e.p == to) {
      std::vector<Point> path;
      int cur = sid;
      while (cur != -1) {
        path.push_back(Point{(cur / 5) % w, (cur / 5) / w});
        cur = parent[cur];
      }
      return path;  // runs to -> from after the walk above reversed it
    }
    for (int d = 0; d < 4; ++d) {
      if (!sg.edge_passable(e.p, d)) continue;
      Point q{e.p.x + kDirs[d].x, e.p.y + kDirs[d].y};
      int nc = cost + 1 + ((e.dir != kNoDir && e.dir != d) ? 2 : 0);
      int qid = state_id(q, d);
      if (nc >= dist[qid]) continue;
      dist[qid] = nc;
      parent[qid] = sid;
      pq.push({{nc, dir_vertical(d), q.y, q.x, d}, q, d});
    }
  }
  return {};
}

}  // namespace

std::vector<WirePolyline> route_net(const ConnectionTask& task,
                                    RoutingGrid& grid, bool* unroutable) {
  if (unroutable) *unroutable = false;
  std::vector<WirePolyline> out;
  if (task.terminals.empty()) return out;

  SearchGrid sg{grid, task.net};
  std::set<Point> routed;
  routed.insert(task.terminals[0].point);

  if (task.terminals.size() == 1) {
    Point p0 = task.terminals[0].point;
    for (int d = 0; d < 4; ++d) {
      Point p1{p0.x + kDirs[d].x, p0.y + kDirs[d].y};
      if (!sg.edge_passable(p0, d) || !sg.edge_passable(p1, d)) continue;
      Point p2{p1.x + kDirs[d].x, p1.y + kDirs[d].y};
      WirePolyline stub{task.net, {p0, p2}};
      grid.occupy_path(stub.points, task.net);
      out.push_back(std::move(stub));
      break;
    }
    return out;
  }

  for (size_t t = 1; t < task.terminals.size(); ++t) {
    Point start = task.terminals[t].point;
    if (routed.count(start)) continue;

    Point target{};
    int best = std::numeric_limits<int>::max();
    for (const Point& r : routed) {  // set order = lexicographic tie-break
      int m = manhattan(start, r);
      if (m < best) {
        best = m;
        target = r;
      }
    }

    std::vector<Point> path = search_path(sg, start, target);
    if (path.empty()) {
      if (unroutable) *unroutable = true;
      continue;
    }
    for (const Point& p : path) routed.insert(p);
    WirePolyline wire{task.net, compress_corners(path)};
    grid.occupy_path(wire.points, task.net);
    out.push_back(std::move(wire));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edge geometry helpers

std::vector<UnitEdge> polyline_edges(const WirePolyline& w) {
  std::vector<UnitEdge> out;
  for (size_t i = 0; i + 1 < w.points.size(); ++i) {
    Point a = w.points[i], b = w.points[i + 1];
    if (a == b || (a.x != b.x && a.y != b.y)) continue;
    int dx = (b.x > a.x) - (b.x < a.x);
    int dy = (b.y > a.y) - (b.y < a.y);
    for (Point p = a; p != b; p = Point{p.x + dx, p.y + dy})
      out.push_back(UnitEdge::make(p, Point{p.x + dx, p.y + dy}));
  }
  return out;
}

std::map<std::string, std::set<UnitEdge>> net_edges(
    const std::vector<WirePolyline>& wires) {
  std::map<std::string, std::set<UnitEdge>> out;
  for (const auto& w : wires)
    for (const UnitEdge& e : polyline_edges(w)) out[w.net].insert(e);
  return out;
}

std::set<Point> junction_points(const std::vector<WirePolyline>& wires) {
  std::map<std::string, std::map<Point, std::set<Point>>> adjacency;
  for (const auto& w : wires)
    for (const UnitEdge& e : polyline_edges(w)) {
      adjacency[w.net][e.a].insert(e.b);
      adjacency[w.net][e.b].insert(e.a);
    }
  std::set<Point> out;
  for (const auto& [net, adj] : adjacency)
    for (const auto& [p, nbrs] : adj)
      if (nbrs.size() >= 3) out.insert(p);
  return out;
}

// ---------------------------------------------------------------------------
// Conflict removal

ConflictCleanup remove_conflicts(const std::vector<WirePolyline>& wires) {
  ConflictCleanup result;

  std::vector<std::string> net_order;
  std::map<std::string, std::set<UnitEdge>> original;
  for (const auto& w : wires) {
    if (!original.count(w.net)) net_order.push_back(w.net);
    for (const UnitEdge& e : polyline_edges(w)) original[w.net].insert(e);
  }

  // First net to claim a unit edge keeps it; later nets lose the overlap.
  std::map<UnitEdge, std::string> owner;
  std::map<std::string, std::set<UnitEdge>> kept;
  for (const std::string& net : net_order)
    for (const UnitEdge& e : original[net]) {
      auto it = owner.find(e);
      if (it == owner.end()) {
        owner.emplace(e, net);
        kept[net].insert(e);
      } else if (it->second != net) {
        ++result.removed_segments;
      }
    }

  // Connectivity audit: every point pair the original graph connected must
  // stay connected (and present) after the removal.
  struct Dsu {
    std::map<Point, Point> up;
    Point find(Point p) {
      auto it = up.find(p);
      if (it == up.end()) return p;
      if (it->second == p) return p;
      Point root = find(it->second);
      up[p] = root;
      return root;
    }
    void unite(Point a, Point b) {
      up.try_emplace(a, a);
      up.try_emplace(b, b);
      Point ra = find(a), rb = find(b);
      if (!(ra == rb)) up[ra] = rb;
    }
    bool has(Point p) const { return up.count(p) > 0; }
  };
  for (const std::string& net : net_order) {
    Dsu before, after;
    for (const UnitEdge& e : original[net]) before.unite(e.a, e.b);
    for (const UnitEdge& e : kept[net]) after.unite(e.a, e.b);

    std::map<Point, std::vector<Point>> groups;
    for (const auto& [p, parent] : before.up) groups[before.find(p)].push_back(p);

    bool lost = false;
    for (const auto& [root, pts] : groups) {
      for (size_t i = 1; i < pts.size() && !lost; ++i) {
        if (!after.has(pts[0]) || !after.has(pts[i]) ||
            !(after.find(pts[0]) == after.find(pts[i])))
          lost = true;
      }
      if (lost) break;
    }
    if (lost) result.flagged_nets.push_back(net);
  }

  // Canonical rebuild: maximal straight runs, one 2-point polyline each.
  for (const std::string& net : net_order) {
    std::vector<WirePolyline> segments;
    std::map<int, std::vector<std::pair<int, int>>> rows, cols;
    for (const UnitEdge& e : kept[net]) {
      if (e.horizontal())
        rows[e.a.y].push_back({e.a.x, e.b.x});
      else
        cols[e.a.x].push_back({e.a.y, e.b.y});
    }
    auto emit_runs = [&](auto& lanes, bool horizontal) {
      for (auto& [fixed, spans] : lanes) {
        std::sort(spans.begin(), spans.end());
        size_t i = 0;
        while (i < spans.size()) {
          int lo = spans[i].first, hi = spans[i].second;
          size_t j = i + 1;
          while (j < spans.size() && spans[j].first <= hi) {
            hi = std::max(hi, spans[j].second);
            ++j;
          }
          Point a = horizontal ? Point{lo, fixed} : Point{fixed, lo};
          Point b = horizontal ? Point{hi, fixed} : Point{fixed, hi};
          segments.push_back({net, {a, b}});
          i = j;
        }
      }
    };
    emit_runs(rows, true);
    emit_runs(cols, false);
    std::sort(segments.begin(), segments.end(),
              [](const WirePolyline& a, const WirePolyline& b) {
                return std::tuple(a.points[0], a.points[1]) <
                       std::tuple(b.points[0], b.points[1]);
              });
    for (auto& s : segments) result.wires.push_back(std::move(s));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Report + pipeline

std::string RoutingReport::to_text() const {
  std::ostringstream os;
  for (const auto& r : nets) {
    os << r.net << " rank=" << r.rank << " length=" << r.length
       << " bends=" << r.bends;
    if (!r.flags.empty()) {
      os << " flags=";
      for (size_t i = 0; i < r.flags.size(); ++i)
        os << (i ? "," : "") << r.flags[i];
    }
    os << '\n';
  }
  return os.str();
}

std::string RoutingReport::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : nets) {
    nlohmann::ordered_json jr;
    jr["net"] = r.net;
    jr["rank"] = r.rank;
    jr["length"] = r.length;
    jr["bends"] = r.bends;
    jr["flags"] = r.flags;
    doc.push_back(std::move(jr));
  }
  return doc.dump(2) + "\n";
}

bool RoutingReport::has_flag(const std::string& flag) const {
  for (const auto& r : nets)
    for (const auto& f : r.flags)
      if (f == flag) return true;
  return false;
}

SchematicLayout wire_layout(const Circuit& c, const SchematicLayout& l,
                            RoutingReport* report) {
  SchematicLayout out = l;
  out.wires.clear();
  if (report) report->nets.clear();
  if (out.components.empty()) return out;

  SchematicLayout bare = out;  // components only; routing starts fresh
  RoutingGrid grid = RoutingGrid::from_layout(c, bare);

  std::vector<WirePolyline> raw;
  RoutingReport local;
  for (const ConnectionTask& task : priority_order(c, bare)) {
    bool unroutable = false;
    auto polys = route_net(task, grid, &unroutable);
    NetRouteRecord rec{task.net, task.priority_rank, 0, 0, {}};
    for (const auto& p : polys) {
      rec.length += polyline_length(p);
      rec.bends += polyline_bends(p);
      raw.push_back(p);
    }
    if (unroutable) rec.flags.push_back("unroutable");
    local.nets.push_back(std::move(rec));
  }

  ConflictCleanup cleanup = remove_conflicts(raw);
  out.wires = std::move(cleanup.wires);
  for (const std::string& net : cleanup.flagged_nets)
    for (auto& rec : local.nets)
      if (rec.net == net) rec.flags.push_back("conflict_trimmed");
  if (report) *report = std::move(local);
  return out;
}

}  // namespace eeschematic
