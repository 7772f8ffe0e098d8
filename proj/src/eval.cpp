#include "eeschematic/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "eeschematic/wiring.hpp"
#include "nlohmann/json.hpp"

namespace eeschematic {

using ordered_json = nlohmann::ordered_json;

namespace {

struct PointDsu {
  std::map<Point, Point> up;

  Point find(Point p) {
    auto it = up.find(p);
    if (it == up.end() || it->second == p) return p;
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
};

std::string terminal_name(const std::string& owner, TerminalRole role) {
  return owner + ":" + terminal_role_name(role);
}

/// Grid position of a net terminal, or nullopt when the owning component is
/// not placed. Owners are device names or PORT_<net> ids.
std::optional<Point> locate_terminal(const SchematicLayout& l,
                                     const std::string& owner,
                                     TerminalRole role) {
  const PlacedComponent* comp = l.component(owner);
  if (!comp) return std::nullopt;
  const auto& anchors = symbol_def(comp->kind).anchors;
  if (!anchors.count(role)) return std::nullopt;
  return anchor_point(comp->kind, comp->pos, comp->orient, role);
}

/// Every grid point a polyline visits, unit step by unit step.
std::vector<Point> polyline_points(const WirePolyline& w) {
  std::vector<Point> pts;
  if (w.points.empty()) return pts;
  pts.push_back(w.points.front());
  for (size_t i = 1; i < w.points.size(); ++i) {
    Point a = w.points[i - 1], b = w.points[i];
    int dx = (b.x > a.x) - (b.x < a.x);
    int dy = (b.y > a.y) - (b.y < a.y);
    if (dx != 0 && dy != 0) continue;  // diagonal: shape violation, skip
    while (!(a == b)) {
      a = {a.x + dx, a.y + dy};
      pts.push_back(a);
    }
  }
  return pts;
}

}  // namespace

bool is_mirror_placement(const PlacedComponent& a, const PlacedComponent& b) {
  return a.pos.y == b.pos.y && a.orient.rot == b.orient.rot &&
         a.orient.mirror != b.orient.mirror;
}

EvalReport check_correctness(const Circuit& c, const SchematicLayout& l) {
  EvalReport report;
  auto edges_by_net = net_edges(l.wires);

  // Connectivity: per net, union wire unit edges and require every terminal
  // to land in one component. Coincident terminals need no wire.
  for (const Net& net : c.nets) {
    if (net.terminals.size() < 2) continue;
    PointDsu dsu;
    auto eit = edges_by_net.find(net.name);
    if (eit != edges_by_net.end())
      for (const UnitEdge& e : eit->second) dsu.unite(e.a, e.b);

    ConnectivityFailure fail{net.name, {}};
    std::optional<Point> first_pt;
    std::string first_name;
    for (const auto& [owner, role] : net.terminals) {
      std::string name = terminal_name(owner, role);
      auto pt = locate_terminal(l, owner, role);
      if (!pt) {
        fail.missing_pairs.emplace_back(name, "(not placed)");
        continue;
      }
      if (!first_pt) {
        first_pt = pt;
        first_name = name;
        continue;
      }
      if (!(dsu.find(*first_pt) == dsu.find(*pt)))
        fail.missing_pairs.emplace_back(first_name, name);
    }
    if (!fail.missing_pairs.empty())
      report.connectivity_failures.push_back(std::move(fail));
  }

  // Component-component overlaps: strict interior intersection.
  for (size_t i = 0; i < l.components.size(); ++i)
    for (size_t j = i + 1; j < l.components.size(); ++j) {
      Rect a = l.components[i].box(), b = l.components[j].box();
      if (a.overlaps(b))
        report.overlap_violations.push_back(
            {l.components[i].id, l.components[j].id,
             {std::max(a.x, b.x), std::max(a.y, b.y)}});
    }

  // Anchor registry of placed components, for wire-box and short checks.
  std::map<Point, std::vector<std::pair<std::string, std::string>>> anchors;
  for (const TerminalPoint& tp : terminal_points(c, l))
    anchors[tp.point].emplace_back(tp.net, tp.device);

  // Wire-component overlaps: a wire may touch a box only at its anchors.
  std::set<std::pair<std::string, std::string>> seen_overlap;
  for (const auto& w : l.wires) {
    for (const Point& p : polyline_points(w)) {
      for (const auto& comp : l.components) {
        if (!comp.box().contains(p)) continue;
        bool at_anchor = false;
        for (const auto& [role, local] : symbol_def(comp.kind).anchors)
          if (anchor_point(comp.kind, comp.pos, comp.orient, role) == p)
            at_anchor = true;
        if (at_anchor) continue;
        if (seen_overlap.insert({w.net, comp.id}).second)
          report.overlap_violations.push_back({"wire:" + w.net, comp.id, p});
      }
    }
  }

  // Shorts, rule 1: a unit edge traversed by two nets.
  std::map<UnitEdge, std::string> edge_owner;
  std::set<std::pair<std::string, std::string>> seen_short;
  for (const auto& w : l.wires)
    for (const UnitEdge& e : polyline_edges(w)) {
      auto [it, fresh] = edge_owner.try_emplace(e, w.net);
      if (fresh || it->second == w.net) continue;
      auto key = std::minmax(it->second, w.net);
      if (seen_short.insert(key).second)
        report.short_circuits.push_back({key.first, key.second, e.a});
    }

  // Shorts, rule 2: a wire point sitting on another net's terminal.
  for (const auto& w : l.wires)
    for (const Point& p : polyline_points(w)) {
      auto it = anchors.find(p);
      if (it == anchors.end()) continue;
      for (const auto& [net, owner] : it->second) {
        if (net.empty() || net == w.net) continue;
        auto key = std::minmax(net, w.net);
        if (seen_short.insert(key).second)
          report.short_circuits.push_back({key.first, key.second, p});
      }
    }

  report.correct = report.connectivity_failures.empty() &&
                   report.overlap_violations.empty() &&
                   report.short_circuits.empty();
  return report;
}

AestheticsScore score_aesthetics(const SchematicLayout& l,
                                 const std::vector<SubstructureMatch>& matches) {
  AestheticsScore s;

  // Symmetry: fraction of side-by-side pair structures placed as mirrors.
  int pairs = 0, mirrored = 0;
  for (const auto& m : matches) {
    if (m.kind != SubstructureKind::DIFFERENTIAL_PAIR &&
        m.kind != SubstructureKind::CURRENT_MIRROR)
      continue;
    if (m.members.size() != 2) continue;
    ++pairs;
    const PlacedComponent* a = l.component(m.members[0].first);
    const PlacedComponent* b = l.component(m.members[1].first);
    if (a && b && is_mirror_placement(*a, *b)) ++mirrored;
  }
  s.symmetry = pairs == 0 ? 1.0 : double(mirrored) / pairs;

  // Alignment on box centers (doubled to stay integral), so symbols of
  // different footprints still line up and mirroring changes nothing.
  if (!l.components.empty()) {
    std::map<int, int> rows, cols;
    std::vector<std::pair<int, int>> centers;
    for (const auto& comp : l.components) {
      Rect box = comp.box();
      int cx = 2 * box.x + box.w, cy = 2 * box.y + box.h;
      centers.emplace_back(cx, cy);
      ++cols[cx];
      ++rows[cy];
    }
    int aligned = 0;
    for (const auto& [cx, cy] : centers)
      if (cols[cx] > 1 || rows[cy] > 1) ++aligned;
    s.alignment = double(aligned) / double(l.components.size());
  }

  // Per-point direction sets across nets give crossings; per-net adjacency
  // gives bends.
  auto edges_by_net = net_edges(l.wires);
  struct AxisUse {
    std::set<std::string> horiz, vert;
  };
  std::map<Point, AxisUse> axis;
  int nets_with_wire = 0;
  double bound_sum = 0;
  for (const auto& [net, edges] : edges_by_net) {
    if (edges.empty()) continue;
    ++nets_with_wire;
    s.total_wire_length += int(edges.size());
    Point lo = edges.begin()->a, hi = lo;
    std::map<Point, std::set<Point>> adj;
    for (const UnitEdge& e : edges) {
      for (Point p : {e.a, e.b}) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        auto& use = axis[p];
        (e.horizontal() ? use.horiz : use.vert).insert(net);
      }
      adj[e.a].insert(e.b);
      adj[e.b].insert(e.a);
    }
    bound_sum += (hi.x - lo.x) + (hi.y - lo.y);
    for (const auto& [p, nbrs] : adj) {
      if (nbrs.size() != 2) continue;
      bool h = false, v = false;
      for (const Point& n : nbrs) (n.y == p.y ? h : v) = true;
      if (h && v) ++s.bends;
    }
  }
  for (const auto& [p, use] : axis) {
    std::set<std::pair<std::string, std::string>> crossed;
    for (const auto& h : use.horiz)
      for (const auto& v : use.vert)
        if (h != v) crossed.insert(std::minmax(h, v));
    s.crossings += int(crossed.size());
  }

  int net_pairs = nets_with_wire * (nets_with_wire - 1) / 2;
  double cross_score =
      1.0 - std::min(1.0, double(s.crossings) / std::max(1, net_pairs));
  double length_score =
      s.total_wire_length == 0
          ? 1.0
          : std::min(1.0, bound_sum / double(s.total_wire_length));
  s.composite = 0.4 * s.symmetry + 0.3 * s.alignment + 0.2 * cross_score +
                0.1 * length_score;
  return s;
}

namespace {

ordered_json point_json(Point p) { return ordered_json::array({p.x, p.y}); }

ordered_json report_json(const EvalReport& r) {
  ordered_json doc;
  doc["correct"] = r.correct;
  doc["connectivity_failures"] = ordered_json::array();
  for (const auto& f : r.connectivity_failures) {
    ordered_json jf;
    jf["net"] = f.net;
    jf["missing_pairs"] = ordered_json::array();
    for (const auto& [a, b] : f.missing_pairs)
      jf["missing_pairs"].push_back(ordered_json::array({a, b}));
    doc["connectivity_failures"].push_back(std::move(jf));
  }
  doc["overlap_violations"] = ordered_json::array();
  for (const auto& v : r.overlap_violations)
    doc["overlap_violations"].push_back(
        {{"a", v.a}, {"b", v.b}, {"at", point_json(v.at)}});
  doc["short_circuits"] = ordered_json::array();
  for (const auto& v : r.short_circuits)
    doc["short_circuits"].push_back({{"net_a", v.net_a},
                                     {"net_b", v.net_b},
                                     {"cell", point_json(v.cell)}});
  doc["aesthetics"] = {{"symmetry", r.aesthetics.symmetry},
                       {"alignment", r.aesthetics.alignment},
                       {"crossings", r.aesthetics.crossings},
                       {"total_wire_length", r.aesthetics.total_wire_length},
                       {"bends", r.aesthetics.bends},
                       {"composite", r.aesthetics.composite}};
  return doc;
}

}  // namespace

std::string EvalReport::to_json() const { return report_json(*this).dump(2) + "\n"; }

RunSummary summarize_trials(const std::string& circuit,
                            const std::vector<TrialResult>& trials) {
  RunSummary s;
  s.circuit = circuit;
  s.trials = int(trials.size());
  s.per_trial = trials;
  if (trials.empty()) return s;
  double place = 0, wire = 0, aes = 0;
  for (const auto& t : trials) {
    if (t.report.correct) ++s.correct_count;
    place += t.place_iters;
    wire += t.wire_iters;
    aes += t.report.aesthetics.composite;
  }
  s.avg_place_iters = place / s.trials;
  s.avg_wire_iters = wire / s.trials;
  s.avg_aesthetics = aes / s.trials;
  return s;
}

std::string format_summary_table(const std::vector<RunSummary>& rows) {
  const std::vector<std::string> headers = {
      "Circuit", "Correctness", "Aesthetics proxy", "Avg. Iter. for Placement",
      "Avg. Iter. for Wiring"};
  auto fmt = [](const char* f, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), f, v);
    return std::string(buf);
  };
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows)
    cells.push_back({r.circuit,
                     std::to_string(r.correct_count) + "/" +
                         std::to_string(r.trials),
                     fmt("%.2f", r.avg_aesthetics),
                     fmt("%.1f", r.avg_place_iters),
                     fmt("%.1f", r.avg_wire_iters)});

  std::vector<size_t> width(headers.size());
  for (size_t i = 0; i < headers.size(); ++i) {
    width[i] = headers[i].size();
    for (const auto& row : cells) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      os << row[i];
      if (i + 1 < row.size())
        os << std::string(width[i] - row[i].size() + 2, ' ');
    }
    os << '\n';
  };
  emit(headers);
  std::vector<std::string> rule;
  for (size_t w : width) rule.push_back(std::string(w, '-'));
  emit(rule);
  for (const auto& row : cells) emit(row);
  return os.str();
}

std::string summary_to_json(const RunSummary& s) {
  ordered_json doc;
  doc["circuit"] = s.circuit;
  doc["trials"] = s.trials;
  doc["correct_count"] = s.correct_count;
  doc["avg_place_iters"] = s.avg_place_iters;
  doc["avg_wire_iters"] = s.avg_wire_iters;
  doc["avg_aesthetics"] = s.avg_aesthetics;
  doc["per_trial"] = ordered_json::array();
  for (const auto& t : s.per_trial)
    doc["per_trial"].push_back({{"place_iters", t.place_iters},
                                {"wire_iters", t.wire_iters},
                                {"report", report_json(t.report)}});
  return doc.dump(2) + "\n";
}

}  // namespace eeschematic
