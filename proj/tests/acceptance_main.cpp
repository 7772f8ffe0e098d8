// Acceptance gate: one [PASS]/[FAIL] line per end-to-end guarantee, exit 1
// if any line fails. Each check leans on the independent oracles rather than
// the library's own bookkeeping wherever a second opinion is possible.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "eeschematic/agent.hpp"
#include "eeschematic/assets.hpp"
#include "eeschematic/eval.hpp"
#include "eeschematic/layout.hpp"
#include "eeschematic/netlist.hpp"
#include "eeschematic/place.hpp"
#include "eeschematic/render.hpp"
#include "eeschematic/substructure.hpp"
#include "eeschematic/wiring.hpp"
#include "oracles.hpp"

namespace {

using namespace eeschematic;

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %s — %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  if (!ok) ++g_failures;
}

const char* kFixtures[] = {"inverter.sp", "ota5t.sp", "telescopic.sp"};

std::string fixture(const std::string& name) {
  return read_text_file(std::string(EESCHEMATIC_FIXTURE_DIR) + "/" + name);
}

SchematicLayout wired(const Circuit& c, RoutingReport* report = nullptr) {
  return wire_layout(c, initial_place(c, detect(c)), report);
}

/// Independent per-net verdict: flood fill over the net's own drawn wires.
bool oracle_net_ok(const SchematicLayout& l, const Net& net) {
  if (net.terminals.size() < 2) return true;
  std::vector<Point> pts;
  for (const auto& [owner, role] : net.terminals) {
    const PlacedComponent* comp = l.component(owner);
    if (!comp) return false;
    if (!symbol_def(comp->kind).anchors.count(role)) return false;
    pts.push_back(anchor_point(comp->kind, comp->pos, comp->orient, role));
  }
  return oracle::net_connected(oracle::wires_of(l, net.name), pts);
}

bool verdicts_agree(const Circuit& c, const SchematicLayout& l) {
  EvalReport r = check_correctness(c, l);
  for (const Net& net : c.nets) {
    bool flagged = false;
    for (const auto& f : r.connectivity_failures) flagged |= f.net == net.name;
    if (flagged == oracle_net_ok(l, net)) return false;
  }
  return true;
}

/// Schema-valid damage: drop a wire, shorten a wire, or nudge a component.
SchematicLayout perturb(SchematicLayout l, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> mode(0, 3);
  switch (mode(rng)) {
    case 1:
      if (!l.wires.empty()) {
        std::uniform_int_distribution<size_t> pick(0, l.wires.size() - 1);
        l.wires.erase(l.wires.begin() + pick(rng));
      }
      break;
    case 2:
      if (!l.wires.empty()) {
        std::uniform_int_distribution<size_t> pick(0, l.wires.size() - 1);
        auto& pts = l.wires[pick(rng)].points;
        if (pts.size() > 2) pts.pop_back();
      }
      break;
    case 3:
      if (!l.components.empty()) {
        std::uniform_int_distribution<size_t> pick(0, l.components.size() - 1);
        std::uniform_int_distribution<int> d(-2, 2);
        auto& pos = l.components[pick(rng)].pos;
        pos.x = std::max(0, pos.x + d(rng));
        pos.y = std::max(0, pos.y + d(rng));
      }
      break;
    default:
      break;
  }
  return l;
}

/// Random placed-and-wired layout, retrying draws too crowded to place.
SchematicLayout random_layout(std::mt19937_64& rng, Circuit* out_circuit) {
  for (;;) {
    Circuit c = parse_netlist(oracle::random_circuit_text(rng));
    try {
      SchematicLayout l = wired(c);
      *out_circuit = std::move(c);
      return perturb(std::move(l), rng);
    } catch (const Error&) {
      continue;  // placement overflow on an overcrowded band
    }
  }
}

// ---------------------------------------------------------------------------

void check_pipeline() {
  auto t0 = std::chrono::steady_clock::now();
  int correct = 0;
  std::string bad;
  for (const char* name : kFixtures) {
    Circuit c = parse_netlist(fixture(name));
    EvalReport r = check_correctness(c, wired(c));
    bool ok = r.correct && r.connectivity_failures.empty() &&
              r.overlap_violations.empty() && r.short_circuits.empty();
    if (ok)
      ++correct;
    else
      bad += std::string(name) + " ";
  }
  double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
                   .count();
  char detail[128];
  std::snprintf(detail, sizeof detail, "%d/3 fixtures correct in %.2fs%s%s",
                correct, sec, bad.empty() ? "" : ", failing: ", bad.c_str());
  report("deterministic pipeline draws every fixture correctly in under 5s",
         correct == 3 && sec < 5.0, detail);
}

void check_connectivity_oracle() {
  int agree = 0, total = 0;
  for (const char* name : kFixtures) {
    Circuit c = parse_netlist(fixture(name));
    agree += verdicts_agree(c, wired(c));
    ++total;
  }
  std::mt19937_64 rng(0xacce551u);
  for (int i = 0; i < 500; ++i) {
    Circuit c;
    SchematicLayout l = random_layout(rng, &c);
    agree += verdicts_agree(c, l);
    ++total;
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "%d/%d layouts agree with flood fill",
                agree, total);
  report("connectivity verdicts equal the independent reachability oracle",
         agree == total, detail);
}

void check_wiring_contract() {
  // Table-driven rank coverage: supplies, every MOS role, passives, pins.
  Circuit ranks = parse_netlist(
      "* rank coverage\n"
      "M1 D G S B NMOS W=1u L=180n\n"
      "M2 VDD G2 GND GND NMOS W=1u L=180n\n"
      "M3 N1 N1 VSS VSS NMOS W=1u L=180n\n"
      "M4 X AVDD Y Z PMOS W=1u L=180n\n"
      "R1 RA RB 10k\n"
      "C1 CA CB 1p\n"
      ".io PIN1 D\n"
      ".end\n");
  struct RankCase {
    const char* net;
    int want;
  };
  const RankCase cases[] = {
      {"VDD", 0}, {"AVDD", 0},                // supply rails first
      {"GND", 1}, {"VSS", 1},                 // ground rails second
      {"G", 2},   {"G2", 2},   {"N1", 2},     // gate beats drain on N1
      {"D", 3},   {"X", 3},                   // drain beats the io listing
      {"S", 4},   {"Y", 4},                   // sources
      {"B", 5},   {"Z", 5},                   // bulks
      {"RA", 6},  {"RB", 6},  {"CA", 6},      // passive pins
      {"CB", 6},  {"PIN1", 6}, {"UNKNOWN", 6}  // pure io and absent nets
  };
  int rank_ok = 0;
  for (const RankCase& rc : cases)
    rank_ok += net_priority_rank(ranks, rc.net) == rc.want;

  // Case 20: equal ranks fall back to net-name order.
  auto tasks = priority_order(ranks, initial_place(ranks, detect(ranks)));
  bool order_ok = tasks.size() >= 2 && tasks[0].net == "AVDD" &&
                  tasks[1].net == "VDD";
  for (size_t i = 0; i + 1 < tasks.size(); ++i)
    order_ok &= std::tuple(tasks[i].priority_rank, tasks[i].net) <
                std::tuple(tasks[i + 1].priority_rank, tasks[i + 1].net);

  // 200 random point pairs on an empty grid: routed cost must equal the
  // Dijkstra oracle (and its closed form) exactly.
  std::mt19937_64 rng(0x107e5u);
  int routes_ok = 0, routes = 0;
  while (routes < 200) {
    std::uniform_int_distribution<int> coord(0, 32);
    Point a{coord(rng), coord(rng)};
    Point b{coord(rng), coord(rng)};
    if (a == b) continue;
    ++routes;
    RoutingGrid grid(32, 32);
    ConnectionTask task;
    task.net = "X";
    task.terminals = {{"T0", TerminalRole::PIN, "X", a},
                      {"T1", TerminalRole::PIN, "X", b}};
    auto wires = route_net(task, grid);
    int got = oracle::path_cost(wires);
    routes_ok += wires.size() == 1 && got == oracle::dijkstra_cost(32, 32, a, b) &&
                 got == oracle::straight_line_cost(a, b) &&
                 oracle::net_connected(wires, {a, b});
  }

  // After conflict cleanup no two nets may share a unit edge, and a second
  // cleanup pass must find nothing left to remove.
  bool exclusive = true;
  for (const char* name : kFixtures) {
    Circuit c = parse_netlist(fixture(name));
    SchematicLayout l = wired(c);
    auto per_net = net_edges(l.wires);
    std::map<UnitEdge, std::string> owner;
    for (const auto& [net, edges] : per_net)
      for (const UnitEdge& e : edges) {
        auto [it, fresh] = owner.emplace(e, net);
        exclusive &= fresh || it->second == net;
      }
    exclusive &= remove_conflicts(l.wires).removed_segments == 0;
  }

  char detail[128];
  std::snprintf(detail, sizeof detail,
                "%d/19 ranks, ties %s, %d/200 shortest routes, tracks %s",
                rank_ok, order_ok ? "by name" : "WRONG", routes_ok,
                exclusive ? "exclusive" : "SHARED");
  report("wiring honors priority order, shortest paths, and exclusive tracks",
         rank_ok == 19 && order_ok && routes_ok == 200 && exclusive, detail);
}

void check_substructures() {
  Circuit ota = parse_netlist(fixture("ota5t.sp"));
  std::multiset<SubstructureKind> kinds;
  for (const auto& m : detect(ota)) kinds.insert(m.kind);
  bool ota_ok =
      kinds == std::multiset<SubstructureKind>{
                   SubstructureKind::DIFFERENTIAL_PAIR,
                   SubstructureKind::CURRENT_MIRROR,
                   SubstructureKind::SINGLE_CURRENT_SOURCE};

  std::mt19937_64 rng(0x50b5u);
  int sound = 0, matches = 0;
  bool disjoint = true;
  for (int trial = 0; trial < 1000; ++trial) {
    Circuit c = parse_netlist(oracle::random_circuit_text(rng));
    std::set<std::string> consumed;
    for (const auto& m : detect(c)) {
      ++matches;
      for (const auto& member : m.members)
        disjoint &= consumed.insert(member.first).second;
      const Device& a = *c.device(m.members[0].first);
      bool ok = false;
      switch (m.kind) {
        case SubstructureKind::DIFFERENTIAL_PAIR:
          ok = oracle::diff_pair(c, a, *c.device(m.members[1].first));
          break;
        case SubstructureKind::CURRENT_MIRROR:
          ok = oracle::current_mirror(c, a, *c.device(m.members[1].first));
          break;
        case SubstructureKind::TWO_TRANSISTOR_CASCODE:
          ok = oracle::cascode_stack(c, a, *c.device(m.members[1].first));
          break;
        case SubstructureKind::DIODE_CONNECTED:
          ok = oracle::diode_connected(c, a);
          break;
        case SubstructureKind::SINGLE_CURRENT_SOURCE:
          ok = oracle::single_source(c, a);
          break;
        case SubstructureKind::SINGLE_CASCODE:
          ok = !oracle::diode_connected(c, a) && !oracle::single_source(c, a);
          break;
      }
      sound += ok;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "ota kinds %s, %d/%d random matches sound, membership %s",
                ota_ok ? "exact" : "WRONG", sound, matches,
                disjoint ? "disjoint" : "OVERLAPPING");
  report("recognized substructures satisfy their defining rules",
         ota_ok && sound == matches && disjoint, detail);
}

void check_loop_budgets() {
  Circuit c = parse_netlist(fixture("ota5t.sp"));
  SchematicLayout base = wired(c);
  AgentConfig cfg;  // 10 placement, 20 wiring

  auto nb1 = MockBackend::never_accepting();
  LoopResult stubborn_place = run_placement_loop(c, base, cfg, *nb1);
  auto nb2 = MockBackend::never_accepting();
  LoopResult stubborn_wire = run_wiring_loop(c, base, cfg, *nb2);
  bool exhaust_ok =
      stubborn_place.transcript.iterations.size() == 10 &&
      stubborn_place.transcript.status == LoopStatus::BUDGET_EXHAUSTED &&
      stubborn_wire.transcript.iterations.size() == 20 &&
      stubborn_wire.transcript.status == LoopStatus::BUDGET_EXHAUSTED;

  auto ab1 = MockBackend::always_accepting();
  LoopResult eager_place = run_placement_loop(c, base, cfg, *ab1);
  auto ab2 = MockBackend::always_accepting();
  LoopResult eager_wire = run_wiring_loop(c, base, cfg, *ab2);
  bool accept_ok = eager_place.transcript.iterations.size() == 1 &&
                   eager_place.transcript.status == LoopStatus::ACCEPTED &&
                   eager_wire.transcript.iterations.size() == 1 &&
                   eager_wire.transcript.status == LoopStatus::ACCEPTED;

  int replayed = 0, snapshots = 0;
  for (const AgentTranscript* t :
       {&stubborn_place.transcript, &stubborn_wire.transcript,
        &eager_place.transcript, &eager_wire.transcript}) {
    for (const IterationRecord& rec : t->iterations) {
      ++snapshots;
      replayed += render_svg(read_layout(rec.layout_json)) == rec.image_svg;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "refusal runs 10/20, accept runs 1/1: %s; %d/%d snapshots "
                "re-render byte-identical",
                exhaust_ok && accept_ok ? "yes" : "NO", replayed, snapshots);
  report("agent loops spend exactly their budgets and replay from transcripts",
         exhaust_ok && accept_ok && replayed == snapshots, detail);
}

struct RunArtifacts {
  std::string layout_bytes;
  std::string svg;
  std::string report_json;
  std::string route_json;
};

RunArtifacts full_run(const std::string& netlist, uint64_t seed) {
  Circuit c = parse_netlist(netlist);
  auto matches = detect(c);
  RoutingReport rr;
  SchematicLayout l = wire_layout(c, initial_place(c, matches), &rr);
  AgentConfig cfg;
  cfg.seed = seed;
  auto backend = MockBackend::seeded(seed);
  l = run_placement_loop(c, l, cfg, *backend).layout;
  l = run_wiring_loop(c, l, cfg, *backend).layout;
  EvalReport er = check_correctness(c, l);
  er.aesthetics = score_aesthetics(l, matches);
  return {write_layout(l), render_svg(l), er.to_json(), rr.to_json()};
}

void check_determinism() {
  bool identical = true;
  for (const char* name : kFixtures) {
    RunArtifacts a = full_run(fixture(name), 7);
    RunArtifacts b = full_run(fixture(name), 7);
    identical &= a.layout_bytes == b.layout_bytes && a.svg == b.svg &&
                 a.report_json == b.report_json && a.route_json == b.route_json;
  }

  // Committed reference images must match a fresh render bit for bit.
  std::string ref = default_asset_dir() + "/reference";
  bool golden = true;
  for (const char* stem : {"good", "bad"}) {
    SchematicLayout l =
        read_layout(read_text_file(ref + "/" + stem + ".layout.json"));
    golden &= render_svg(l) == read_text_file(ref + "/" + stem + ".svg");
  }
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "seeded reruns %s, committed images %s",
                identical ? "byte-identical" : "DIVERGED",
                golden ? "stable" : "STALE");
  report("seeded runs repeat byte-for-byte and reference images stay stable",
         identical && golden, detail);
}

std::string g_trial_table;

void check_trial_table() {
  std::vector<RunSummary> rows;
  for (const char* name : kFixtures) {
    Circuit c = parse_netlist(fixture(name));
    auto matches = detect(c);
    SchematicLayout base = wired(c);
    std::vector<TrialResult> trials;
    for (int t = 0; t < 10; ++t) {
      uint64_t seed = 0xbeefULL * 1000 + uint64_t(t) * 97 + rows.size();
      AgentConfig cfg;
      cfg.seed = seed;
      auto backend = MockBackend::seeded(seed);
      LoopResult place = run_placement_loop(c, base, cfg, *backend);
      LoopResult wire = run_wiring_loop(c, place.layout, cfg, *backend);
      TrialResult tr;
      tr.report = check_correctness(c, wire.layout);
      tr.report.aesthetics = score_aesthetics(wire.layout, matches);
      tr.place_iters = int(place.transcript.iterations.size());
      tr.wire_iters = int(wire.transcript.iterations.size());
      trials.push_back(std::move(tr));
    }
    std::string stem(name);
    rows.push_back(summarize_trials(stem.substr(0, stem.find('.')), trials));
  }
  g_trial_table = format_summary_table(rows);

  const char* columns[] = {"Circuit", "Correctness", "Aesthetics proxy",
                           "Avg. Iter. for Placement", "Avg. Iter. for Wiring"};
  bool ok = true;
  for (const char* col : columns)
    ok &= g_trial_table.find(col) != std::string::npos;
  for (const char* stem : {"inverter", "ota5t", "telescopic"})
    ok &= g_trial_table.find(stem) != std::string::npos;
  for (const RunSummary& r : rows) ok &= r.trials == 10;
  report("ten-trial summaries print every expected column",
         ok, ok ? "all columns and rows present (values indicative only)"
                : "table malformed");
}

/// Coordinate-free view of an evaluation: verdict, named violations, scores.
struct Shape {
  bool correct;
  std::vector<std::string> names;
  AestheticsScore aes;

  bool operator==(const Shape& o) const {
    return correct == o.correct && names == o.names &&
           aes.symmetry == o.aes.symmetry && aes.alignment == o.aes.alignment &&
           aes.crossings == o.aes.crossings &&
           aes.total_wire_length == o.aes.total_wire_length &&
           aes.bends == o.aes.bends && aes.composite == o.aes.composite;
  }
};

Shape shape_of(const Circuit& c, const SchematicLayout& l) {
  EvalReport r = check_correctness(c, l);
  Shape s;
  s.correct = r.correct;
  for (const auto& f : r.connectivity_failures)
    s.names.push_back("net " + f.net + " x" +
                      std::to_string(f.missing_pairs.size()));
  for (const auto& v : r.overlap_violations)
    s.names.push_back("overlap " + std::min(v.a, v.b) + "/" +
                      std::max(v.a, v.b));
  for (const auto& v : r.short_circuits)
    s.names.push_back("short " + std::min(v.net_a, v.net_b) + "/" +
                      std::max(v.net_a, v.net_b));
  std::sort(s.names.begin(), s.names.end());
  s.aes = score_aesthetics(l, detect(c));
  return s;
}

void check_invariance() {
  std::mt19937_64 rng(0x1a5a1u);
  int stable = 0;
  for (int i = 0; i < 100; ++i) {
    Circuit c;
    SchematicLayout l = random_layout(rng, &c);
    Shape base = shape_of(c, l);
    stable += base == shape_of(c, oracle::translate_layout(l, 3, 5)) &&
              base == shape_of(c, oracle::mirror_layout(l));
  }
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "%d/100 layouts evaluate identically when moved or mirrored",
                stable);
  report("evaluation ignores where and which way round the drawing sits",
         stable == 100, detail);
}

}  // namespace

int main() {
  check_pipeline();
  check_connectivity_oracle();
  check_wiring_contract();
  check_substructures();
  check_loop_budgets();
  check_determinism();
  check_trial_table();
  check_invariance();
  if (!g_trial_table.empty()) std::printf("\n%s\n", g_trial_table.c_str());
  std::printf("%s (%d failing)\n", g_failures ? "GATE FAILED" : "GATE CLEAN",
              g_failures);
  return g_failures ? 1 : 0;
}
