#pragma once

#include <string>
#include <vector>

#include "eeschematic/layout.hpp"
#include "eeschematic/netlist.hpp"
#include "eeschematic/substructure.hpp"

namespace eeschematic {

struct ConnectivityFailure {
  std::string net;
  /// Terminal pairs ("DEV:ROLE") that should be geometrically connected but
  /// are not.
  std::vector<std::pair<std::string, std::string>> missing_pairs;
};

struct OverlapViolation {
  std::string a;  // component id or "wire:<net>"
  std::string b;
  Point at;
};

struct ShortCircuit {
  std::string net_a;
  std::string net_b;
  Point cell;
};

struct AestheticsScore {
  double symmetry = 1.0;   // mirror-placed fraction of pair matches
  double alignment = 1.0;  // components sharing a row/column with another
  int crossings = 0;
  int total_wire_length = 0;  // unit edges
  int bends = 0;
  double composite = 1.0;
};

struct EvalReport {
  bool correct = false;
  std::vector<ConnectivityFailure> connectivity_failures;
  std::vector<OverlapViolation> overlap_violations;
  std::vector<ShortCircuit> short_circuits;
  AestheticsScore aesthetics;

  std::string to_json() const;
};

/// Correctness per the wire-graph semantics: every net's terminals must lie
/// in one connected component of its wire graph (same-net unit edges plus
/// coincident points); component boxes must not overlap each other or be
/// traversed by wires at non-anchor points; no unit edge may be shared
/// lengthwise by two nets and no wire may touch another net's terminal.
EvalReport check_correctness(const Circuit& c, const SchematicLayout& l);

/// Computable aesthetics proxies (the composite weighs symmetry 0.4,
/// alignment 0.3, crossings 0.2, wire length 0.1). Deterministic,
/// translation- and mirror-invariant.
AestheticsScore score_aesthetics(const SchematicLayout& l,
                                 const std::vector<SubstructureMatch>& matches);

/// Pair members count as mirror-placed when they share y and rotation and
/// have opposite mirror flags.
bool is_mirror_placement(const PlacedComponent& a, const PlacedComponent& b);

struct TrialResult {
  EvalReport report;
  int place_iters = 0;
  int wire_iters = 0;
};

struct RunSummary {
  std::string circuit;
  int trials = 0;
  int correct_count = 0;
  double avg_place_iters = 0.0;
  double avg_wire_iters = 0.0;
  double avg_aesthetics = 0.0;
  std::vector<TrialResult> per_trial;
};

RunSummary summarize_trials(const std::string& circuit,
                            const std::vector<TrialResult>& trials);

/// Aligned text table with one row per summary; columns mirror the
/// evaluation table shape (Correctness, Aesthetics proxy, Avg. Iter. for
/// Placement, Avg. Iter. for Wiring).
std::string format_summary_table(const std::vector<RunSummary>& rows);
std::string summary_to_json(const RunSummary& s);

}  // namespace eeschematic
