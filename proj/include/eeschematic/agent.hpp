#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "eeschematic/assets.hpp"
#include "eeschematic/layout.hpp"
#include "eeschematic/netlist.hpp"
#include "eeschematic/substructure.hpp"

namespace eeschematic {

enum class Phase { PLACEMENT, WIRING };
enum class Step { DECIDE, REVISE };
enum class Decision { ACCEPT, MODIFY };

const char* phase_name(Phase p);

struct ExampleDigest {
  SubstructureKind kind;
  std::string description;
  std::string netlist_text;
  std::string layout_json;
};

struct BackendRequest {
  Phase phase = Phase::PLACEMENT;
  Step step = Step::DECIDE;
  std::vector<std::pair<std::string, std::string>> images;  // label, svg
  SchematicLayout layout;
  std::string netlist_text;
  std::string description_text;
  std::vector<ExampleDigest> examples;  // six, fixed order
  std::pair<std::string, std::string> reference_good;  // svg, caption
  std::pair<std::string, std::string> reference_bad;
  std::vector<std::string> history_digest;  // last K iteration summaries
  std::string decide_reasoning;  // REVISE: reasoning from the DECIDE step
  std::string repair_error;      // REVISE re-prompt: schema error quoted back
};

struct BackendResponse {
  Decision decision = Decision::MODIFY;
  std::string reasoning;
  std::string revised_layout_json;  // REVISE only; parsed by the loop
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResponse call(const BackendRequest& req) = 0;
};

struct PromptBundle {
  std::string text;
  /// Attachment manifest: labels of the images sent with the prompt.
  std::vector<std::string> attachments;
};

/// Deterministic template expansion over the asset bundle's prompt
/// templates. Always embeds all six example digests in fixed kind order and
/// both reference captions.
PromptBundle build_prompt(const BackendRequest& req, const AssetBundle& assets);

struct AgentConfig {
  int max_place_iter = 10;
  int max_wire_iter = 20;
  int history_window = 3;
  uint64_t seed = 0;
  std::string asset_dir;       // empty: default_asset_dir()
  std::string transcript_dir;  // empty: keep the transcript in memory only

  void validate() const;  // throws ConfigError on out-of-range values
};

enum class LoopStatus { ACCEPTED, BUDGET_EXHAUSTED, BACKEND_ERROR };

const char* loop_status_name(LoopStatus s);

struct IterationRecord {
  Phase phase;
  int index = 0;  // dense from 1
  Decision decision = Decision::MODIFY;
  std::string request_digest;
  std::string reasoning;
  bool revision_applied = false;
  std::string note;  // discard reason, backend error text, ...
  std::string layout_json;  // snapshot shown to the backend this iteration
  std::string image_svg;    // rendered from that snapshot
  int validate_violations = 0;
  int correctness_failures = 0;
  double composite = 0.0;
};

struct AgentTranscript {
  Phase phase;
  LoopStatus status = LoopStatus::BUDGET_EXHAUSTED;
  std::vector<IterationRecord> iterations;
  int best_index = 0;  // iteration whose layout was returned (0 = input)
};

struct LoopResult {
  SchematicLayout layout;
  AgentTranscript transcript;
};

/// Inner optimization loop for placement: render, DECIDE against the
/// reference examples, on MODIFY ask for a revision (REVISE), validate and
/// re-wire it, keep history, repeat until ACCEPT or the iteration budget.
/// Returns the best layout seen (fewest violations, ties to the latest).
LoopResult run_placement_loop(const Circuit& c, const SchematicLayout& layout,
                              const AgentConfig& cfg, Backend& backend);

/// Same protocol for wiring, except revisions may change only the `wires`
/// array; component edits are rejected as schema violations for this phase.
LoopResult run_wiring_loop(const Circuit& c, const SchematicLayout& layout,
                           const AgentConfig& cfg, Backend& backend);

// ---------------------------------------------------------------------------
// Mock backend

struct MockAction {
  Decision decision = Decision::MODIFY;
  enum class Edit {
    None,          // MODIFY that returns the layout unchanged
    Nudge,         // move `target` (or the first component) by dx,dy
    Garbage,       // unparsable layout text (repair-path exercise)
    MoveComponent, // legal JSON that moves a component (wiring-phase breach)
    DropWire,      // remove the last wire polyline
  };
  Edit edit = Edit::None;
  std::string target;
  int dx = 0;
  int dy = 0;

  static MockAction accept() { return {Decision::ACCEPT, Edit::None, {}, 0, 0}; }
  static MockAction modify(Edit e = Edit::None, std::string target = {},
                           int dx = 0, int dy = 0) {
    return {Decision::MODIFY, e, std::move(target), dx, dy};
  }
};

/// Offline substitute for the multimodal backend. Scripted mode replays one
/// action per iteration (throws ScriptExhausted on underrun); seeded mode
/// derives decisions and in-bounds component nudges from the seed alone, so
/// identical seeds give identical transcripts on every platform.
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::vector<MockAction> script);
  static std::unique_ptr<MockBackend> seeded(uint64_t seed);
  /// Seeded variant that never accepts (budget exhaustion runs).
  static std::unique_ptr<MockBackend> never_accepting();
  static std::unique_ptr<MockBackend> always_accepting();

  BackendResponse call(const BackendRequest& req) override;

 private:
  BackendResponse revise(const BackendRequest& req, const MockAction& action);
  MockAction next_seeded_action(const BackendRequest& req);

  bool scripted_;
  std::vector<MockAction> script_;
  size_t cursor_ = 0;
  MockAction pending_{};
  bool has_pending_ = false;
  uint64_t rng_state_ = 0;
  int decide_count_ = 0;
  int mode_ = 0;  // 0 seeded, 1 never accept, 2 always accept
};

// ---------------------------------------------------------------------------
// HTTP backend

struct HttpBackendOptions {
  std::string url;    // e.g. http://host:port/path
  std::string model;
  int timeout_sec = 60;
  std::string api_key;  // from EESCHEMATIC_API_KEY
};

/// One multipart POST per step (prompt text + SVG images). The response body
/// is scanned for an ACCEPT/MODIFY verdict line and a fenced layout
/// document. Transport and protocol failures raise BackendError.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendOptions opts);
  BackendResponse call(const BackendRequest& req) override;

 private:
  HttpBackendOptions opts_;
  std::string host_;
  std::string path_;
};

/// Parses "http://host:port/path"; throws ConfigError on anything else.
std::pair<std::string, std::string> split_http_url(const std::string& url);

/// Extracts decision + fenced layout from raw backend response text.
BackendResponse parse_backend_text(const std::string& body);

}  // namespace eeschematic
