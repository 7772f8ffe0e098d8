#include "eeschematic/agent.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>
#include <sstream>

#include "eeschematic/eval.hpp"
#include "eeschematic/render.hpp"
#include "eeschematic/wiring.hpp"
#include "httplib.h"
#include "nlohmann/json.hpp"

namespace eeschematic {

using ordered_json = nlohmann::ordered_json;

const char* phase_name(Phase p) {
  return p == Phase::PLACEMENT ? "placement" : "wiring";
}

const char* loop_status_name(LoopStatus s) {
  switch (s) {
    case LoopStatus::ACCEPTED: return "ACCEPTED";
    case LoopStatus::BUDGET_EXHAUSTED: return "BUDGET_EXHAUSTED";
    case LoopStatus::BACKEND_ERROR: return "BACKEND_ERROR";
  }
  return "?";
}

void AgentConfig::validate() const {
  if (max_place_iter < 1)
    throw Error(ErrorCode::ConfigError, "must be >= 1", 0, 0,
                "limits.place_iter");
  if (max_wire_iter < 1)
    throw Error(ErrorCode::ConfigError, "must be >= 1", 0, 0,
                "limits.wire_iter");
  if (history_window < 0)
    throw Error(ErrorCode::ConfigError, "must be >= 0", 0, 0,
                "history.window");
}

// ---------------------------------------------------------------------------
// Prompt assembly

namespace {

void replace_all(std::string& text, const std::string& token,
                 const std::string& value) {
  size_t pos = 0;
  while ((pos = text.find(token, pos)) != std::string::npos) {
    text.replace(pos, token.size(), value);
    pos += value.size();
  }
}

std::string examples_block(const std::vector<ExampleDigest>& examples) {
  std::ostringstream os;
  for (const auto& ex : examples) {
    os << "### " << substructure_kind_name(ex.kind) << "\n"
       << ex.description << "\nNetlist:\n"
       << ex.netlist_text << "Layout:\n"
       << ex.layout_json;
  }
  return os.str();
}

uint64_t fnv1a(const std::string& data, uint64_t h = 1469598103934665603ULL) {
  for (unsigned char byte : data) {
    h ^= byte;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
  return buf;
}

}  // namespace

PromptBundle build_prompt(const BackendRequest& req, const AssetBundle& assets) {
  PromptBundle out;
  if (req.phase == Phase::PLACEMENT)
    out.text = req.step == Step::DECIDE ? assets.prompt_placement_decide
                                        : assets.prompt_placement_revise;
  else
    out.text = req.step == Step::DECIDE ? assets.prompt_wiring_decide
                                        : assets.prompt_wiring_revise;

  std::string history = "(none)";
  if (!req.history_digest.empty()) {
    std::ostringstream os;
    for (size_t i = 0; i < req.history_digest.size(); ++i)
      os << (i ? "\n" : "") << req.history_digest[i];
    history = os.str();
  }
  replace_all(out.text, "{{NETLIST}}", req.netlist_text);
  replace_all(out.text, "{{DESCRIPTION}}", req.description_text);
  replace_all(out.text, "{{LAYOUT_JSON}}", write_layout(req.layout));
  replace_all(out.text, "{{EXAMPLES}}", examples_block(req.examples));
  replace_all(out.text, "{{GOOD_CAPTION}}", req.reference_good.second);
  replace_all(out.text, "{{BAD_CAPTION}}", req.reference_bad.second);
  replace_all(out.text, "{{HISTORY}}", history);
  replace_all(out.text, "{{DECIDE_REASONING}}", req.decide_reasoning);
  replace_all(out.text, "{{REPAIR_ERROR}}", req.repair_error);

  for (const auto& [label, svg] : req.images) out.attachments.push_back(label);
  out.attachments.push_back("reference_good");
  out.attachments.push_back("reference_bad");
  return out;
}

// ---------------------------------------------------------------------------
// Loop engine

namespace {

struct Candidate {
  SchematicLayout layout;
  int validate_violations = 0;
  int correctness_failures = 0;
  double composite = 0.0;
};

Candidate evaluate_candidate(const Circuit& c, SchematicLayout l,
                             const std::vector<SubstructureMatch>& matches) {
  Candidate cand;
  cand.validate_violations = int(validate_layout(l, c).size());
  EvalReport rep = check_correctness(c, l);
  cand.correctness_failures = int(rep.connectivity_failures.size() +
                                  rep.overlap_violations.size() +
                                  rep.short_circuits.size());
  cand.composite = score_aesthetics(l, matches).composite;
  cand.layout = std::move(l);
  return cand;
}

/// Fewest validate violations, then fewest correctness failures, then
/// highest composite; every tie resolves to the later candidate.
int pick_best(const std::vector<Candidate>& cands) {
  int best = 0;
  for (int i = 1; i < int(cands.size()); ++i) {
    const Candidate& a = cands[i];
    const Candidate& b = cands[best];
    bool better;
    if (a.validate_violations != b.validate_violations)
      better = a.validate_violations < b.validate_violations;
    else if (a.correctness_failures != b.correctness_failures)
      better = a.correctness_failures < b.correctness_failures;
    else
      better = a.composite >= b.composite;
    if (better) best = i;
  }
  return best;
}

std::string circuit_description(const Circuit& c,
                                const std::vector<SubstructureMatch>& matches) {
  std::ostringstream os;
  os << c.devices.size() << " devices, " << c.io_ports.size() << " io ports";
  if (!matches.empty()) {
    os << "; substructures:";
    for (const auto& m : matches) {
      os << ' ' << substructure_kind_name(m.kind) << '(';
      for (size_t i = 0; i < m.members.size(); ++i)
        os << (i ? "," : "") << m.members[i].first;
      os << ')';
    }
  }
  return os.str();
}

std::string sorted_components_json(const SchematicLayout& l) {
  SchematicLayout only;
  only.grid_width = l.grid_width;
  only.grid_height = l.grid_height;
  only.components = l.components;
  return write_layout(only);  // write_layout sorts components by id
}

struct TranscriptWriter {
  std::string dir;  // empty: disabled

  void iteration(const IterationRecord& rec, const std::string& response_text) {
    if (dir.empty()) return;
    char nn[8];
    std::snprintf(nn, sizeof(nn), "%02d", rec.index);
    std::string stem = dir + "/iter_" + nn;
    write_text_file(stem + ".layout.json", rec.layout_json);
    write_text_file(stem + ".svg", rec.image_svg);
    write_text_file(stem + ".response.txt", response_text);
  }

  void summary(const AgentTranscript& tr) {
    if (dir.empty()) return;
    ordered_json doc;
    doc["phase"] = phase_name(tr.phase);
    doc["status"] = loop_status_name(tr.status);
    doc["best_index"] = tr.best_index;
    doc["iterations"] = ordered_json::array();
    for (const auto& rec : tr.iterations)
      doc["iterations"].push_back(
          {{"index", rec.index},
           {"decision", rec.decision == Decision::ACCEPT ? "ACCEPT" : "MODIFY"},
           {"request_digest", rec.request_digest},
           {"revision_applied", rec.revision_applied},
           {"note", rec.note},
           {"validate_violations", rec.validate_violations},
           {"correctness_failures", rec.correctness_failures},
           {"composite", rec.composite}});
    write_text_file(dir + "/summary.json", doc.dump(2) + "\n");
  }
};

LoopResult run_loop(Phase phase, const Circuit& c,
                    const SchematicLayout& input, const AgentConfig& cfg,
                    Backend& backend) {
  cfg.validate();
  AssetBundle assets = load_assets(cfg.asset_dir);
  std::vector<SubstructureMatch> matches = detect(c);
  int max_iter = phase == Phase::PLACEMENT ? cfg.max_place_iter
                                           : cfg.max_wire_iter;

  BackendRequest base;
  base.phase = phase;
  base.netlist_text = write_netlist(c);
  base.description_text = circuit_description(c, matches);
  for (const auto& ex : assets.examples)
    base.examples.push_back(
        {ex.kind, ex.description, ex.netlist_text, write_layout(ex.layout)});
  base.reference_good = {assets.good.svg, assets.good.caption};
  base.reference_bad = {assets.bad.svg, assets.bad.caption};

  std::vector<Candidate> candidates;
  candidates.push_back(evaluate_candidate(c, input, matches));
  std::vector<std::string> history;

  AgentTranscript tr;
  tr.phase = phase;
  tr.status = LoopStatus::BUDGET_EXHAUSTED;
  TranscriptWriter writer{
      cfg.transcript_dir.empty()
          ? std::string{}
          : cfg.transcript_dir + "/" + phase_name(phase)};
  std::string input_components = sorted_components_json(input);

  for (int iter = 1; iter <= max_iter; ++iter) {
    SchematicLayout current = candidates.back().layout;
    IterationRecord rec;
    rec.phase = phase;
    rec.index = iter;
    rec.layout_json = write_layout(current);
    rec.image_svg = render_svg(current);
    rec.validate_violations = candidates.back().validate_violations;
    rec.correctness_failures = candidates.back().correctness_failures;
    rec.composite = candidates.back().composite;

    BackendRequest req = base;
    req.step = Step::DECIDE;
    req.layout = current;
    req.images = {{"current", rec.image_svg}};
    req.history_digest.assign(
        history.end() - std::min<size_t>(history.size(), cfg.history_window),
        history.end());
    rec.request_digest = std::string(phase_name(phase)) + ":DECIDE:" +
                         std::to_string(iter) + ":" +
                         hex64(fnv1a(rec.layout_json, fnv1a(base.netlist_text)));

    std::ostringstream response_log;
    BackendResponse decide;
    try {
      decide = backend.call(req);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BackendError) throw;
      rec.note = e.message();
      response_log << "backend error: " << e.message() << '\n';
      tr.iterations.push_back(rec);
      writer.iteration(rec, response_log.str());
      tr.status = LoopStatus::BACKEND_ERROR;
      break;
    }
    rec.decision = decide.decision;
    rec.reasoning = decide.reasoning;
    response_log << "decision: "
                 << (decide.decision == Decision::ACCEPT ? "ACCEPT" : "MODIFY")
                 << '\n'
                 << decide.reasoning << '\n';

    if (decide.decision == Decision::ACCEPT) {
      tr.iterations.push_back(rec);
      writer.iteration(rec, response_log.str());
      tr.status = LoopStatus::ACCEPTED;
      break;
    }

    // REVISE, with up to two repair re-prompts on schema violations.
    req.step = Step::REVISE;
    req.decide_reasoning = decide.reasoning;
    std::optional<SchematicLayout> revised;
    std::string reject;
    bool backend_failed = false;
    for (int attempt = 0; attempt < 3 && !revised; ++attempt) {
      req.repair_error = reject;
      BackendResponse rv;
      try {
        rv = backend.call(req);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BackendError) throw;
        rec.note = e.message();
        response_log << "backend error: " << e.message() << '\n';
        backend_failed = true;
        break;
      }
      response_log << "revise[" << attempt << "]:\n" << rv.reasoning << '\n';
      if (!rv.reasoning.empty())
        rec.reasoning += "\n--- revise ---\n" + rv.reasoning;
      try {
        SchematicLayout next = read_layout(rv.revised_layout_json);
        if (next.grid_width != current.grid_width ||
            next.grid_height != current.grid_height)
          throw Error(ErrorCode::SchemaError, "grid size must not change", 0,
                      0, "/grid");
        if (phase == Phase::WIRING &&
            sorted_components_json(next) != input_components)
          throw Error(ErrorCode::SchemaError,
                      "components must not change in the wiring phase", 0, 0,
                      "/components");
        revised = std::move(next);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SchemaError) throw;
        reject = e.what();
        response_log << "rejected: " << reject << '\n';
      }
    }
    if (backend_failed) {
      tr.iterations.push_back(rec);
      writer.iteration(rec, response_log.str());
      tr.status = LoopStatus::BACKEND_ERROR;
      break;
    }

    if (revised) {
      SchematicLayout next = phase == Phase::PLACEMENT
                                 ? wire_layout(c, *revised)
                                 : std::move(*revised);
      candidates.push_back(evaluate_candidate(c, std::move(next), matches));
      rec.revision_applied = true;
      const Candidate& now = candidates.back();
      std::ostringstream h;
      h << "iter " << iter << ": revision applied; violations="
        << now.validate_violations << " failures=" << now.correctness_failures
        << " composite=" << now.composite;
      history.push_back(h.str());
    } else {
      rec.note = "revision discarded: " + reject;
      candidates.push_back(candidates.back());
      history.push_back("iter " + std::to_string(iter) +
                        ": revision discarded (" + reject + ")");
    }
    tr.iterations.push_back(rec);
    writer.iteration(rec, response_log.str());
  }

  // ACCEPT stops the search but never overrides best-so-far selection: the
  // loop must not return anything worse than a snapshot it already had.
  int best = pick_best(candidates);
  tr.best_index = best;
  writer.summary(tr);
  return {candidates[best].layout, std::move(tr)};
}

}  // namespace

LoopResult run_placement_loop(const Circuit& c, const SchematicLayout& layout,
                              const AgentConfig& cfg, Backend& backend) {
  return run_loop(Phase::PLACEMENT, c, layout, cfg, backend);
}

LoopResult run_wiring_loop(const Circuit& c, const SchematicLayout& layout,
                           const AgentConfig& cfg, Backend& backend) {
  return run_loop(Phase::WIRING, c, layout, cfg, backend);
}

// ---------------------------------------------------------------------------
// Mock backend

namespace {

/// splitmix64: tiny, stateless-seedable and identical on every platform,
/// unlike the distribution templates in <random>.
uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

const char* edit_name(MockAction::Edit e) {
  switch (e) {
    case MockAction::Edit::None: return "none";
    case MockAction::Edit::Nudge: return "nudge";
    case MockAction::Edit::Garbage: return "garbage";
    case MockAction::Edit::MoveComponent: return "move";
    case MockAction::Edit::DropWire: return "drop-wire";
  }
  return "?";
}

}  // namespace

MockBackend::MockBackend(std::vector<MockAction> script)
    : scripted_(true), script_(std::move(script)) {}

std::unique_ptr<MockBackend> MockBackend::seeded(uint64_t seed) {
  auto b = std::make_unique<MockBackend>(std::vector<MockAction>{});
  b->scripted_ = false;
  b->mode_ = 0;
  b->rng_state_ = seed;
  return b;
}

std::unique_ptr<MockBackend> MockBackend::never_accepting() {
  auto b = seeded(0x6e657665724163ULL);
  b->mode_ = 1;
  return b;
}

std::unique_ptr<MockBackend> MockBackend::always_accepting() {
  auto b = seeded(0);
  b->mode_ = 2;
  return b;
}

MockAction MockBackend::next_seeded_action(const BackendRequest& req) {
  if (mode_ == 2) return MockAction::accept();
  int threshold = 25 + 15 * decide_count_;
  ++decide_count_;
  if (mode_ == 0 && int(splitmix64(rng_state_) % 100) < threshold)
    return MockAction::accept();

  if (req.phase == Phase::PLACEMENT) {
    const auto& comps = req.layout.components;
    if (comps.empty()) return MockAction::modify();
    for (int tries = 0; tries < 32; ++tries) {
      const auto& comp = comps[splitmix64(rng_state_) % comps.size()];
      int dx = int(splitmix64(rng_state_) % 5) - 2;
      int dy = int(splitmix64(rng_state_) % 5) - 2;
      if (dx == 0 && dy == 0) continue;
      Rect box = comp.box();
      if (box.x + dx < 0 || box.x2() + dx > req.layout.grid_width ||
          box.y + dy < 0 || box.y2() + dy > req.layout.grid_height)
        continue;
      return MockAction::modify(MockAction::Edit::Nudge, comp.id, dx, dy);
    }
    return MockAction::modify();
  }
  if (!req.layout.wires.empty() && (splitmix64(rng_state_) & 1))
    return MockAction::modify(MockAction::Edit::DropWire);
  return MockAction::modify();
}

BackendResponse MockBackend::revise(const BackendRequest& req,
                                    const MockAction& action) {
  if (action.edit == MockAction::Edit::Garbage)
    return {Decision::MODIFY, "mock: revision (garbage)", "{{{ not a layout"};

  SchematicLayout out = req.layout;
  switch (action.edit) {
    case MockAction::Edit::Nudge:
    case MockAction::Edit::MoveComponent: {
      PlacedComponent* target = nullptr;
      for (auto& comp : out.components)
        if (comp.id == action.target) target = &comp;
      if (!target && !out.components.empty()) target = &out.components[0];
      if (target) {
        target->pos.x += action.dx;
        target->pos.y += action.dy;
      }
      break;
    }
    case MockAction::Edit::DropWire:
      if (!out.wires.empty()) out.wires.pop_back();
      break;
    default:
      break;
  }
  return {Decision::MODIFY, std::string("mock: revision (") +
                                edit_name(action.edit) + ")",
          write_layout(out)};
}

BackendResponse MockBackend::call(const BackendRequest& req) {
  if (req.step == Step::DECIDE) {
    MockAction action;
    if (scripted_) {
      if (cursor_ >= script_.size())
        throw Error(ErrorCode::ScriptExhausted,
                    "mock script exhausted after " +
                        std::to_string(script_.size()) + " actions");
      action = script_[cursor_++];
    } else {
      action = next_seeded_action(req);
    }
    pending_ = action;
    has_pending_ = true;
    if (action.decision == Decision::ACCEPT)
      return {Decision::ACCEPT, "mock: current layout is acceptable", ""};
    return {Decision::MODIFY, "mock: requesting a revision", ""};
  }
  if (!has_pending_)
    throw Error(ErrorCode::BackendError, "REVISE request before any DECIDE");
  // Repair re-prompts replay the same pending action, so a Garbage edit
  // stays garbage until the loop's repair budget runs out.
  return revise(req, pending_);
}

// ---------------------------------------------------------------------------
// HTTP backend

std::pair<std::string, std::string> split_http_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0)
    throw Error(ErrorCode::ConfigError,
                "backend url must start with http://", 0, 0, "backend.url");
  std::string rest = url.substr(scheme.size());
  size_t slash = rest.find('/');
  std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  if (host.empty())
    throw Error(ErrorCode::ConfigError, "backend url has no host", 0, 0,
                "backend.url");
  return {host, path};
}

BackendResponse parse_backend_text(const std::string& body) {
  BackendResponse out;
  std::string reasoning = body;

  size_t open = body.find("```");
  if (open != std::string::npos) {
    size_t content = body.find('\n', open);
    if (content != std::string::npos) {
      ++content;
      size_t close = body.find("```", content);
      if (close != std::string::npos) {
        out.revised_layout_json = body.substr(content, close - content);
        size_t tail = body.find('\n', close);
        reasoning = body.substr(0, open) +
                    (tail == std::string::npos ? "" : body.substr(tail + 1));
      }
    }
  }

  std::istringstream in(reasoning);
  std::string line;
  bool decided = false;
  while (!decided && std::getline(in, line)) {
    std::string token;
    for (char ch : line)
      if (!std::isspace(static_cast<unsigned char>(ch)))
        token += char(std::toupper(static_cast<unsigned char>(ch)));
    if (token == "ACCEPT" || token == "DECISION:ACCEPT") {
      out.decision = Decision::ACCEPT;
      decided = true;
    } else if (token == "MODIFY" || token == "DECISION:MODIFY") {
      out.decision = Decision::MODIFY;
      decided = true;
    }
  }
  out.reasoning = reasoning;
  return out;
}

HttpBackend::HttpBackend(HttpBackendOptions opts) : opts_(std::move(opts)) {
  auto [host, path] = split_http_url(opts_.url);
  host_ = host;
  path_ = path;
}

BackendResponse HttpBackend::call(const BackendRequest& req) {
  AssetBundle assets = load_assets();
  PromptBundle prompt = build_prompt(req, assets);

  httplib::Client client("http://" + host_);
  client.set_connection_timeout(opts_.timeout_sec);
  client.set_read_timeout(opts_.timeout_sec);
  client.set_write_timeout(opts_.timeout_sec);

  httplib::Headers headers;
  if (!opts_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + opts_.api_key);

  httplib::MultipartFormDataItems items;
  items.push_back({"prompt", prompt.text, "", "text/plain"});
  items.push_back({"model", opts_.model, "", "text/plain"});
  items.push_back({"phase", phase_name(req.phase), "", "text/plain"});
  items.push_back(
      {"step", req.step == Step::DECIDE ? "decide" : "revise", "", "text/plain"});
  for (const auto& [label, svg] : req.images)
    items.push_back({"image", svg, label + ".svg", "image/svg+xml"});
  items.push_back({"image", req.reference_good.first, "reference_good.svg",
                   "image/svg+xml"});
  items.push_back({"image", req.reference_bad.first, "reference_bad.svg",
                   "image/svg+xml"});

  auto res = client.Post(path_, headers, items);
  if (!res)
    throw Error(ErrorCode::BackendError,
                "http transport failure: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw Error(ErrorCode::BackendError,
                "http status " + std::to_string(res->status));
  return parse_backend_text(res->body);
}

}  // namespace eeschematic
