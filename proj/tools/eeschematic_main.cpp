#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "eeschematic/agent.hpp"
#include "eeschematic/assets.hpp"
#include "eeschematic/config.hpp"
#include "eeschematic/eval.hpp"
#include "eeschematic/place.hpp"
#include "eeschematic/render.hpp"
#include "eeschematic/substructure.hpp"
#include "eeschematic/wiring.hpp"
#include "nlohmann/json.hpp"

namespace {

using namespace eeschematic;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitIncorrect = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBackend = 3;

struct CommonFlags {
  std::string config_path;
  std::string backend;
  std::optional<uint64_t> seed;
  std::optional<int> max_place_iter;
  std::optional<int> max_wire_iter;
};

/// defaults < config file < environment < flags.
CliConfig resolve_config(const CommonFlags& flags) {
  CliConfig cfg;
  if (!flags.config_path.empty()) cfg = parse_config_file(flags.config_path, cfg);
  cfg = apply_environment(cfg);
  if (!flags.backend.empty()) cfg.backend_kind = flags.backend;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.max_place_iter) cfg.place_iter = *flags.max_place_iter;
  if (flags.max_wire_iter) cfg.wire_iter = *flags.max_wire_iter;
  cfg.validate();
  return cfg;
}

Circuit load_circuit(const std::string& path) {
  std::string text = read_text_file(path);
  std::vector<Diagnostic> warnings;
  Circuit c = parse_netlist(text, &warnings);
  for (const auto& w : warnings) std::cerr << w.to_string(path) << "\n";
  return c;
}

SchematicLayout load_layout_file(const std::string& path) {
  std::vector<std::string> warnings;
  SchematicLayout l = read_layout(read_text_file(path), &warnings);
  for (const auto& w : warnings) std::cerr << path << ": " << w << "\n";
  return l;
}

std::unique_ptr<Backend> make_backend(const CliConfig& cfg) {
  if (cfg.backend_kind == "mock") return MockBackend::seeded(cfg.seed);
  HttpBackendOptions opts;
  opts.url = cfg.backend_url;
  opts.model = cfg.backend_model;
  opts.timeout_sec = cfg.timeout_sec;
  opts.api_key = cfg.api_key;
  return std::make_unique<HttpBackend>(opts);
}

EvalReport full_report(const Circuit& c, const SchematicLayout& l) {
  EvalReport report = check_correctness(c, l);
  report.aesthetics = score_aesthetics(l, detect(c));
  return report;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

int cmd_gen(const std::string& netlist_path, const CommonFlags& flags,
            const std::string& out_dir, bool no_agent) {
  CliConfig cfg = resolve_config(flags);
  Circuit c = load_circuit(netlist_path);
  std::string circuit_name =
      std::filesystem::path(netlist_path).stem().string();
  std::string run_dir = out_dir + "/" + circuit_name;

  auto matches = detect(c);
  SchematicLayout placed = initial_place(c, matches);
  RoutingReport route_report;
  SchematicLayout wired = wire_layout(c, placed, &route_report);

  SchematicLayout final_layout = wired;
  int place_iters = 0, wire_iters = 0;
  std::string place_status = "SKIPPED", wire_status = "SKIPPED";
  bool backend_failed = false;

  if (!no_agent) {
    AgentConfig agent_cfg;
    agent_cfg.max_place_iter = cfg.place_iter;
    agent_cfg.max_wire_iter = cfg.wire_iter;
    agent_cfg.history_window = cfg.history_window;
    agent_cfg.seed = cfg.seed;
    agent_cfg.asset_dir = cfg.asset_dir;
    agent_cfg.transcript_dir = run_dir;
    auto backend = make_backend(cfg);

    LoopResult place_res = run_placement_loop(c, wired, agent_cfg, *backend);
    place_iters = int(place_res.transcript.iterations.size());
    place_status = loop_status_name(place_res.transcript.status);
    backend_failed |= place_res.transcript.status == LoopStatus::BACKEND_ERROR;

    LoopResult wire_res =
        run_wiring_loop(c, place_res.layout, agent_cfg, *backend);
    wire_iters = int(wire_res.transcript.iterations.size());
    wire_status = loop_status_name(wire_res.transcript.status);
    backend_failed |= wire_res.transcript.status == LoopStatus::BACKEND_ERROR;
    final_layout = wire_res.layout;
  }

  EvalReport report = full_report(c, final_layout);
  write_text_file(run_dir + "/layout.json", write_layout(final_layout));
  write_text_file(run_dir + "/schematic.svg", render_svg(final_layout));
  write_text_file(run_dir + "/report.json", report.to_json());
  write_text_file(run_dir + "/route_report.json", route_report.to_json());

  ordered_json summary;
  summary["circuit"] = circuit_name;
  summary["netlist"] = netlist_path;
  summary["config"] = cfg.echo();
  summary["agent"] = !no_agent;
  summary["placement"] = {{"status", place_status}, {"iterations", place_iters}};
  summary["wiring"] = {{"status", wire_status}, {"iterations", wire_iters}};
  summary["correct"] = report.correct;
  summary["aesthetics_composite"] = report.aesthetics.composite;
  write_text_file(run_dir + "/summary.json", summary.dump(2) + "\n");

  TrialResult trial{report, place_iters, wire_iters};
  std::cout << format_summary_table({summarize_trials(circuit_name, {trial})});
  std::cout << "artifacts: " << run_dir << "\n";

  if (backend_failed) return kExitBackend;
  return report.correct ? 0 : kExitIncorrect;
}

int cmd_check(const std::string& netlist_path, const std::string& layout_path) {
  Circuit c = load_circuit(netlist_path);
  SchematicLayout l = load_layout_file(layout_path);
  EvalReport report = full_report(c, l);
  std::cout << report.to_json();
  return report.correct ? 0 : kExitIncorrect;
}

int cmd_render(const std::string& layout_path, const std::string& out_path,
               int unit_px, bool grid, bool no_labels) {
  SchematicLayout l = load_layout_file(layout_path);
  RenderOptions opts;
  opts.unit_px = unit_px;
  opts.show_grid = grid;
  opts.show_labels = !no_labels;
  emit(out_path, render_svg(l, opts));
  return 0;
}

int cmd_route(const std::string& netlist_path, const std::string& layout_path,
              const std::string& out_path, bool print_report) {
  Circuit c = load_circuit(netlist_path);
  SchematicLayout l = load_layout_file(layout_path);
  RoutingReport report;
  SchematicLayout wired = wire_layout(c, l, &report);
  emit(out_path, write_layout(wired));
  if (print_report) std::cerr << report.to_text();
  return 0;
}

int cmd_examples(const std::string& asset_dir) {
  auto library = example_library(asset_dir.empty() ? default_asset_dir()
                                                   : asset_dir);
  for (const auto& ex : library) {
    std::string first_line = ex.description.substr(0, ex.description.find('\n'));
    std::cout << substructure_kind_name(ex.kind) << ": " << first_line << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netlist-to-schematic compiler"};
  app.require_subcommand(1);

  CommonFlags flags;
  app.add_option("--config", flags.config_path, "config file (TOML-style)");

  // gen
  auto* gen = app.add_subcommand("gen", "full pipeline: place, wire, agent loops, eval");
  std::string gen_netlist, gen_out_dir = "run";
  bool gen_no_agent = false;
  gen->add_option("netlist", gen_netlist, "SPICE netlist file")->required();
  gen->add_option("--backend", flags.backend, "mock | http");
  uint64_t seed_value = 0;
  auto* seed_opt = gen->add_option("--seed", seed_value, "mock backend seed");
  int place_value = 0, wire_value = 0;
  auto* place_opt =
      gen->add_option("--max-place-iter", place_value, "placement budget");
  auto* wire_opt =
      gen->add_option("--max-wire-iter", wire_value, "wiring budget");
  gen->add_option("--out-dir", gen_out_dir, "artifact directory (default run)");
  gen->add_flag("--no-agent", gen_no_agent,
                "stop after deterministic placement and wiring");

  // check
  auto* check = app.add_subcommand("check", "evaluate a layout against its netlist");
  std::string check_netlist, check_layout;
  check->add_option("netlist", check_netlist)->required();
  check->add_option("layout", check_layout)->required();

  // render
  auto* render = app.add_subcommand("render", "render a layout to SVG");
  std::string render_layout, render_out;
  int render_unit = 12;
  bool render_grid = false, render_no_labels = false;
  render->add_option("layout", render_layout)->required();
  render->add_option("-o,--out", render_out, "output file (default stdout)");
  render->add_option("--unit-px", render_unit, "pixels per grid unit");
  render->add_flag("--grid", render_grid, "draw grid lines");
  render->add_flag("--no-labels", render_no_labels, "hide net labels");

  // route
  auto* route = app.add_subcommand("route", "wire a placed layout");
  std::string route_netlist, route_layout, route_out;
  bool route_report = false;
  route->add_option("netlist", route_netlist)->required();
  route->add_option("layout", route_layout)->required();
  route->add_option("-o,--out", route_out, "output file (default stdout)");
  route->add_flag("--report", route_report, "print the routing report to stderr");

  // examples
  auto* examples = app.add_subcommand("examples", "list the substructure example assets");
  std::string examples_dir;
  examples->add_option("--asset-dir", examples_dir, "asset directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (seed_opt->count()) flags.seed = seed_value;
    if (place_opt->count()) flags.max_place_iter = place_value;
    if (wire_opt->count()) flags.max_wire_iter = wire_value;
    if (gen->parsed())
      return cmd_gen(gen_netlist, flags, gen_out_dir, gen_no_agent);
    if (check->parsed()) return cmd_check(check_netlist, check_layout);
    if (render->parsed())
      return cmd_render(render_layout, render_out, render_unit, render_grid,
                        render_no_labels);
    if (route->parsed())
      return cmd_route(route_netlist, route_layout, route_out, route_report);
    if (examples->parsed()) return cmd_examples(examples_dir);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BackendError) {
      std::cerr << e.what() << "\n";
      return kExitBackend;
    }
    // Parser errors carry file positions; everything else is usage/config.
    if (e.line() > 0 && gen->parsed())
      std::cerr << e.diagnostic(gen_netlist) << "\n";
    else if (e.line() > 0 && check->parsed())
      std::cerr << e.diagnostic(check_netlist) << "\n";
    else if (e.line() > 0 && route->parsed())
      std::cerr << e.diagnostic(route_netlist) << "\n";
    else
      std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
