// Python surface: thin, text-first wrappers over the pipeline. Layouts and
// reports cross the boundary as their canonical JSON strings so the Python
// side needs no mirrored class hierarchy.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
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

namespace py = pybind11;

namespace {

using namespace eeschematic;

std::string place_json(const std::string& netlist_text) {
  Circuit c = parse_netlist(netlist_text);
  return write_layout(initial_place(c, detect(c)));
}

std::string route_json(const std::string& netlist_text,
                       const std::string& layout_json) {
  Circuit c = parse_netlist(netlist_text);
  return write_layout(wire_layout(c, read_layout(layout_json)));
}

std::string render(const std::string& layout_json, int unit_px, bool labels,
                   bool grid) {
  RenderOptions opts;
  opts.unit_px = unit_px;
  opts.show_labels = labels;
  opts.show_grid = grid;
  return render_svg(read_layout(layout_json), opts);
}

std::string check(const std::string& netlist_text,
                  const std::string& layout_json) {
  Circuit c = parse_netlist(netlist_text);
  SchematicLayout l = read_layout(layout_json);
  EvalReport report = check_correctness(c, l);
  report.aesthetics = score_aesthetics(l, detect(c));
  return report.to_json();
}

std::vector<std::pair<std::string, std::vector<std::string>>> detect_kinds(
    const std::string& netlist_text) {
  Circuit c = parse_netlist(netlist_text);
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const auto& m : detect(c)) {
    std::vector<std::string> members;
    for (const auto& [name, role] : m.members) members.push_back(name);
    out.emplace_back(substructure_kind_name(m.kind), std::move(members));
  }
  return out;
}

py::dict compile_netlist(const std::string& netlist_text, bool agent,
                         uint64_t seed, int max_place_iter, int max_wire_iter,
                         const std::string& asset_dir) {
  Circuit c = parse_netlist(netlist_text);
  auto matches = detect(c);
  RoutingReport route_report;
  SchematicLayout layout =
      wire_layout(c, initial_place(c, matches), &route_report);

  int place_iters = 0, wire_iters = 0;
  if (agent) {
    AgentConfig cfg;
    cfg.max_place_iter = max_place_iter;
    cfg.max_wire_iter = max_wire_iter;
    cfg.seed = seed;
    cfg.asset_dir = asset_dir;
    cfg.validate();
    auto backend = MockBackend::seeded(seed);
    LoopResult place = run_placement_loop(c, layout, cfg, *backend);
    place_iters = int(place.transcript.iterations.size());
    LoopResult wire = run_wiring_loop(c, place.layout, cfg, *backend);
    wire_iters = int(wire.transcript.iterations.size());
    layout = wire.layout;
  }

  EvalReport report = check_correctness(c, layout);
  report.aesthetics = score_aesthetics(layout, matches);

  py::dict out;
  out["layout"] = write_layout(layout);
  out["svg"] = render_svg(layout);
  out["report"] = report.to_json();
  out["route_report"] = route_report.to_json();
  out["correct"] = report.correct;
  out["place_iterations"] = place_iters;
  out["wire_iterations"] = wire_iters;
  return out;
}

std::vector<std::pair<std::string, std::string>> examples(
    const std::string& asset_dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& ex : example_library(
           asset_dir.empty() ? default_asset_dir() : asset_dir))
    out.emplace_back(substructure_kind_name(ex.kind), ex.description);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Netlist-to-schematic compiler: parse SPICE text, recognize "
            "analog substructures, place symbols, route wires, render SVG, "
            "and score the result.";

  py::register_exception<Error>(m, "CompileError");

  m.def("canonical_netlist",
        [](const std::string& text) { return write_netlist(parse_netlist(text)); },
        py::arg("netlist"),
        "Parse SPICE netlist text and return its canonical form.");
  m.def("detect_kinds", &detect_kinds, py::arg("netlist"),
        "Recognized substructures as (kind, [device, ...]) pairs.");
  m.def("place", &place_json, py::arg("netlist"),
        "Deterministic initial placement; returns layout JSON.");
  m.def("route", &route_json, py::arg("netlist"), py::arg("layout"),
        "Priority-ordered wire routing over a placed layout JSON.");
  m.def("render", &render, py::arg("layout"), py::arg("unit_px") = 12,
        py::arg("labels") = true, py::arg("grid") = false,
        "Render layout JSON to a deterministic SVG string.");
  m.def("check", &check, py::arg("netlist"), py::arg("layout"),
        "Correctness and aesthetics report (JSON) for a drawn layout.");
  m.def("compile", &compile_netlist, py::arg("netlist"),
        py::arg("agent") = false, py::arg("seed") = 0,
        py::arg("max_place_iter") = 10, py::arg("max_wire_iter") = 20,
        py::arg("asset_dir") = std::string(),
        "Full pipeline; optionally refine via the seeded offline agent loop.");
  m.def("examples", &examples, py::arg("asset_dir") = std::string(),
        "The bundled substructure examples as (kind, description) pairs.");
}
