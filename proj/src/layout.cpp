#include "eeschematic/layout.hpp"

#include <algorithm>
#include <set>

#include "nlohmann/json.hpp"

namespace eeschematic {

namespace {

using ordered_json = nlohmann::ordered_json;
using nlohmann::json;

constexpr char kPortPrefix[] = "PORT_";

void require(bool ok, const std::string& pointer, const std::string& what) {
  if (!ok)
    throw Error(ErrorCode::SchemaError, pointer + ": " + what, 0, 0, pointer);
}

int int_field(const json& obj, const std::string& key,
              const std::string& pointer) {
  require(obj.contains(key), pointer, "missing required field '" + key + "'");
  const json& v = obj[key];
  require(v.is_number_integer(), pointer + "/" + key, "expected an integer");
  return v.get<int>();
}

std::string string_field(const json& obj, const std::string& key,
                         const std::string& pointer) {
  require(obj.contains(key), pointer, "missing required field '" + key + "'");
  const json& v = obj[key];
  require(v.is_string(), pointer + "/" + key, "expected a string");
  return v.get<std::string>();
}

void warn_extras(const json& obj, const std::set<std::string>& known,
                 const std::string& pointer,
                 std::vector<std::string>* warnings) {
  if (!warnings) return;
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key()))
      warnings->push_back(pointer + ": ignoring unknown field '" + it.key() +
                          "'");
}

}  // namespace

std::string port_component_id(const std::string& net) {
  return kPortPrefix + net;
}

std::optional<std::string> port_net_of(const std::string& component_id) {
  if (component_id.rfind(kPortPrefix, 0) == 0 &&
      component_id.size() > sizeof(kPortPrefix) - 1)
    return component_id.substr(sizeof(kPortPrefix) - 1);
  return std::nullopt;
}

const PlacedComponent* SchematicLayout::component(const std::string& id) const {
  for (const auto& c : components)
    if (c.id == id) return &c;
  return nullptr;
}

const char* violation_kind_name(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::Overlap: return "Overlap";
    case Violation::Kind::OutOfBounds: return "OutOfBounds";
    case Violation::Kind::UnknownDevice: return "UnknownDevice";
    case Violation::Kind::UnknownNet: return "UnknownNet";
    case Violation::Kind::DuplicateId: return "DuplicateId";
    case Violation::Kind::WireShape: return "WireShape";
  }
  return "?";
}

std::vector<Violation> validate_layout(const SchematicLayout& l,
                                       const Circuit* c) {
  std::vector<Violation> out;
  auto add = [&](Violation::Kind k, const std::string& subject,
                 const std::string& msg) {
    out.push_back({k, subject, msg});
  };

  Rect canvas{0, 0, l.grid_width, l.grid_height};
  std::set<std::string> ids;
  for (const auto& comp : l.components) {
    if (!ids.insert(comp.id).second)
      add(Violation::Kind::DuplicateId, comp.id,
          "component id '" + comp.id + "' appears more than once");
    Rect box = comp.box();
    if (box.x < 0 || box.y < 0 || box.x2() > canvas.w || box.y2() > canvas.h)
      add(Violation::Kind::OutOfBounds, comp.id,
          comp.id + " extends outside the " + std::to_string(canvas.w) + "x" +
              std::to_string(canvas.h) + " grid");
  }
  for (size_t i = 0; i < l.components.size(); ++i)
    for (size_t j = i + 1; j < l.components.size(); ++j)
      if (l.components[i].box().overlaps(l.components[j].box()))
        add(Violation::Kind::Overlap, l.components[i].id,
            l.components[i].id + " overlaps " + l.components[j].id);

  for (const auto& w : l.wires) {
    if (w.points.size() < 2) {
      add(Violation::Kind::WireShape, w.net,
          "wire on net '" + w.net + "' has fewer than 2 points");
      continue;
    }
    for (size_t i = 0; i + 1 < w.points.size(); ++i) {
      Point a = w.points[i], b = w.points[i + 1];
      if (a == b)
        add(Violation::Kind::WireShape, w.net,
            "wire on net '" + w.net + "' repeats a point");
      else if (a.x != b.x && a.y != b.y)
        add(Violation::Kind::WireShape, w.net,
            "wire on net '" + w.net + "' has a diagonal segment");
    }
    for (const Point& p : w.points)
      if (!canvas.contains(p)) {
        add(Violation::Kind::OutOfBounds, w.net,
            "wire on net '" + w.net + "' leaves the grid");
        break;
      }
  }
  for (const auto& lab : l.labels)
    if (!canvas.contains(lab.pos))
      add(Violation::Kind::OutOfBounds, lab.net,
          "label for net '" + lab.net + "' lies outside the grid");

  if (c) {
    for (const auto& comp : l.components) {
      if (auto net = port_net_of(comp.id)) {
        if (comp.kind != SymbolKind::PORT)
          add(Violation::Kind::UnknownDevice, comp.id,
              comp.id + " must have kind PORT");
        else if (!c->net(*net))
          add(Violation::Kind::UnknownNet, comp.id,
              "port references unknown net '" + *net + "'");
        continue;
      }
      const Device* dev = c->device(comp.id);
      if (!dev) {
        add(Violation::Kind::UnknownDevice, comp.id,
            "component '" + comp.id + "' is not in the circuit");
        continue;
      }
      if (symbol_kind_of(dev->kind) != comp.kind)
        add(Violation::Kind::UnknownDevice, comp.id,
            comp.id + " has kind " + symbol_kind_name(comp.kind) +
                " but the circuit says " + device_kind_name(dev->kind));
    }
    for (const auto& w : l.wires)
      if (!c->net(w.net))
        add(Violation::Kind::UnknownNet, w.net,
            "wire references unknown net '" + w.net + "'");
    for (const auto& lab : l.labels)
      if (!c->net(lab.net))
        add(Violation::Kind::UnknownNet, lab.net,
            "label references unknown net '" + lab.net + "'");
  }
  return out;
}

std::string write_layout(const SchematicLayout& l) {
  ordered_json doc;
  doc["grid"] = {{"width", l.grid_width}, {"height", l.grid_height}};

  std::vector<const PlacedComponent*> comps;
  comps.reserve(l.components.size());
  for (const auto& c : l.components) comps.push_back(&c);
  std::sort(comps.begin(), comps.end(),
            [](const PlacedComponent* a, const PlacedComponent* b) {
              return a->id < b->id;
            });

  doc["components"] = ordered_json::array();
  for (const PlacedComponent* c : comps) {
    ordered_json jc;
    jc["id"] = c->id;
    jc["kind"] = symbol_kind_name(c->kind);
    jc["x"] = c->pos.x;
    jc["y"] = c->pos.y;
    jc["rot"] = c->orient.rot;
    jc["mirror"] = c->orient.mirror;
    doc["components"].push_back(std::move(jc));
  }

  doc["wires"] = ordered_json::array();
  for (const auto& w : l.wires) {
    ordered_json jw;
    jw["net"] = w.net;
    jw["points"] = ordered_json::array();
    for (const Point& p : w.points) jw["points"].push_back({p.x, p.y});
    doc["wires"].push_back(std::move(jw));
  }

  if (!l.labels.empty()) {
    doc["labels"] = ordered_json::array();
    for (const auto& lab : l.labels)
      doc["labels"].push_back(
          {{"net", lab.net}, {"x", lab.pos.x}, {"y", lab.pos.y}});
  }
  return doc.dump(2) + "\n";
}

SchematicLayout read_layout(const std::string& json_text,
                            std::vector<std::string>* warnings) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError,
                std::string("layout is not valid JSON: ") + e.what());
  }
  require(doc.is_object(), "", "layout root must be an object");
  warn_extras(doc, {"grid", "components", "wires", "labels"}, "", warnings);

  SchematicLayout l;
  require(doc.contains("grid"), "", "missing required field 'grid'");
  const json& grid = doc["grid"];
  require(grid.is_object(), "/grid", "expected an object");
  l.grid_width = int_field(grid, "width", "/grid");
  l.grid_height = int_field(grid, "height", "/grid");
  require(l.grid_width > 0 && l.grid_height > 0, "/grid",
          "grid dimensions must be positive");
  warn_extras(grid, {"width", "height"}, "/grid", warnings);

  require(doc.contains("components"), "",
          "missing required field 'components'");
  require(doc["components"].is_array(), "/components", "expected an array");
  size_t ci = 0;
  for (const json& jc : doc["components"]) {
    std::string ptr = "/components/" + std::to_string(ci++);
    require(jc.is_object(), ptr, "expected an object");
    PlacedComponent c;
    c.id = string_field(jc, "id", ptr);
    c.kind = [&] {
      std::string kind = string_field(jc, "kind", ptr);
      try {
        return symbol_kind_from_name(kind);
      } catch (const Error&) {
        throw Error(ErrorCode::SchemaError,
                    ptr + "/kind: unknown component kind '" + kind + "'", 0, 0,
                    ptr + "/kind");
      }
    }();
    c.pos = {int_field(jc, "x", ptr), int_field(jc, "y", ptr)};
    c.orient.rot = int_field(jc, "rot", ptr);
    require(valid_rotation(c.orient.rot), ptr + "/rot",
            "rotation must be 0, 90, 180 or 270");
    require(jc.contains("mirror"), ptr, "missing required field 'mirror'");
    require(jc["mirror"].is_boolean(), ptr + "/mirror", "expected a boolean");
    c.orient.mirror = jc["mirror"].get<bool>();
    warn_extras(jc, {"id", "kind", "x", "y", "rot", "mirror"}, ptr, warnings);
    l.components.push_back(std::move(c));
  }

  require(doc.contains("wires"), "", "missing required field 'wires'");
  require(doc["wires"].is_array(), "/wires", "expected an array");
  size_t wi = 0;
  for (const json& jw : doc["wires"]) {
    std::string ptr = "/wires/" + std::to_string(wi++);
    require(jw.is_object(), ptr, "expected an object");
    WirePolyline w;
    w.net = string_field(jw, "net", ptr);
    require(jw.contains("points"), ptr, "missing required field 'points'");
    require(jw["points"].is_array(), ptr + "/points", "expected an array");
    size_t pi = 0;
    for (const json& jp : jw["points"]) {
      std::string pptr = ptr + "/points/" + std::to_string(pi++);
      require(jp.is_array() && jp.size() == 2 && jp[0].is_number_integer() &&
                  jp[1].is_number_integer(),
              pptr, "expected an [x, y] integer pair");
      w.points.push_back({jp[0].get<int>(), jp[1].get<int>()});
    }
    require(w.points.size() >= 2, ptr + "/points",
            "a wire needs at least 2 points");
    warn_extras(jw, {"net", "points"}, ptr, warnings);
    l.wires.push_back(std::move(w));
  }

  if (doc.contains("labels")) {
    require(doc["labels"].is_array(), "/labels", "expected an array");
    size_t li = 0;
    for (const json& jl : doc["labels"]) {
      std::string ptr = "/labels/" + std::to_string(li++);
      require(jl.is_object(), ptr, "expected an object");
      Label lab;
      lab.net = string_field(jl, "net", ptr);
      lab.pos = {int_field(jl, "x", ptr), int_field(jl, "y", ptr)};
      warn_extras(jl, {"net", "x", "y"}, ptr, warnings);
      l.labels.push_back(std::move(lab));
    }
  }
  return l;
}

}  // namespace eeschematic
