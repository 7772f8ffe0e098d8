#include "eeschematic/symbols.hpp"

#include <map>

#include "nlohmann/json.hpp"
#include "symbols_data.hpp"

namespace eeschematic {

namespace {

using nlohmann::json;

TerminalRole role_from_name(const std::string& s) {
  if (s == "DRAIN") return TerminalRole::DRAIN;
  if (s == "GATE") return TerminalRole::GATE;
  if (s == "SOURCE") return TerminalRole::SOURCE;
  if (s == "BULK") return TerminalRole::BULK;
  if (s == "POS") return TerminalRole::POS;
  if (s == "NEG") return TerminalRole::NEG;
  if (s == "PIN") return TerminalRole::PIN;
  throw Error(ErrorCode::AssetCorrupt, "unknown terminal role '" + s + "'");
}

SymbolKind kind_from_name(const std::string& s) {
  if (s == "NMOS") return SymbolKind::NMOS;
  if (s == "PMOS") return SymbolKind::PMOS;
  if (s == "RESISTOR") return SymbolKind::RESISTOR;
  if (s == "CAPACITOR") return SymbolKind::CAPACITOR;
  if (s == "VSOURCE") return SymbolKind::VSOURCE;
  if (s == "ISOURCE") return SymbolKind::ISOURCE;
  if (s == "PORT") return SymbolKind::PORT;
  throw Error(ErrorCode::AssetCorrupt, "unknown symbol kind '" + s + "'");
}

std::map<SymbolKind, SymbolDef> parse_symbols(const char* text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::AssetCorrupt,
                std::string("symbol data is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("symbols") ||
      !doc["symbols"].is_array())
    throw Error(ErrorCode::AssetCorrupt,
                "symbol data must be an object with a 'symbols' record list");

  std::map<SymbolKind, SymbolDef> table;
  for (const json& body : doc["symbols"]) {
    if (!body.is_object() || !body.contains("kind") ||
        !body["kind"].is_string())
      throw Error(ErrorCode::AssetCorrupt,
                  "every symbol record needs a 'kind' name");
    std::string kind_name = body["kind"].get<std::string>();
    SymbolDef def;
    def.kind = kind_from_name(kind_name);
    if (table.count(def.kind))
      throw Error(ErrorCode::AssetCorrupt,
                  "duplicate symbol record '" + kind_name + "'");
    if (!body.contains("box") || !body["box"].is_array() ||
        body["box"].size() != 2)
      throw Error(ErrorCode::AssetCorrupt,
                  "symbol '" + kind_name + "' needs a [w,h] box");
    def.width = body["box"][0].get<int>();
    def.height = body["box"][1].get<int>();
    if (def.width <= 0 || def.height <= 0)
      throw Error(ErrorCode::AssetCorrupt,
                  "symbol '" + kind_name + "' box must be positive");

    if (!body.contains("anchors") || !body["anchors"].is_object() ||
        body["anchors"].empty())
      throw Error(ErrorCode::AssetCorrupt,
                  "symbol '" + kind_name + "' needs anchors");
    for (auto a = body["anchors"].begin(); a != body["anchors"].end(); ++a) {
      const json& pt = a.value();
      if (!pt.is_array() || pt.size() != 2)
        throw Error(ErrorCode::AssetCorrupt,
                    "anchor '" + a.key() + "' of '" + kind_name +
                        "' must be [x,y]");
      Point p{pt[0].get<int>(), pt[1].get<int>()};
      if (p.x < 0 || p.x > def.width || p.y < 0 || p.y > def.height)
        throw Error(ErrorCode::AssetCorrupt,
                    "anchor '" + a.key() + "' of '" + kind_name +
                        "' lies outside the box");
      def.anchors[role_from_name(a.key())] = p;
    }

    for (const json& s : body.value("strokes", json::array())) {
      if (!s.is_object() || s.size() != 1)
        throw Error(ErrorCode::AssetCorrupt,
                    "stroke entries of '" + kind_name +
                        "' must hold one shape each");
      Stroke stroke;
      auto e = s.begin();
      if (e.key() == "line") {
        stroke.shape = Stroke::Shape::Line;
        if (e.value().size() != 4)
          throw Error(ErrorCode::AssetCorrupt, "line strokes take 4 numbers");
      } else if (e.key() == "circle") {
        stroke.shape = Stroke::Shape::Circle;
        if (e.value().size() != 3)
          throw Error(ErrorCode::AssetCorrupt, "circle strokes take 3 numbers");
      } else if (e.key() == "arc") {
        stroke.shape = Stroke::Shape::Arc;
        if (e.value().size() != 5)
          throw Error(ErrorCode::AssetCorrupt, "arc strokes take 5 numbers");
      } else {
        throw Error(ErrorCode::AssetCorrupt,
                    "unknown stroke shape '" + e.key() + "'");
      }
      for (const json& v : e.value()) stroke.v.push_back(v.get<double>());
      def.strokes.push_back(std::move(stroke));
    }
    table[def.kind] = std::move(def);
  }

  for (SymbolKind k :
       {SymbolKind::NMOS, SymbolKind::PMOS, SymbolKind::RESISTOR,
        SymbolKind::CAPACITOR, SymbolKind::VSOURCE, SymbolKind::ISOURCE,
        SymbolKind::PORT})
    if (!table.count(k))
      throw Error(ErrorCode::AssetCorrupt,
                  std::string("symbol table is missing ") + symbol_kind_name(k));
  return table;
}

}  // namespace

const char* symbol_kind_name(SymbolKind k) {
  switch (k) {
    case SymbolKind::NMOS: return "NMOS";
    case SymbolKind::PMOS: return "PMOS";
    case SymbolKind::RESISTOR: return "RESISTOR";
    case SymbolKind::CAPACITOR: return "CAPACITOR";
    case SymbolKind::VSOURCE: return "VSOURCE";
    case SymbolKind::ISOURCE: return "ISOURCE";
    case SymbolKind::PORT: return "PORT";
  }
  return "?";
}

SymbolKind symbol_kind_of(DeviceKind k) {
  switch (k) {
    case DeviceKind::NMOS: return SymbolKind::NMOS;
    case DeviceKind::PMOS: return SymbolKind::PMOS;
    case DeviceKind::RESISTOR: return SymbolKind::RESISTOR;
    case DeviceKind::CAPACITOR: return SymbolKind::CAPACITOR;
    case DeviceKind::VSOURCE: return SymbolKind::VSOURCE;
    case DeviceKind::ISOURCE: return SymbolKind::ISOURCE;
  }
  return SymbolKind::PORT;
}

SymbolKind symbol_kind_from_name(const std::string& s) {
  for (SymbolKind k :
       {SymbolKind::NMOS, SymbolKind::PMOS, SymbolKind::RESISTOR,
        SymbolKind::CAPACITOR, SymbolKind::VSOURCE, SymbolKind::ISOURCE,
        SymbolKind::PORT})
    if (s == symbol_kind_name(k)) return k;
  throw Error(ErrorCode::UnknownKind, "unknown component kind '" + s + "'");
}

const std::map<SymbolKind, SymbolDef>& symbol_table() {
  static const std::map<SymbolKind, SymbolDef> table =
      parse_symbols(detail::kSymbolsJson);
  return table;
}

const SymbolDef& symbol_def(SymbolKind k) {
  const auto& table = symbol_table();
  auto it = table.find(k);
  if (it == table.end())
    throw Error(ErrorCode::UnknownKind,
                std::string("no symbol for ") + symbol_kind_name(k));
  return it->second;
}

Rect symbol_box(SymbolKind k, Point pos, Orientation o) {
  const SymbolDef& def = symbol_def(k);
  auto [w, h] = orient_dims(def.width, def.height, o);
  return Rect{pos.x, pos.y, w, h};
}

Point anchor_point(SymbolKind k, Point pos, Orientation o,
                   TerminalRole role) {
  const SymbolDef& def = symbol_def(k);
  auto it = def.anchors.find(role);
  if (it == def.anchors.end())
    throw Error(ErrorCode::UnknownKind,
                std::string(symbol_kind_name(k)) + " has no " +
                    terminal_role_name(role) + " anchor");
  Point local = orient_point(it->second, def.width, def.height, o);
  return Point{pos.x + local.x, pos.y + local.y};
}

}  // namespace eeschematic
