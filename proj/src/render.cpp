#include "eeschematic/render.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace eeschematic {

namespace {

/// Fixed one-decimal formatting keeps the SVG byte-stable across platforms.
std::string fmt1(double v) {
  char buf[32];
  if (v == 0) v = 0;  // avoid "-0.0"
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

struct Canvas {
  int unit;
  int pad;

  double px(double grid_x) const { return pad + grid_x * unit; }
  double py(double grid_y) const { return pad + grid_y * unit; }
};

const char* kWireColor = "#1a6faf";
const char* kBodyColor = "#222222";
const char* kAccentColor = "#d4572a";
const char* kWarnColor = "#cc2222";

void render_stroke(std::ostringstream& os, const Stroke& s,
                   const PlacedComponent& comp, const SymbolDef& def,
                   const Canvas& cv, const std::string& color) {
  auto map = [&](double lx, double ly) {
    PointF p = orient_point(PointF{lx, ly}, def.width, def.height, comp.orient);
    return PointF{cv.px(comp.pos.x + p.x), cv.py(comp.pos.y + p.y)};
  };
  double sw = cv.unit * 0.15;
  switch (s.shape) {
    case Stroke::Shape::Line: {
      PointF a = map(s.v[0], s.v[1]);
      PointF b = map(s.v[2], s.v[3]);
      os << "<line x1=\"" << fmt1(a.x) << "\" y1=\"" << fmt1(a.y) << "\" x2=\""
         << fmt1(b.x) << "\" y2=\"" << fmt1(b.y) << "\" stroke=\"" << color
         << "\" stroke-width=\"" << fmt1(sw) << "\"/>";
      break;
    }
    case Stroke::Shape::Circle: {
      PointF c = map(s.v[0], s.v[1]);
      os << "<circle cx=\"" << fmt1(c.x) << "\" cy=\"" << fmt1(c.y)
         << "\" r=\"" << fmt1(s.v[2] * cv.unit) << "\" fill=\"none\" stroke=\""
         << color << "\" stroke-width=\"" << fmt1(sw) << "\"/>";
      break;
    }
    case Stroke::Shape::Arc: {
      // cx cy r startDeg endDeg, degrees clockwise from +x in local units.
      double cx = s.v[0], cy = s.v[1], r = s.v[2];
      double a0 = s.v[3] * 3.14159265358979323846 / 180.0;
      double a1 = s.v[4] * 3.14159265358979323846 / 180.0;
      PointF p0 = map(cx + r * std::cos(a0), cy + r * std::sin(a0));
      PointF p1 = map(cx + r * std::cos(a1), cy + r * std::sin(a1));
      int large = std::fabs(s.v[4] - s.v[3]) > 180.0 ? 1 : 0;
      int sweep = comp.orient.mirror ? 0 : 1;  // mirroring flips handedness
      os << "<path d=\"M " << fmt1(p0.x) << ' ' << fmt1(p0.y) << " A "
         << fmt1(r * cv.unit) << ' ' << fmt1(r * cv.unit) << " 0 " << large
         << ' ' << sweep << ' ' << fmt1(p1.x) << ' ' << fmt1(p1.y)
         << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
         << fmt1(sw) << "\"/>";
      break;
    }
  }
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<TerminalPoint> terminal_positions(const SchematicLayout& l) {
  std::vector<TerminalPoint> out;
  for (const auto& comp : l.components) {
    std::string net;
    if (auto port_net = port_net_of(comp.id); port_net && comp.kind == SymbolKind::PORT)
      net = *port_net;
    for (const auto& [role, local] : symbol_def(comp.kind).anchors)
      out.push_back({comp.id, role, net,
                     anchor_point(comp.kind, comp.pos, comp.orient, role)});
  }
  return out;
}

std::string render_svg(const SchematicLayout& l, const RenderOptions& opts) {
  Canvas cv{std::max(4, opts.unit_px), std::max(4, opts.unit_px)};
  int width = l.grid_width * cv.unit + 2 * cv.pad;
  int height = l.grid_height * cv.unit + 2 * cv.pad;

  // Violating components get warning styling; collect their subjects.
  std::set<std::string> bad;
  for (const Violation& v : validate_layout(l))
    bad.insert(v.subject);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"#ffffff\"/>\n";

  if (opts.show_grid) {
    os << "<g stroke=\"#e4e4e4\" stroke-width=\"" << fmt1(cv.unit * 0.04)
       << "\">\n";
    for (int x = 0; x <= l.grid_width; ++x)
      os << "<line x1=\"" << fmt1(cv.px(x)) << "\" y1=\"" << fmt1(cv.py(0))
         << "\" x2=\"" << fmt1(cv.px(x)) << "\" y2=\""
         << fmt1(cv.py(l.grid_height)) << "\"/>\n";
    for (int y = 0; y <= l.grid_height; ++y)
      os << "<line x1=\"" << fmt1(cv.px(0)) << "\" y1=\"" << fmt1(cv.py(y))
         << "\" x2=\"" << fmt1(cv.px(l.grid_width)) << "\" y2=\""
         << fmt1(cv.py(y)) << "\"/>\n";
    os << "</g>\n";
  }

  for (const auto& w : l.wires) {
    std::string color = bad.count(w.net) ? kWarnColor : kWireColor;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
       << fmt1(cv.unit * 0.15) << "\" data-net=\"" << xml_escape(w.net)
       << "\" points=\"";
    for (size_t i = 0; i < w.points.size(); ++i)
      os << (i ? " " : "") << fmt1(cv.px(w.points[i].x)) << ','
         << fmt1(cv.py(w.points[i].y));
    os << "\"/>\n";
  }
  for (const Point& j : junction_points(l.wires))
    os << "<circle cx=\"" << fmt1(cv.px(j.x)) << "\" cy=\"" << fmt1(cv.py(j.y))
       << "\" r=\"" << fmt1(cv.unit * 0.22) << "\" fill=\"" << kWireColor
       << "\"/>\n";

  for (const auto& comp : l.components) {
    const SymbolDef& def = symbol_def(comp.kind);
    std::string color = kBodyColor;
    if (opts.highlight.count(comp.id)) color = kAccentColor;
    if (bad.count(comp.id)) color = kWarnColor;
    os << "<g id=\"" << xml_escape(comp.id) << "\" data-kind=\""
       << symbol_kind_name(comp.kind) << "\"";
    if (bad.count(comp.id)) os << " class=\"violation\"";
    os << ">\n";
    for (const Stroke& s : def.strokes) {
      render_stroke(os, s, comp, def, cv, color);
      os << '\n';
    }
    for (const auto& [role, local] : def.anchors) {
      Point p = anchor_point(comp.kind, comp.pos, comp.orient, role);
      os << "<circle cx=\"" << fmt1(cv.px(p.x)) << "\" cy=\""
         << fmt1(cv.py(p.y)) << "\" r=\"" << fmt1(cv.unit * 0.14)
         << "\" fill=\"" << color << "\" data-terminal=\""
         << xml_escape(comp.id) << ':' << terminal_role_name(role) << ':'
         << p.x << ':' << p.y << "\"/>\n";
    }
    if (opts.show_labels && comp.kind == SymbolKind::PORT) {
      if (auto net = port_net_of(comp.id)) {
        bool left_side = !comp.orient.mirror;
        Rect box = comp.box();
        double tx = left_side ? cv.px(box.x) : cv.px(box.x2());
        os << "<text x=\"" << fmt1(tx) << "\" y=\""
           << fmt1(cv.py(box.y) - cv.unit * 0.4) << "\" font-family=\"monospace\" font-size=\""
           << fmt1(cv.unit * 0.9) << "\" fill=\"" << color << "\""
           << (left_side ? "" : " text-anchor=\"end\"") << '>'
           << xml_escape(*net) << "</text>\n";
      }
    }
    os << "</g>\n";
  }

  if (opts.show_labels)
    for (const auto& lab : l.labels)
      os << "<text x=\"" << fmt1(cv.px(lab.pos.x)) << "\" y=\""
         << fmt1(cv.py(lab.pos.y)) << "\" font-family=\"monospace\" font-size=\""
         << fmt1(cv.unit * 0.9) << "\" fill=\"" << kBodyColor << "\">"
         << xml_escape(lab.net) << "</text>\n";

  os << "</svg>\n";
  return os.str();
}

}  // namespace eeschematic
