#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <tuple>

namespace eeschematic {

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct PointF {
  double x = 0;
  double y = 0;
};

/// Axis-aligned box [x, x+w] x [y, y+h] in grid units.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int x2() const { return x + w; }
  int y2() const { return y + h; }

  bool contains(Point p) const {
    return p.x >= x && p.x <= x2() && p.y >= y && p.y <= y2();
  }
  /// Strict interior intersection: shared boundary does not count.
  bool overlaps(const Rect& o) const {
    return x < o.x2() && o.x < x2() && y < o.y2() && o.y < y2();
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Horizontal flip applied before rotation; 8 distinct orientations.
struct Orientation {
  int rot = 0;  // 0 | 90 | 180 | 270
  bool mirror = false;

  friend bool operator==(const Orientation&, const Orientation&) = default;
};

inline bool valid_rotation(int rot) {
  return rot == 0 || rot == 90 || rot == 180 || rot == 270;
}

/// Maps a symbol-local point into the oriented symbol's local frame whose
/// top-left is the component anchor. Box is w x h before orientation.
template <typename P>
P orient_point(P p, int w, int h, Orientation o) {
  if (o.mirror) p.x = w - p.x;
  switch (o.rot) {
    case 0: return p;
    case 90: return {h - p.y, p.x};
    case 180: return {w - p.x, h - p.y};
    case 270: return {p.y, w - p.x};
    default: return p;
  }
}

/// Box dimensions after orientation.
inline std::pair<int, int> orient_dims(int w, int h, Orientation o) {
  if (o.rot == 90 || o.rot == 270) return {h, w};
  return {w, h};
}

inline int manhattan(Point a, Point b) {
  int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx + dy;
}

struct PointHash {
  size_t operator()(const Point& p) const {
    return std::hash<int64_t>()((int64_t(p.x) << 32) ^ uint32_t(p.y));
  }
};

/// Unit grid edge between two 4-adjacent points, stored with the smaller
/// endpoint first so the same edge always hashes identically.
struct UnitEdge {
  Point a;
  Point b;

  static UnitEdge make(Point p, Point q) {
    return q < p ? UnitEdge{q, p} : UnitEdge{p, q};
  }
  bool horizontal() const { return a.y == b.y; }

  friend bool operator==(const UnitEdge&, const UnitEdge&) = default;
  friend auto operator<=>(const UnitEdge&, const UnitEdge&) = default;
};

struct UnitEdgeHash {
  size_t operator()(const UnitEdge& e) const {
    return PointHash()(e.a) * 1000003u ^ PointHash()(e.b);
  }
};

}  // namespace eeschematic
