#include "eeschematic/place.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace eeschematic {

namespace {

constexpr int kBandTopY = 4;    // y of the first band
constexpr int kBandPitch = 10;  // MOS height 6 + gap 4
constexpr int kSlotPitch = 12;  // MOS width 4 + gap 8
constexpr int kPairLeftX = 28;  // innermost pair, left member
constexpr int kPairRightX = 36;

enum class Side { P, N, MID };

struct BandKey {
  Side side;
  int depth;

  friend bool operator<(const BandKey& a, const BandKey& b) {
    // Global top-to-bottom order: P0, P1, ..., MID, ..., N1, N0.
    auto rank = [](const BandKey& k) {
      switch (k.side) {
        case Side::P: return std::pair<int, int>{0, k.depth};
        case Side::MID: return std::pair<int, int>{1, 0};
        case Side::N: return std::pair<int, int>{2, -k.depth};
      }
      return std::pair<int, int>{1, 0};
    };
    return rank(a) < rank(b);
  }
};

/// Smallest hop count from a rail through shared source/drain nets.
/// Depth 0 = the device's own source or drain sits on the rail.
std::map<std::string, int> chain_depths(const Circuit& c, NetClass rail) {
  auto sd_nets = [](const Device& d) {
    return std::array<const std::string*, 2>{d.net_of(TerminalRole::SOURCE),
                                             d.net_of(TerminalRole::DRAIN)};
  };
  std::map<std::string, std::vector<const Device*>> by_net;
  for (const auto& d : c.devices) {
    if (!is_mos(d.kind)) continue;
    for (const std::string* n : sd_nets(d)) by_net[*n].push_back(&d);
  }

  std::map<std::string, int> depth;
  std::deque<const Device*> queue;
  for (const auto& d : c.devices) {
    if (!is_mos(d.kind)) continue;
    for (const std::string* n : sd_nets(d)) {
      const Net* net = c.net(*n);
      if (net && net->klass == rail && !depth.count(d.name)) {
        depth[d.name] = 0;
        queue.push_back(&d);
      }
    }
  }
  while (!queue.empty()) {
    const Device* d = queue.front();
    queue.pop_front();
    for (const std::string* n : sd_nets(*d)) {
      const Net* net = c.net(*n);
      if (net && (net->klass == NetClass::POWER ||
                  net->klass == NetClass::GROUND))
        continue;  // rails are endpoints, not corridors
      for (const Device* e : by_net[*n]) {
        if (depth.count(e->name)) continue;
        depth[e->name] = depth[d->name] + 1;
        queue.push_back(e);
      }
    }
  }
  return depth;
}

struct Unit {
  // Pair units carry two members (left, right); singles carry one.
  std::vector<std::string> members;
  std::string sort_key;
};

int symbol_width(SymbolKind k) { return symbol_def(k).width; }

}  // namespace

SchematicLayout initial_place(const Circuit& c,
                              const std::vector<SubstructureMatch>& matches) {
  SchematicLayout layout;
  if (c.devices.empty() && c.io_ports.empty()) return layout;

  auto p_depth = chain_depths(c, NetClass::POWER);
  auto n_depth = chain_depths(c, NetClass::GROUND);
  auto band_of = [&](const Device& d) -> BandKey {
    bool has_p = p_depth.count(d.name);
    bool has_n = n_depth.count(d.name);
    if (has_p && has_n) {
      if (d.kind == DeviceKind::PMOS) return {Side::P, p_depth[d.name]};
      return {Side::N, n_depth[d.name]};
    }
    if (has_p) return {Side::P, p_depth[d.name]};
    if (has_n) return {Side::N, n_depth[d.name]};
    return {Side::MID, 0};
  };

  // Pair structures are placement units; everything else is a single.
  std::map<BandKey, std::vector<Unit>> pair_units;
  std::map<BandKey, std::vector<Unit>> single_units;
  std::set<std::string> paired;
  for (const auto& m : matches) {
    if (m.kind != SubstructureKind::DIFFERENTIAL_PAIR &&
        m.kind != SubstructureKind::CURRENT_MIRROR)
      continue;
    Unit u;
    u.members = {m.members[0].first, m.members[1].first};
    u.sort_key = m.members[0].first;
    pair_units[band_of(*c.device(u.members[0]))].push_back(std::move(u));
    paired.insert(m.members[0].first);
    paired.insert(m.members[1].first);
  }
  for (const auto& d : c.devices) {
    if (paired.count(d.name)) continue;
    Unit u;
    u.members = {d.name};
    u.sort_key = d.name;
    BandKey key = is_mos(d.kind) ? band_of(d) : BandKey{Side::MID, 0};
    single_units[key].push_back(std::move(u));
  }

  std::set<BandKey> keys;
  for (const auto& [k, v] : pair_units) keys.insert(k);
  for (const auto& [k, v] : single_units) keys.insert(k);

  auto overflow = [&](const std::string& what) {
    throw Error(ErrorCode::PlacementOverflow,
                what + " does not fit the " +
                    std::to_string(layout.grid_width) + "x" +
                    std::to_string(layout.grid_height) + " grid");
  };

  int band_index = 0;
  for (const BandKey& key : keys) {
    int band_y = kBandTopY + band_index * kBandPitch;
    ++band_index;
    if (band_y + 6 > layout.grid_height) overflow("band stack");

    auto pairs = pair_units[key];
    auto singles = single_units[key];
    auto by_key = [](const Unit& a, const Unit& b) {
      return a.sort_key < b.sort_key;
    };
    std::sort(pairs.begin(), pairs.end(), by_key);
    std::sort(singles.begin(), singles.end(), by_key);

    auto place_mos = [&](const std::string& name, int x, bool mirrored) {
      const Device& d = *c.device(name);
      PlacedComponent pc;
      pc.id = name;
      pc.kind = symbol_kind_of(d.kind);
      pc.pos = {x, band_y};
      pc.orient = {0, mirrored};
      Rect box = pc.box();
      if (box.x < 0 || box.x2() > layout.grid_width) overflow("band row");
      layout.components.push_back(std::move(pc));
    };

    for (size_t j = 0; j < pairs.size(); ++j) {
      place_mos(pairs[j].members[0], kPairLeftX - kSlotPitch * int(j), false);
      place_mos(pairs[j].members[1], kPairRightX + kSlotPitch * int(j), true);
    }

    if (pairs.empty()) {
      // Centered row of 12-wide slots.
      int s = int(singles.size());
      for (int i = 0; i < s; ++i) {
        const Device& d = *c.device(singles[i].members[0]);
        SymbolKind kind = symbol_kind_of(d.kind);
        int w = symbol_width(kind);
        int slot_left = layout.centerline_x() - 6 * s + kSlotPitch * i;
        int x = slot_left + 6 - w / 2;
        int y = is_mos(d.kind) ? band_y : band_y + 1;
        PlacedComponent pc{d.name, kind, {x, y}, {0, false}};
        Rect box = pc.box();
        if (box.x < 0 || box.x2() > layout.grid_width ||
            box.y2() > layout.grid_height)
          overflow("band row");
        layout.components.push_back(std::move(pc));
      }
    } else {
      // Singles flank the pairs, alternating right then left.
      int p = int(pairs.size());
      for (size_t k = 0; k < singles.size(); ++k) {
        int slot = int(k) / 2;
        int x = (k % 2 == 0) ? kPairRightX + kSlotPitch * (p + slot)
                             : kPairLeftX - kSlotPitch * (p + slot);
        place_mos(singles[k].members[0], x, false);
      }
    }
  }

  // I/O pins: gate-driven nets enter on the left margin, the rest exit right.
  struct PortPlan {
    std::string net;
    bool left;
    int pin_y;
  };
  std::vector<PortPlan> plans;
  for (const std::string& port : c.io_ports) {
    const Net* net = c.net(port);
    if (!net || net->klass == NetClass::POWER ||
        net->klass == NetClass::GROUND)
      continue;
    bool left = false;
    double sum_y = 0;
    int count = 0;
    for (const auto& [dev, role] : net->terminals) {
      if (role == TerminalRole::GATE) left = true;
      const PlacedComponent* pc = layout.component(dev);
      if (!pc) continue;
      sum_y += anchor_point(pc->kind, pc->pos, pc->orient, role).y;
      ++count;
    }
    int pin_y = count ? int(std::llround(sum_y / count))
                      : layout.grid_height / 2;
    plans.push_back({port, left, pin_y});
  }
  for (bool left : {true, false}) {
    std::vector<PortPlan*> side;
    for (auto& p : plans)
      if (p.left == left) side.push_back(&p);
    std::sort(side.begin(), side.end(), [](const PortPlan* a, const PortPlan* b) {
      return std::tie(a->pin_y, a->net) < std::tie(b->pin_y, b->net);
    });
    int prev = -4;
    for (PortPlan* p : side) {
      p->pin_y = std::max({p->pin_y, 1, prev + 4});
      if (p->pin_y + 1 > layout.grid_height) overflow("port column");
      prev = p->pin_y;
      PlacedComponent pc;
      pc.id = port_component_id(p->net);
      pc.kind = SymbolKind::PORT;
      pc.pos = {left ? 1 : layout.grid_width - 3, p->pin_y - 1};
      pc.orient = {0, !left};  // right-margin pins face back inward
      layout.components.push_back(std::move(pc));
    }
  }

  std::sort(layout.components.begin(), layout.components.end(),
            [](const PlacedComponent& a, const PlacedComponent& b) {
              return a.id < b.id;
            });
  return layout;
}

}  // namespace eeschematic
