#include "eeschematic/substructure.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>

#include "eeschematic/assets.hpp"
#include "eeschematic/eval.hpp"

namespace eeschematic {

namespace {

bool is_supply(const Circuit& c, const std::string& net_name) {
  const Net* n = c.net(net_name);
  return n && (n->klass == NetClass::POWER || n->klass == NetClass::GROUND);
}

const Device& mos(const Circuit& c, const std::string& name) {
  const Device* d = c.device(name);
  if (!d || !is_mos(d->kind))
    throw Error(ErrorCode::UnknownKind, "'" + name + "' is not a MOS device");
  return *d;
}

int kind_priority(SubstructureKind k) {
  // Higher wins; mirrors the overlap-resolution order.
  switch (k) {
    case SubstructureKind::DIFFERENTIAL_PAIR: return 5;
    case SubstructureKind::CURRENT_MIRROR: return 4;
    case SubstructureKind::TWO_TRANSISTOR_CASCODE: return 3;
    case SubstructureKind::DIODE_CONNECTED: return 2;
    case SubstructureKind::SINGLE_CURRENT_SOURCE: return 1;
    case SubstructureKind::SINGLE_CASCODE: return 0;
  }
  return 0;
}

}  // namespace

const char* substructure_kind_name(SubstructureKind k) {
  switch (k) {
    case SubstructureKind::SINGLE_CASCODE: return "SINGLE_CASCODE";
    case SubstructureKind::SINGLE_CURRENT_SOURCE:
      return "SINGLE_CURRENT_SOURCE";
    case SubstructureKind::DIODE_CONNECTED: return "DIODE_CONNECTED";
    case SubstructureKind::TWO_TRANSISTOR_CASCODE:
      return "TWO_TRANSISTOR_CASCODE";
    case SubstructureKind::DIFFERENTIAL_PAIR: return "DIFFERENTIAL_PAIR";
    case SubstructureKind::CURRENT_MIRROR: return "CURRENT_MIRROR";
  }
  return "?";
}

SubstructureKind substructure_kind_from_name(const std::string& name) {
  for (int i = 0; i < kSubstructureKindCount; ++i) {
    auto k = SubstructureKind(i);
    if (name == substructure_kind_name(k)) return k;
  }
  throw Error(ErrorCode::UnknownKind, "unknown substructure '" + name + "'");
}

const char* member_role_name(MemberRole r) {
  switch (r) {
    case MemberRole::LEFT: return "LEFT";
    case MemberRole::RIGHT: return "RIGHT";
    case MemberRole::REFERENCE: return "REFERENCE";
    case MemberRole::OUTPUT: return "OUTPUT";
    case MemberRole::DRIVER: return "DRIVER";
    case MemberRole::CASCODE: return "CASCODE";
    case MemberRole::DEVICE: return "DEVICE";
  }
  return "?";
}

bool SubstructureMatch::has_member(const std::string& device) const {
  for (const auto& [name, role] : members)
    if (name == device) return true;
  return false;
}

bool is_diode_connected(const Circuit& c, const std::string& device) {
  const Device* d = c.device(device);
  if (!d || !is_mos(d->kind)) return false;
  return *d->net_of(TerminalRole::GATE) == *d->net_of(TerminalRole::DRAIN);
}

bool is_differential_pair(const Circuit& c, const std::string& a,
                          const std::string& b) {
  if (a == b) return false;
  const Device* da = c.device(a);
  const Device* db = c.device(b);
  if (!da || !db || !is_mos(da->kind) || !is_mos(db->kind)) return false;
  if (da->kind != db->kind) return false;
  const std::string& src = *da->net_of(TerminalRole::SOURCE);
  if (src != *db->net_of(TerminalRole::SOURCE)) return false;
  // A mirror's members also share their source; the pair signature is a
  // shared non-supply (tail) source with independent gates and drains.
  if (is_supply(c, src)) return false;
  if (*da->net_of(TerminalRole::GATE) == *db->net_of(TerminalRole::GATE))
    return false;
  if (*da->net_of(TerminalRole::DRAIN) == *db->net_of(TerminalRole::DRAIN))
    return false;
  return true;
}

bool is_current_mirror(const Circuit& c, const std::string& a,
                       const std::string& b) {
  if (a == b) return false;
  const Device* da = c.device(a);
  const Device* db = c.device(b);
  if (!da || !db || !is_mos(da->kind) || !is_mos(db->kind)) return false;
  if (da->kind != db->kind) return false;
  if (*da->net_of(TerminalRole::GATE) != *db->net_of(TerminalRole::GATE))
    return false;
  return is_diode_connected(c, a) || is_diode_connected(c, b);
}

bool is_two_transistor_cascode(const Circuit& c, const std::string& driver,
                               const std::string& cascode) {
  if (driver == cascode) return false;
  const Device* dd = c.device(driver);
  const Device* dc = c.device(cascode);
  if (!dd || !dc || !is_mos(dd->kind) || !is_mos(dc->kind)) return false;
  if (dd->kind != dc->kind) return false;
  const std::string& series = *dd->net_of(TerminalRole::DRAIN);
  if (series != *dc->net_of(TerminalRole::SOURCE)) return false;
  if (is_supply(c, series)) return false;  // stacked through a rail is no stack
  return *dd->net_of(TerminalRole::GATE) != *dc->net_of(TerminalRole::GATE);
}

bool is_single_current_source(const Circuit& c, const std::string& device) {
  const Device* d = c.device(device);
  if (!d || !is_mos(d->kind)) return false;
  if (!is_supply(c, *d->net_of(TerminalRole::SOURCE))) return false;
  if (is_diode_connected(c, device)) return false;
  // Dedicated bias: the gate net drives no other MOS gate.
  const std::string& bias = *d->net_of(TerminalRole::GATE);
  for (const auto& other : c.devices) {
    if (other.name == device || !is_mos(other.kind)) continue;
    if (*other.net_of(TerminalRole::GATE) == bias) return false;
  }
  return true;
}

std::vector<SubstructureMatch> detect(const Circuit& c) {
  std::vector<std::string> names;
  for (const auto& d : c.devices)
    if (is_mos(d.kind)) names.push_back(d.name);
  std::sort(names.begin(), names.end());

  std::vector<SubstructureMatch> out;
  std::set<std::string> consumed;
  auto free_pair = [&](const std::string& a, const std::string& b) {
    return !consumed.count(a) && !consumed.count(b);
  };

  for (size_t i = 0; i < names.size(); ++i)
    for (size_t j = i + 1; j < names.size(); ++j) {
      const std::string &a = names[i], &b = names[j];
      if (!free_pair(a, b) || !is_differential_pair(c, a, b)) continue;
      SubstructureMatch m;
      m.kind = SubstructureKind::DIFFERENTIAL_PAIR;
      m.members = {{a, MemberRole::LEFT}, {b, MemberRole::RIGHT}};
      m.shared_nets = {*mos(c, a).net_of(TerminalRole::SOURCE)};
      out.push_back(std::move(m));
      consumed.insert(a);
      consumed.insert(b);
    }

  for (size_t i = 0; i < names.size(); ++i)
    for (size_t j = i + 1; j < names.size(); ++j) {
      const std::string &a = names[i], &b = names[j];
      if (!free_pair(a, b) || !is_current_mirror(c, a, b)) continue;
      const std::string& ref = is_diode_connected(c, a) ? a : b;
      const std::string& other = (ref == a) ? b : a;
      SubstructureMatch m;
      m.kind = SubstructureKind::CURRENT_MIRROR;
      m.members = {{ref, MemberRole::REFERENCE}, {other, MemberRole::OUTPUT}};
      m.shared_nets = {*mos(c, a).net_of(TerminalRole::GATE)};
      out.push_back(std::move(m));
      consumed.insert(a);
      consumed.insert(b);
    }

  for (size_t i = 0; i < names.size(); ++i)
    for (size_t j = i + 1; j < names.size(); ++j) {
      const std::string &a = names[i], &b = names[j];
      if (!free_pair(a, b)) continue;
      const std::string* driver = nullptr;
      const std::string* casc = nullptr;
      if (is_two_transistor_cascode(c, a, b)) {
        driver = &a;
        casc = &b;
      } else if (is_two_transistor_cascode(c, b, a)) {
        driver = &b;
        casc = &a;
      } else {
        continue;
      }
      SubstructureMatch m;
      m.kind = SubstructureKind::TWO_TRANSISTOR_CASCODE;
      m.members = {{*driver, MemberRole::DRIVER}, {*casc, MemberRole::CASCODE}};
      m.shared_nets = {*mos(c, *driver).net_of(TerminalRole::DRAIN)};
      out.push_back(std::move(m));
      consumed.insert(a);
      consumed.insert(b);
    }

  for (const std::string& name : names) {
    if (consumed.count(name)) continue;
    SubstructureMatch m;
    m.members = {{name, MemberRole::DEVICE}};
    if (is_diode_connected(c, name)) {
      m.kind = SubstructureKind::DIODE_CONNECTED;
      m.shared_nets = {*mos(c, name).net_of(TerminalRole::GATE)};
    } else if (is_single_current_source(c, name)) {
      m.kind = SubstructureKind::SINGLE_CURRENT_SOURCE;
      m.shared_nets = {*mos(c, name).net_of(TerminalRole::SOURCE)};
    } else {
      m.kind = SubstructureKind::SINGLE_CASCODE;
    }
    out.push_back(std::move(m));
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const SubstructureMatch& x, const SubstructureMatch& y) {
                     int px = kind_priority(x.kind), py = kind_priority(y.kind);
                     if (px != py) return px > py;
                     return x.members[0].first < y.members[0].first;
                   });
  return out;
}

std::vector<ExampleAsset> example_library(const std::string& asset_dir) {
  namespace fs = std::filesystem;
  std::vector<ExampleAsset> out;
  for (int i = 0; i < kSubstructureKindCount; ++i) {
    auto kind = SubstructureKind(i);
    std::string name = substructure_kind_name(kind);
    std::string lower;
    for (char ch : name) lower += char(std::tolower(ch));
    fs::path dir = fs::path(asset_dir) / "examples" / lower;
    if (!fs::is_directory(dir))
      throw Error(ErrorCode::AssetCorrupt,
                  "missing example directory " + dir.string());

    ExampleAsset asset;
    asset.kind = kind;
    try {
      asset.netlist_text = read_text_file((dir / "example.sp").string());
      asset.description = read_text_file((dir / "description.txt").string());
      asset.layout = read_layout(read_text_file((dir / "layout.json").string()));
    } catch (const Error& e) {
      throw Error(ErrorCode::AssetCorrupt,
                  "example '" + lower + "': " + e.message());
    }
    if (asset.description.empty())
      throw Error(ErrorCode::AssetCorrupt,
                  "example '" + lower + "' has an empty description");

    Circuit circuit;
    try {
      circuit = parse_netlist(asset.netlist_text);
    } catch (const Error& e) {
      throw Error(ErrorCode::AssetCorrupt,
                  "example '" + lower + "' netlist: " + e.message());
    }
    if (!validate_layout(asset.layout, circuit).empty())
      throw Error(ErrorCode::AssetCorrupt,
                  "example '" + lower + "' layout fails validation");
    if (!check_correctness(circuit, asset.layout).correct)
      throw Error(ErrorCode::AssetCorrupt,
                  "example '" + lower + "' layout is electrically wrong");

    bool found = false;
    for (const auto& m : detect(circuit)) found |= (m.kind == kind);
    if (!found)
      throw Error(ErrorCode::AssetCorrupt,
                  "example '" + lower + "' does not exhibit " + name);
    out.push_back(std::move(asset));
  }
  return out;
}

}  // namespace eeschematic
