#pragma once

#include <string>
#include <vector>

#include "eeschematic/layout.hpp"
#include "eeschematic/netlist.hpp"

namespace eeschematic {

enum class SubstructureKind {
  SINGLE_CASCODE,
  SINGLE_CURRENT_SOURCE,
  DIODE_CONNECTED,
  TWO_TRANSISTOR_CASCODE,
  DIFFERENTIAL_PAIR,
  CURRENT_MIRROR,
};

constexpr int kSubstructureKindCount = 6;
const char* substructure_kind_name(SubstructureKind k);
SubstructureKind substructure_kind_from_name(const std::string& name);

/// Member role within a match. Pairs use LEFT/RIGHT, mirrors
/// REFERENCE/OUTPUT, stacked cascodes DRIVER/CASCODE, single-device
/// matches DEVICE.
enum class MemberRole { LEFT, RIGHT, REFERENCE, OUTPUT, DRIVER, CASCODE, DEVICE };

const char* member_role_name(MemberRole r);

struct SubstructureMatch {
  SubstructureKind kind;
  std::vector<std::pair<std::string, MemberRole>> members;  // device, role
  std::vector<std::string> shared_nets;

  bool has_member(const std::string& device) const;
};

/// Deterministic rule engine over the classified circuit. Multi-device
/// patterns claim devices in priority order (DIFFERENTIAL_PAIR >
/// CURRENT_MIRROR > TWO_TRANSISTOR_CASCODE), pairs enumerated in
/// lexicographic device order; every remaining MOS device gets exactly one
/// single-device match (DIODE_CONNECTED, SINGLE_CURRENT_SOURCE or the
/// SINGLE_CASCODE fallback). Output is sorted by kind priority then by the
/// first member name, and is invariant to device declaration order.
std::vector<SubstructureMatch> detect(const Circuit& c);

/// Individual rule predicates, usable to re-check an emitted match.
bool is_diode_connected(const Circuit& c, const std::string& device);
bool is_differential_pair(const Circuit& c, const std::string& a,
                          const std::string& b);
bool is_current_mirror(const Circuit& c, const std::string& a,
                       const std::string& b);
/// True when `driver`'s drain net is `cascode`'s source net (stacked series).
bool is_two_transistor_cascode(const Circuit& c, const std::string& driver,
                               const std::string& cascode);
bool is_single_current_source(const Circuit& c, const std::string& device);

struct ExampleAsset {
  SubstructureKind kind;
  std::string netlist_text;
  std::string description;
  SchematicLayout layout;
};

/// Loads the six-example asset bundle from `asset_dir/examples` (one
/// subdirectory per kind: example.sp, description.txt, layout.json) and
/// self-validates every asset. Throws AssetCorrupt on any failure.
std::vector<ExampleAsset> example_library(const std::string& asset_dir);

}  // namespace eeschematic
