#pragma once

#include <string>
#include <vector>

#include "eeschematic/substructure.hpp"

namespace eeschematic {

struct ReferenceExample {
  SchematicLayout layout;
  std::string svg;      // committed render of the layout
  std::string caption;
};

struct AssetBundle {
  std::string dir;
  std::vector<ExampleAsset> examples;  // six, Table-order
  ReferenceExample good;
  ReferenceExample bad;
  std::string prompt_placement_decide;
  std::string prompt_placement_revise;
  std::string prompt_wiring_decide;
  std::string prompt_wiring_revise;
};

/// Asset directory resolution: explicit argument, else the
/// EESCHEMATIC_ASSET_DIR environment variable, else the compiled-in default.
std::string default_asset_dir();

/// Loads and self-validates the full bundle. Throws AssetCorrupt on any
/// missing or inconsistent asset.
AssetBundle load_assets(const std::string& dir = {});

std::string read_text_file(const std::string& path);  // throws IoError
void write_text_file(const std::string& path, const std::string& text);

}  // namespace eeschematic
