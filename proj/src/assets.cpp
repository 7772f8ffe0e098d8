#include "eeschematic/assets.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eeschematic/layout.hpp"
#include "eeschematic/render.hpp"

#ifndef EESCHEMATIC_DEFAULT_ASSET_DIR
#define EESCHEMATIC_DEFAULT_ASSET_DIR "assets"
#endif

namespace eeschematic {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed on " + path);
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed on " + path);
}

std::string default_asset_dir() {
  if (const char* env = std::getenv("EESCHEMATIC_ASSET_DIR"); env && *env)
    return env;
  return EESCHEMATIC_DEFAULT_ASSET_DIR;
}

namespace {

ReferenceExample load_reference(const std::string& dir, const std::string& name,
                                bool must_validate) {
  ReferenceExample ref;
  std::string base = dir + "/reference/" + name;
  try {
    ref.layout = read_layout(read_text_file(base + ".layout.json"));
    ref.svg = read_text_file(base + ".svg");
    ref.caption = read_text_file(base + ".caption.txt");
  } catch (const Error& e) {
    throw Error(ErrorCode::AssetCorrupt,
                "reference asset " + name + ": " + e.message());
  }
  if (ref.caption.empty())
    throw Error(ErrorCode::AssetCorrupt,
                "reference asset " + name + ": empty caption");
  if (must_validate && !validate_layout(ref.layout).empty())
    throw Error(ErrorCode::AssetCorrupt,
                "reference asset " + name + ": layout has violations");
  if (ref.svg != render_svg(ref.layout))
    throw Error(ErrorCode::AssetCorrupt,
                "reference asset " + name + ": svg does not match its layout");
  return ref;
}

std::string load_prompt(const std::string& dir, const std::string& name) {
  std::string text;
  try {
    text = read_text_file(dir + "/prompts/" + name + ".txt");
  } catch (const Error& e) {
    throw Error(ErrorCode::AssetCorrupt, "prompt template " + name + ": " + e.message());
  }
  if (text.empty())
    throw Error(ErrorCode::AssetCorrupt, "prompt template " + name + " is empty");
  return text;
}

}  // namespace

AssetBundle load_assets(const std::string& dir) {
  AssetBundle bundle;
  bundle.dir = dir.empty() ? default_asset_dir() : dir;
  bundle.examples = example_library(bundle.dir);
  // The good reference must be clean; the bad one is deliberately flawed and
  // only needs to be schema-readable and render-consistent.
  bundle.good = load_reference(bundle.dir, "good", true);
  bundle.bad = load_reference(bundle.dir, "bad", false);
  bundle.prompt_placement_decide = load_prompt(bundle.dir, "placement_decide");
  bundle.prompt_placement_revise = load_prompt(bundle.dir, "placement_revise");
  bundle.prompt_wiring_decide = load_prompt(bundle.dir, "wiring_decide");
  bundle.prompt_wiring_revise = load_prompt(bundle.dir, "wiring_revise");
  return bundle;
}

}  // namespace eeschematic
