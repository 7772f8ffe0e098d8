#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace eeschematic {

/// Effective run configuration. Precedence: flags > environment > config
/// file > defaults. The API key comes from EESCHEMATIC_API_KEY only and is
/// never echoed.
struct CliConfig {
  std::string backend_kind = "mock";  // "mock" | "http"
  std::string backend_url;
  std::string backend_model;
  int place_iter = 10;
  int wire_iter = 20;
  int history_window = 3;
  uint64_t seed = 0;
  int timeout_sec = 60;
  std::string asset_dir;
  std::string api_key;  // environment only

  void validate() const;      // throws ConfigError with the offending key
  std::string echo() const;   // effective config, key redacted
};

/// TOML-style subset: `key = value` with dotted keys, optional [section]
/// headers, `#` comments, quoted strings, integers, booleans. Unknown keys
/// are rejected with the offending path.
CliConfig parse_config_text(const std::string& text,
                            CliConfig base = CliConfig{});

CliConfig parse_config_file(const std::string& path,
                            CliConfig base = CliConfig{});

/// Applies EESCHEMATIC_API_KEY and EESCHEMATIC_ASSET_DIR when present.
CliConfig apply_environment(CliConfig cfg);

}  // namespace eeschematic
