#include "eeschematic/config.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "eeschematic/agent.hpp"
#include "eeschematic/assets.hpp"
#include "eeschematic/error.hpp"

namespace eeschematic {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct RawValue {
  std::string text;
  bool quoted = false;
  int line = 0;
};

long long to_int(const RawValue& v, const std::string& key) {
  if (v.quoted)
    throw Error(ErrorCode::ConfigError, "expected an integer", v.line, 0, key);
  size_t pos = 0;
  long long n = 0;
  try {
    n = std::stoll(v.text, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "expected an integer, got '" + v.text + "'",
                v.line, 0, key);
  }
  if (pos != v.text.size())
    throw Error(ErrorCode::ConfigError, "expected an integer, got '" + v.text + "'",
                v.line, 0, key);
  return n;
}

std::string to_string_value(const RawValue& v, const std::string& key) {
  if (!v.quoted)
    throw Error(ErrorCode::ConfigError, "expected a quoted string", v.line, 0, key);
  return v.text;
}

}  // namespace

CliConfig parse_config_text(const std::string& text, CliConfig base) {
  CliConfig cfg = std::move(base);
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw Error(ErrorCode::ConfigError, "unterminated section header", line_no);
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw Error(ErrorCode::ConfigError, "empty section name", line_no);
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError, "expected key = value", line_no);
    std::string key = trim(t.substr(0, eq));
    std::string rhs = trim(t.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorCode::ConfigError, "missing key before '='", line_no);
    if (!section.empty()) key = section + "." + key;

    RawValue value;
    value.line = line_no;
    if (!rhs.empty() && rhs[0] == '"') {
      size_t close = rhs.find('"', 1);
      if (close == std::string::npos)
        throw Error(ErrorCode::ConfigError, "unterminated string", line_no, 0, key);
      value.text = rhs.substr(1, close - 1);
      value.quoted = true;
      std::string rest = trim(rhs.substr(close + 1));
      if (!rest.empty() && rest[0] != '#')
        throw Error(ErrorCode::ConfigError, "trailing content after value",
                    line_no, 0, key);
    } else {
      size_t hash = rhs.find('#');
      value.text = trim(hash == std::string::npos ? rhs : rhs.substr(0, hash));
      if (value.text.empty())
        throw Error(ErrorCode::ConfigError, "missing value", line_no, 0, key);
    }

    if (key == "backend.kind") {
      cfg.backend_kind = to_string_value(value, key);
    } else if (key == "backend.url") {
      cfg.backend_url = to_string_value(value, key);
    } else if (key == "backend.model") {
      cfg.backend_model = to_string_value(value, key);
    } else if (key == "backend.timeout_sec") {
      cfg.timeout_sec = int(to_int(value, key));
    } else if (key == "limits.place_iter") {
      cfg.place_iter = int(to_int(value, key));
    } else if (key == "limits.wire_iter") {
      cfg.wire_iter = int(to_int(value, key));
    } else if (key == "history.window") {
      cfg.history_window = int(to_int(value, key));
    } else if (key == "seed") {
      cfg.seed = uint64_t(to_int(value, key));
    } else if (key == "assets.dir") {
      cfg.asset_dir = to_string_value(value, key);
    } else if (key == "backend.api_key" || key == "api_key") {
      throw Error(ErrorCode::ConfigError,
                  "the API key is read from EESCHEMATIC_API_KEY, not the "
                  "config file",
                  line_no, 0, key);
    } else {
      throw Error(ErrorCode::ConfigError, "unknown key", line_no, 0, key);
    }
  }
  return cfg;
}

CliConfig parse_config_file(const std::string& path, CliConfig base) {
  return parse_config_text(read_text_file(path), std::move(base));
}

CliConfig apply_environment(CliConfig cfg) {
  if (const char* key = std::getenv("EESCHEMATIC_API_KEY"); key && *key)
    cfg.api_key = key;
  if (const char* dir = std::getenv("EESCHEMATIC_ASSET_DIR"); dir && *dir)
    cfg.asset_dir = dir;
  return cfg;
}

void CliConfig::validate() const {
  if (backend_kind != "mock" && backend_kind != "http")
    throw Error(ErrorCode::ConfigError,
                "backend kind must be \"mock\" or \"http\"", 0, 0,
                "backend.kind");
  if (backend_kind == "http") {
    if (backend_url.empty())
      throw Error(ErrorCode::ConfigError, "http backend needs a url", 0, 0,
                  "backend.url");
    split_http_url(backend_url);  // throws ConfigError when malformed
  }
  if (place_iter < 1)
    throw Error(ErrorCode::ConfigError, "must be >= 1", 0, 0,
                "limits.place_iter");
  if (wire_iter < 1)
    throw Error(ErrorCode::ConfigError, "must be >= 1", 0, 0,
                "limits.wire_iter");
  if (history_window < 0)
    throw Error(ErrorCode::ConfigError, "must be >= 0", 0, 0, "history.window");
  if (timeout_sec < 1)
    throw Error(ErrorCode::ConfigError, "must be >= 1", 0, 0,
                "backend.timeout_sec");
}

std::string CliConfig::echo() const {
  std::ostringstream os;
  os << "backend.kind = \"" << backend_kind << "\"\n";
  os << "backend.url = \"" << backend_url << "\"\n";
  os << "backend.model = \"" << backend_model << "\"\n";
  os << "backend.timeout_sec = " << timeout_sec << "\n";
  os << "limits.place_iter = " << place_iter << "\n";
  os << "limits.wire_iter = " << wire_iter << "\n";
  os << "history.window = " << history_window << "\n";
  os << "seed = " << seed << "\n";
  os << "assets.dir = \"" << asset_dir << "\"\n";
  os << "api_key = " << (api_key.empty() ? "(unset)" : "(redacted)") << "\n";
  return os.str();
}

}  // namespace eeschematic
