#pragma once

#include <stdexcept>
#include <string>

namespace eeschematic {

enum class ErrorCode {
  SyntaxError,
  DuplicateDevice,
  ArityError,
  EmptyNetlist,
  AmbiguousNet,
  SchemaError,
  PlacementOverflow,
  UnknownKind,
  AssetCorrupt,
  BackendError,
  ScriptExhausted,
  ConfigError,
  IoError,
};

const char* error_code_name(ErrorCode code);

/// Single exception type for the whole library. `line`/`col` are 1-based and
/// 0 when not applicable; `path` is a JSON-pointer-style location for schema
/// errors ("/components/3/x") or a config key path.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, int line = 0, int col = 0,
        std::string path = {})
      : std::runtime_error(format(code, message, line, col, path)),
        code_(code),
        message_(std::move(message)),
        line_(line),
        col_(col),
        path_(std::move(path)) {}

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int col() const { return col_; }
  const std::string& path() const { return path_; }

  /// "file:line:col: code: message" for the diagnostic stream.
  std::string diagnostic(const std::string& file) const;

 private:
  static std::string format(ErrorCode code, const std::string& message,
                            int line, int col, const std::string& path);

  ErrorCode code_;
  std::string message_;
  int line_;
  int col_;
  std::string path_;
};

struct Diagnostic {
  enum class Severity { Warning, Error };
  Severity severity = Severity::Warning;
  std::string code;
  int line = 0;
  int col = 0;
  std::string message;

  std::string to_string(const std::string& file) const;
};

}  // namespace eeschematic
