#include "eeschematic/error.hpp"

#include <sstream>

namespace eeschematic {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateDevice: return "DuplicateDevice";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::EmptyNetlist: return "EmptyNetlist";
    case ErrorCode::AmbiguousNet: return "AmbiguousNet";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::PlacementOverflow: return "PlacementOverflow";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::AssetCorrupt: return "AssetCorrupt";
    case ErrorCode::BackendError: return "BackendError";
    case ErrorCode::ScriptExhausted: return "ScriptExhausted";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

std::string Error::format(ErrorCode code, const std::string& message, int line,
                          int col, const std::string& path) {
  std::ostringstream os;
  os << error_code_name(code) << ": " << message;
  if (line > 0) os << " (line " << line << ", col " << col << ")";
  if (!path.empty()) os << " at " << path;
  return os.str();
}

std::string Error::diagnostic(const std::string& file) const {
  std::ostringstream os;
  os << file << ":" << line_ << ":" << col_ << ": " << error_code_name(code_)
     << ": " << message_;
  return os.str();
}

std::string Diagnostic::to_string(const std::string& file) const {
  std::ostringstream os;
  os << file << ":" << line << ":" << col << ": " << code << ": " << message;
  return os.str();
}

}  // namespace eeschematic
