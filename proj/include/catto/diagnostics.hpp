#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace catto {

enum class Severity { Error, Warning };

struct Diagnostic {
  std::string file_path;
  int line = 0;
  int column = 0;
  std::string message;
  Severity severity = Severity::Error;

  std::string str() const;
};

bool has_errors(const std::vector<Diagnostic>& diags);
std::string render_diagnostics(const std::vector<Diagnostic>& diags);

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitTestsFailed = 1,
  kExitUsage = 2,
  kExitInternal = 3,
};

// Thrown for I/O failures, corrupted stores and internal inconsistencies.
struct CattoError : std::runtime_error {
  explicit CattoError(const std::string& msg, int code = kExitInternal)
      : std::runtime_error(msg), exit_code(code) {}
  int exit_code;
};

} // namespace catto
