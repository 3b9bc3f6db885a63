#include "catto/diagnostics.hpp"

#include <sstream>

namespace catto {

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << file_path << ':' << line << ':' << column << ": "
     << (severity == Severity::Error ? "error: " : "warning: ") << message;
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error)
      return true;
  return false;
}

std::string render_diagnostics(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  for (const auto& d : diags)
    os << d.str() << '\n';
  return os.str();
}

} // namespace catto
