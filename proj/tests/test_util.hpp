#pragma once

#include "catto/frontend.hpp"
#include "catto/parser.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace catto::testutil {

inline std::string corpus_path(const std::string& rel) {
  return std::string(CATTO_CORPUS_DIR) + "/" + rel;
}

inline std::string diag_lines(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) out += d.str() + "\n";
  return out;
}

// Parses a single in-memory unit; throws on diagnostics so tests read linearly.
inline ast::SourceUnit parse_unit(const std::string& source,
                                  const std::string& file = "mem.mini") {
  ParseResult result = parse_source(source, file);
  if (!result.unit)
    throw std::runtime_error("parse failed:\n" + diag_lines(result.diagnostics));
  return std::move(*result.unit);
}

// Builds a snapshot from in-memory sources; throws on any error diagnostic.
inline ProjectSnapshot snapshot_of(const std::vector<std::string>& sources,
                                   const std::string& label = "mem",
                                   const FrontendOptions& options = {}) {
  std::vector<ast::SourceUnit> units;
  int n = 0;
  for (const auto& src : sources)
    units.push_back(parse_unit(src, "mem" + std::to_string(n++) + ".mini"));
  SnapshotResult result = build_snapshot(units, label, options);
  if (!result.ok())
    throw std::runtime_error("snapshot failed:\n" + diag_lines(result.diagnostics));
  return std::move(*result.snapshot);
}

// Loads one of the bundled corpus projects; throws when it does not build.
inline ProjectSnapshot corpus_snapshot(const std::string& rel,
                                       const std::string& label = "corpus") {
  SnapshotResult result = parse_project_dir(corpus_path(rel), label);
  if (!result.ok())
    throw std::runtime_error("corpus '" + rel + "' failed:\n" +
                             diag_lines(result.diagnostics));
  return std::move(*result.snapshot);
}

inline bool has_error(const std::vector<Diagnostic>& diags, const std::string& needle) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error && d.message.find(needle) != std::string::npos)
      return true;
  return false;
}

inline bool has_warning(const std::vector<Diagnostic>& diags, const std::string& needle) {
  for (const auto& d : diags)
    if (d.severity == Severity::Warning && d.message.find(needle) != std::string::npos)
      return true;
  return false;
}

} // namespace catto::testutil
