#pragma once

#include "catto/ast.hpp"
#include "catto/diagnostics.hpp"
#include "catto/parser.hpp"
#include "catto/project_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace catto {

struct FrontendOptions {
  // Superclasses and types naming classes outside the snapshot become
  // external-unknown instead of errors.
  bool allow_external = false;
};

struct SnapshotResult {
  std::optional<ProjectSnapshot> snapshot; // set only when no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return snapshot.has_value(); }
};

// Merges parsed units into a validated, normalized snapshot: resolves the
// class hierarchy, assigns method kinds from annotations, canonicalizes type
// references, normalizes bodies, and type-checks every body and initializer.
SnapshotResult build_snapshot(const std::vector<ast::SourceUnit>& units,
                              const std::string& version_label,
                              const FrontendOptions& options = {});

// Parses every *.mini file under dir (recursively, in sorted path order) and
// builds the snapshot.
SnapshotResult parse_project_dir(const std::string& dir,
                                 const std::string& version_label,
                                 const FrontendOptions& options = {});

} // namespace catto
