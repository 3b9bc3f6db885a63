#pragma once

#include "catto/diagnostics.hpp"
#include "catto/frontend.hpp"
#include "catto/project_model.hpp"

#include <string>
#include <vector>

namespace catto {

// A facts document is a snapshot without source: classes, fields and methods
// carry fingerprints, and each method lists its resolved call edges instead
// of a body. It feeds diff and selection for projects whose sources are not
// parseable here; such snapshots cannot be executed.
//
// Layout:
//   {"version_label": ..., "classes": [{"package", "name", "superclass"?,
//    "is_test_class", "static_fields": [{"name", "fingerprint"}],
//    "methods": [{"sig", "kind", "fingerprint", "calls": [sig, ...]}]}]}
//
// Fingerprints are 16-digit lowercase hex. A superclass naming a class
// outside the document is kept as external-unknown.

// Validates and ingests a facts document. Violations produce diagnostics
// naming the offending field (e.g. "classes[1].methods[0].calls[2]"); a call
// edge naming an undeclared method is an error. Methods come out with
// fingerprint-only bodies and explicit call lists.
SnapshotResult ingest_facts(const std::string& json_text);
SnapshotResult ingest_facts_file(const std::string& path);

// Exports a snapshot as a facts document. Call edges come from the same
// dispatch resolution the graph builder uses. Static-initializer call edges
// have no place in the format; when a class initializer contains calls or
// static references, a warning is appended and that linkage is dropped.
std::string export_facts(const ProjectSnapshot& snapshot,
                         std::vector<Diagnostic>* warnings = nullptr);

} // namespace catto
