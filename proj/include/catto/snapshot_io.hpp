#pragma once

#include "catto/project_model.hpp"

#include <optional>
#include <string>

namespace catto {

enum class SnapshotLoadStatus {
  Ok,
  Missing,         // no manifest under root ("no baseline")
  VersionMismatch, // manifest written by another format version ("re-baseline required")
  Corrupt,         // unreadable records or failed integrity recheck
};

struct SnapshotLoadResult {
  SnapshotLoadStatus status = SnapshotLoadStatus::Corrupt;
  std::string message;
  std::optional<ProjectSnapshot> snapshot; // set iff status == Ok

  bool ok() const { return status == SnapshotLoadStatus::Ok; }
};

inline constexpr int kSnapshotFormatVersion = 1;

// Serializes a snapshot under root: manifest.json plus one classes/<key>.json
// record per class. Output is byte-stable for equal snapshots (sorted keys,
// sorted members). Throws CattoError on I/O failure.
void snapshot_store(const ProjectSnapshot& snapshot, const std::string& root);

// Loads and verifies a stored snapshot. Fingerprints are recomputed from the
// stored instruction lists; any disagreement reports Corrupt.
SnapshotLoadResult snapshot_load(const std::string& root);

} // namespace catto
