#pragma once

#include "catto/callgraph.hpp"
#include "catto/project_model.hpp"
#include "catto/snapshot_io.hpp"

#include <optional>
#include <string>

namespace catto {

// Tool settings persisted under .catto/config as `key = value` lines.
struct WorkspaceConfig {
  int threads = 1;
  std::string format = "text"; // text | json
  bool allow_external = false;
  std::string on_fail = "prompt"; // prompt | block | allow
};

// The hidden per-repository store: baseline snapshot and coverage of the last
// accepted commit, config, and the single-process lock.
class Workspace {
public:
  static constexpr const char* kStoreDirName = ".catto";

  explicit Workspace(std::string repo_root);

  const std::string& root() const { return root_; }
  std::string store_dir() const;
  std::string baseline_dir() const;
  std::string coverage_path() const;
  std::string config_path() const;
  std::string lock_path() const;

  bool store_exists() const;
  void ensure_store() const;

  WorkspaceConfig load_config() const; // defaults when the file is missing
  void save_config(const WorkspaceConfig& config) const;

  bool has_baseline() const;
  SnapshotLoadResult load_baseline() const;
  // Coverage persisted with the baseline; nullopt when missing or unreadable
  // (error receives the reason; selection then falls back conservatively).
  std::optional<CoverageMap> load_coverage(std::string* error = nullptr) const;
  void save_baseline(const ProjectSnapshot& snapshot, const CoverageMap& coverage) const;

private:
  std::string root_;
};

// Exclusive-create lock file; throws CattoError when another process holds
// it. Released (removed) on destruction.
class WorkspaceLock {
public:
  explicit WorkspaceLock(const std::string& path);
  ~WorkspaceLock();

  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

private:
  std::string path_;
};

// Nearest ancestor of `start` (inclusive) containing a .git entry; nullopt
// when none.
std::optional<std::string> find_git_root(const std::string& start);

} // namespace catto
