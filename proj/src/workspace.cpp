#include "catto/workspace.hpp"

#include "catto/diagnostics.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace catto {

Workspace::Workspace(std::string repo_root) : root_(std::move(repo_root)) {}

std::string Workspace::store_dir() const { return (fs::path(root_) / kStoreDirName).string(); }
std::string Workspace::baseline_dir() const {
  return (fs::path(store_dir()) / "baseline").string();
}
std::string Workspace::coverage_path() const {
  return (fs::path(store_dir()) / "coverage").string();
}
std::string Workspace::config_path() const { return (fs::path(store_dir()) / "config").string(); }
std::string Workspace::lock_path() const { return (fs::path(store_dir()) / "lock").string(); }

bool Workspace::store_exists() const { return fs::is_directory(store_dir()); }

void Workspace::ensure_store() const {
  std::error_code ec;
  fs::create_directories(store_dir(), ec);
  if (ec) throw CattoError("cannot create '" + store_dir() + "': " + ec.message());
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace

WorkspaceConfig Workspace::load_config() const {
  WorkspaceConfig config;
  std::ifstream in(config_path());
  if (!in) return config;
  std::string line;
  while (std::getline(in, line)) {
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    size_t eq = text.find('=');
    if (eq == std::string::npos) continue;
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key == "threads") {
      try {
        config.threads = std::max(1, std::stoi(value));
      } catch (...) {
      }
    } else if (key == "format" && (value == "text" || value == "json")) {
      config.format = value;
    } else if (key == "allow_external") {
      config.allow_external = value == "true" || value == "1";
    } else if (key == "on_fail" &&
               (value == "prompt" || value == "block" || value == "allow")) {
      config.on_fail = value;
    }
  }
  return config;
}

void Workspace::save_config(const WorkspaceConfig& config) const {
  ensure_store();
  std::ofstream out(config_path(), std::ios::trunc);
  if (!out) throw CattoError("cannot write '" + config_path() + "'");
  out << "threads = " << config.threads << "\n";
  out << "format = " << config.format << "\n";
  out << "allow_external = " << (config.allow_external ? "true" : "false") << "\n";
  out << "on_fail = " << config.on_fail << "\n";
}

bool Workspace::has_baseline() const {
  return fs::exists(fs::path(baseline_dir()) / "manifest.json");
}

SnapshotLoadResult Workspace::load_baseline() const { return snapshot_load(baseline_dir()); }

std::optional<CoverageMap> Workspace::load_coverage(std::string* error) const {
  std::ifstream in(coverage_path(), std::ios::binary);
  if (!in) {
    if (error) *error = "no coverage record under '" + store_dir() + "'";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string parse_error;
  auto cov = coverage_from_text(buf.str(), &parse_error);
  if (!cov && error) *error = "coverage record unreadable: " + parse_error;
  return cov;
}

void Workspace::save_baseline(const ProjectSnapshot& snapshot, const CoverageMap& coverage) const {
  ensure_store();
  snapshot_store(snapshot, baseline_dir());
  std::ofstream out(coverage_path(), std::ios::trunc | std::ios::binary);
  if (!out) throw CattoError("cannot write '" + coverage_path() + "'");
  out << coverage_to_text(coverage);
}

WorkspaceLock::WorkspaceLock(const std::string& path) : path_(path) {
  int fd = ::open(path.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    path_.clear();
    throw CattoError("another process holds '" + path +
                     "'; remove the file if it is stale");
  }
  std::string pid = std::to_string(::getpid()) + "\n";
  ssize_t n = ::write(fd, pid.data(), pid.size());
  (void)n;
  ::close(fd);
}

WorkspaceLock::~WorkspaceLock() {
  if (!path_.empty()) ::unlink(path_.c_str());
}

std::optional<std::string> find_git_root(const std::string& start) {
  std::error_code ec;
  fs::path dir = fs::absolute(start, ec);
  if (ec) return std::nullopt;
  while (true) {
    if (fs::exists(dir / ".git")) return dir.string();
    fs::path parent = dir.parent_path();
    if (parent == dir) return std::nullopt;
    dir = parent;
  }
}

} // namespace catto
