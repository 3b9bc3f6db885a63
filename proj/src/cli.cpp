#include "catto/cli.hpp"

#include "catto/callgraph.hpp"
#include "catto/change_analyzer.hpp"
#include "catto/diagnostics.hpp"
#include "catto/frontend.hpp"
#include "catto/mutation.hpp"
#include "catto/runner.hpp"
#include "catto/selector.hpp"
#include "catto/workspace.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

namespace fs = std::filesystem;

namespace catto {
namespace {

struct GlobalFlags {
  int threads = 0; // 0 = unset (config or 1)
  std::string format = "text";
  bool verbose = false;
};

int effective_threads(const GlobalFlags& flags, int config_threads = 1) {
  if (flags.threads > 0) return flags.threads;
  return config_threads > 0 ? config_threads : 1;
}

void print_diagnostics(const std::vector<Diagnostic>& diags) {
  if (!diags.empty()) std::cerr << render_diagnostics(diags);
}

void print_warnings(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Warning) std::cerr << d.str() << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw CattoError("cannot write '" + path + "'");
  out << content;
}

struct EmitPaths {
  std::string changes;
  std::string callgraph;
  std::string selection;
};

struct Pipeline {
  ChangeSet changes;
  CallGraph graph;
  CoverageMap cur_cov;
  SelectedSuite suite;
};

Pipeline run_selection_pipeline(const ProjectSnapshot& prev, const ProjectSnapshot& cur,
                                const CoverageMap* prev_cov) {
  Pipeline p;
  p.changes = diff_snapshots(prev, cur);
  p.graph = build_call_graph(cur, synthesize_test_entries(cur));
  p.cur_cov = coverage_map(p.graph);
  p.suite = select_tests(p.changes, cur, p.graph, p.cur_cov, prev_cov);
  return p;
}

void write_emits(const Pipeline& p, const EmitPaths& emits, const std::string& format) {
  if (!emits.changes.empty()) write_text_file(emits.changes, emit_changes_text(p.changes));
  if (!emits.callgraph.empty()) {
    bool dot = emits.callgraph.size() > 4 && emits.callgraph.ends_with(".dot");
    write_text_file(emits.callgraph,
                    dot ? emit_callgraph_dot(p.graph) : emit_callgraph_text(p.graph));
  }
  if (!emits.selection.empty())
    write_text_file(emits.selection, format == "json" ? emit_selection_json(p.suite)
                                                      : emit_selection_text(p.suite));
}

std::vector<MethodSig> all_test_sigs(const ProjectSnapshot& snapshot) {
  std::vector<MethodSig> tests;
  for (const auto& [key, decl] : snapshot.classes)
    for (const auto& m : decl.methods)
      if (m.kind == MethodKind::TestMethod) tests.push_back(m.sig);
  return tests;
}

std::string self_exe_path(const char* argv0) {
  std::error_code ec;
  fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) return exe.string();
  return fs::absolute(argv0 ? argv0 : "catto").string();
}

constexpr const char* kHookMarker = "# catto pre-commit hook";

// ---------------------------------------------------------------------------

int cmd_init(const GlobalFlags& flags, bool force_chain, bool allow_external,
             const std::string& exe_path) {
  auto root = find_git_root(fs::current_path().string());
  if (!root) {
    std::cerr << "error: not a git work tree\n";
    return kExitUsage;
  }
  Workspace ws(*root);
  ws.ensure_store();

  WorkspaceConfig config = ws.load_config();
  if (flags.threads > 0) config.threads = flags.threads;
  if (!flags.format.empty()) config.format = flags.format;
  if (allow_external) config.allow_external = true;
  ws.save_config(config);

  fs::path git_dir = fs::path(*root) / ".git";
  if (!fs::is_directory(git_dir)) {
    std::cerr << "error: '" << git_dir.string() << "' is not a directory; cannot install hook\n";
    return kExitUsage;
  }
  fs::path hooks_dir = git_dir / "hooks";
  std::error_code ec;
  fs::create_directories(hooks_dir, ec);
  fs::path hook_path = hooks_dir / "pre-commit";
  fs::path chained_path = hooks_dir / "pre-commit.pre-catto";

  bool chain = false;
  if (fs::exists(hook_path)) {
    std::ifstream in(hook_path);
    std::string existing((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    if (existing.find(kHookMarker) == std::string::npos) {
      if (!force_chain) {
        std::cerr << "error: a pre-commit hook already exists at '" << hook_path.string()
                  << "'; rerun with --force-chain to keep it and chain-invoke it\n";
        return kExitUsage;
      }
      if (fs::exists(chained_path))
        throw CattoError("refusing to overwrite '" + chained_path.string() + "'");
      fs::rename(hook_path, chained_path);
      chain = true;
    } else {
      // Reinstalling over our own hook; keep an already-chained hook chained.
      chain = fs::exists(chained_path);
    }
  }

  std::ostringstream script;
  script << "#!/bin/sh\n" << kHookMarker << "\n";
  script << "\"" << exe_path << "\" precommit || exit $?\n";
  if (chain) script << "exec \"" << chained_path.string() << "\"\n";
  write_text_file(hook_path.string(), script.str());
  fs::permissions(hook_path,
                  fs::perms::owner_all | fs::perms::group_read | fs::perms::group_exec |
                      fs::perms::others_read | fs::perms::others_exec,
                  fs::perm_options::replace);

  std::cout << "initialized " << ws.store_dir() << " and installed the pre-commit hook\n";
  if (chain) std::cout << "existing hook chained via " << chained_path.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

enum class FailPolicy { Prompt, Block, Allow };

FailPolicy fail_policy_from(const std::string& name) {
  if (name == "allow") return FailPolicy::Allow;
  if (name == "block") return FailPolicy::Block;
  return FailPolicy::Prompt;
}

// Asks on the controlling terminal; without one the commit is blocked.
bool prompt_commit_anyway(int failed_count) {
  std::FILE* tty = std::fopen("/dev/tty", "r+");
  if (!tty) {
    std::cerr << "no controlling terminal to prompt on; blocking the commit "
                 "(use --on-fail allow|block to decide non-interactively)\n";
    return false;
  }
  std::fprintf(tty, "%d selected test(s) failed. commit anyway? [y/N] ", failed_count);
  std::fflush(tty);
  char buf[16] = {0};
  bool yes = false;
  if (std::fgets(buf, sizeof buf, tty)) yes = buf[0] == 'y' || buf[0] == 'Y';
  std::fclose(tty);
  return yes;
}

int cmd_precommit(const GlobalFlags& flags, const std::string& on_fail_flag) {
  auto root = find_git_root(fs::current_path().string());
  if (!root) {
    std::cerr << "error: not a git work tree\n";
    return kExitUsage;
  }
  Workspace ws(*root);
  ws.ensure_store();
  WorkspaceLock lock(ws.lock_path());
  WorkspaceConfig config = ws.load_config();
  const int threads = effective_threads(flags, config.threads);
  const std::string format = flags.format.empty() ? config.format : flags.format;

  FrontendOptions fo;
  fo.allow_external = config.allow_external;
  SnapshotResult cur = parse_project_dir(*root, "current", fo);
  if (!cur.ok()) {
    print_diagnostics(cur.diagnostics);
    std::cerr << "commit blocked: the work tree does not parse\n";
    return kExitUsage;
  }
  print_warnings(cur.diagnostics);

  auto persist = [&](const ProjectSnapshot& snapshot, const CoverageMap* cov) {
    if (cov) {
      ws.save_baseline(snapshot, *cov);
    } else {
      CallGraph graph = build_call_graph(snapshot, synthesize_test_entries(snapshot));
      ws.save_baseline(snapshot, coverage_map(graph));
    }
  };

  if (!ws.has_baseline()) {
    persist(*cur.snapshot, nullptr);
    std::cout << "no baseline found; stored the current version as baseline. "
                 "0 tests selected; commit allowed\n";
    return kExitOk;
  }

  SnapshotLoadResult base = ws.load_baseline();
  if (!base.ok()) {
    std::cerr << "error: " << base.message << "\nrun 'catto rebaseline' to reset the store\n";
    return kExitInternal;
  }
  std::string cov_error;
  std::optional<CoverageMap> prev_cov = ws.load_coverage(&cov_error);
  if (!prev_cov)
    std::cerr << "warning: " << cov_error << "; deletion rules fall back to class coverage\n";

  Pipeline p = run_selection_pipeline(*base.snapshot, *cur.snapshot,
                                      prev_cov ? &*prev_cov : nullptr);
  print_warnings(p.graph.warnings);
  if (flags.verbose && !p.changes.empty()) {
    std::cout << "changes:\n" << emit_changes_text(p.changes);
  }
  std::cout << p.suite.tests.size() << " test(s) selected\n";
  if (flags.verbose && !p.suite.tests.empty()) std::cout << emit_selection_text(p.suite);

  if (p.suite.tests.empty()) {
    persist(*cur.snapshot, &p.cur_cov);
    std::cout << "commit allowed\n";
    return kExitOk;
  }

  RunOptions run_options;
  run_options.threads = threads;
  TestReport report = run_tests(p.suite.tests, *cur.snapshot, run_options);
  std::cout << (format == "json" ? render_report_json(report) : render_report_text(report));

  if (report.all_passed()) {
    persist(*cur.snapshot, &p.cur_cov);
    std::cout << "commit allowed\n";
    return kExitOk;
  }

  FailPolicy policy =
      fail_policy_from(on_fail_flag.empty() ? config.on_fail : on_fail_flag);
  bool proceed = false;
  switch (policy) {
    case FailPolicy::Allow: proceed = true; break;
    case FailPolicy::Block: proceed = false; break;
    case FailPolicy::Prompt:
      proceed = prompt_commit_anyway(report.failed + report.errored);
      break;
  }
  if (proceed) {
    persist(*cur.snapshot, &p.cur_cov);
    std::cout << "proceeding despite failures; baseline updated\n";
    return kExitOk;
  }
  std::cout << "commit blocked\n";
  return kExitTestsFailed;
}

// ---------------------------------------------------------------------------

int cmd_select(const GlobalFlags& flags, const std::string& prev_dir,
               const std::string& cur_dir, const EmitPaths& emits, bool allow_external) {
  FrontendOptions fo;
  fo.allow_external = allow_external;
  SnapshotResult prev = parse_project_dir(prev_dir, prev_dir, fo);
  SnapshotResult cur = parse_project_dir(cur_dir, cur_dir, fo);
  if (!prev.ok() || !cur.ok()) {
    print_diagnostics(prev.diagnostics);
    print_diagnostics(cur.diagnostics);
    return kExitUsage;
  }
  print_warnings(prev.diagnostics);
  print_warnings(cur.diagnostics);

  CallGraph prev_graph = build_call_graph(*prev.snapshot, synthesize_test_entries(*prev.snapshot));
  CoverageMap prev_cov = coverage_map(prev_graph);
  Pipeline p = run_selection_pipeline(*prev.snapshot, *cur.snapshot, &prev_cov);
  print_warnings(p.graph.warnings);
  write_emits(p, emits, flags.format);

  if (flags.verbose && !p.changes.empty()) std::cout << "changes:\n" << emit_changes_text(p.changes);
  std::cout << (flags.format == "json" ? emit_selection_json(p.suite)
                                       : emit_selection_text(p.suite));
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_run(const GlobalFlags& flags, const std::string& dir, const std::string& filter,
            const std::string& report_path, bool allow_external) {
  FrontendOptions fo;
  fo.allow_external = allow_external;
  SnapshotResult parsed = parse_project_dir(dir, dir, fo);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics);
    return kExitUsage;
  }
  print_warnings(parsed.diagnostics);

  std::vector<MethodSig> tests = all_test_sigs(*parsed.snapshot);
  if (!filter.empty()) {
    std::vector<MethodSig> kept;
    for (auto& sig : tests)
      if (sig.str().find(filter) != std::string::npos) kept.push_back(sig);
    tests = std::move(kept);
    if (tests.empty()) std::cerr << "warning: no tests match filter '" << filter << "'\n";
  } else if (tests.empty()) {
    std::cerr << "warning: the project declares no tests\n";
  }

  RunOptions run_options;
  run_options.threads = effective_threads(flags);
  TestReport report = run_tests(tests, *parsed.snapshot, run_options);
  std::string rendered =
      flags.format == "json" ? render_report_json(report) : render_report_text(report);
  std::cout << rendered;
  if (!report_path.empty()) write_text_file(report_path, rendered);
  return report.all_passed() ? kExitOk : kExitTestsFailed;
}

// ---------------------------------------------------------------------------

int cmd_validate(const GlobalFlags& flags, const std::string& dir, int mutants, uint64_t seed,
                 const std::string& report_path, bool allow_external) {
  FrontendOptions fo;
  fo.allow_external = allow_external;
  SnapshotResult parsed = parse_project_dir(dir, dir, fo);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics);
    return kExitUsage;
  }
  print_warnings(parsed.diagnostics);

  RunOptions run_options;
  run_options.threads = effective_threads(flags);
  ValidationSummary summary = validate_project(*parsed.snapshot, mutants, seed, run_options);
  print_warnings(summary.warnings);
  std::string rendered = flags.format == "json" ? render_validation_json(summary)
                                                : render_validation_text(summary);
  std::cout << rendered;
  if (!report_path.empty()) write_text_file(report_path, rendered);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_rebaseline(const GlobalFlags& flags) {
  (void)flags;
  auto root = find_git_root(fs::current_path().string());
  if (!root) {
    std::cerr << "error: not a git work tree\n";
    return kExitUsage;
  }
  Workspace ws(*root);
  ws.ensure_store();
  WorkspaceLock lock(ws.lock_path());
  WorkspaceConfig config = ws.load_config();

  FrontendOptions fo;
  fo.allow_external = config.allow_external;
  SnapshotResult cur = parse_project_dir(*root, "current", fo);
  if (!cur.ok()) {
    print_diagnostics(cur.diagnostics);
    return kExitUsage;
  }
  print_warnings(cur.diagnostics);
  CallGraph graph = build_call_graph(*cur.snapshot, synthesize_test_entries(*cur.snapshot));
  ws.save_baseline(*cur.snapshot, coverage_map(graph));
  std::cout << "baseline reset to the current work tree\n";
  return kExitOk;
}

} // namespace

int run_cli(int argc, char** argv) {
  GlobalFlags flags;

  CLI::App app{"just-in-time test selection for MiniLang projects"};
  app.require_subcommand(1);
  app.add_option("--threads", flags.threads, "worker threads for test execution")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--verbose", flags.verbose, "print changes and selection reasons");

  bool force_chain = false;
  bool init_allow_external = false;
  CLI::App* init = app.add_subcommand("init", "create .catto and install the pre-commit hook");
  init->fallthrough();
  init->add_flag("--force-chain", force_chain, "keep an existing foreign hook and chain it");
  init->add_flag("--allow-external", init_allow_external,
                 "configure the workspace to tolerate classes outside the tree");

  std::string on_fail;
  CLI::App* precommit =
      app.add_subcommand("precommit", "select and run tests for the pending commit");
  precommit->fallthrough();
  precommit->add_option("--on-fail", on_fail, "non-interactive decision when tests fail")
      ->check(CLI::IsMember({"prompt", "block", "allow"}));

  std::string prev_dir, cur_dir;
  EmitPaths emits;
  bool select_allow_external = false;
  CLI::App* select = app.add_subcommand("select", "diff two project trees and select tests");
  select->fallthrough();
  select->add_option("prev", prev_dir, "previous version directory")->required();
  select->add_option("cur", cur_dir, "current version directory")->required();
  select->add_option("--emit-changes", emits.changes, "write the change set to a file");
  select->add_option("--emit-callgraph", emits.callgraph,
                     "write the call graph to a file (.dot for graphviz)");
  select->add_option("--emit-selection", emits.selection, "write the selection to a file");
  select->add_flag("--allow-external", select_allow_external,
                   "tolerate classes outside the tree");

  std::string run_dir, run_filter, run_report;
  bool run_allow_external = false;
  CLI::App* run = app.add_subcommand("run", "run tests (retest-all or filtered)");
  run->fallthrough();
  run->add_option("dir", run_dir, "project directory")->required();
  run->add_option("--filter", run_filter, "substring filter on test signatures");
  run->add_option("--report", run_report, "also write the report to a file");
  run->add_flag("--allow-external", run_allow_external, "tolerate classes outside the tree");

  std::string validate_dir, validate_report;
  int mutants = 30;
  uint64_t seed = 1;
  bool validate_allow_external = false;
  CLI::App* validate =
      app.add_subcommand("validate", "measure selection quality on seeded mutants");
  validate->fallthrough();
  validate->add_option("--project", validate_dir, "project directory")->required();
  validate->add_option("--mutants", mutants, "number of mutants to generate");
  validate->add_option("--seed", seed, "sampling seed");
  validate->add_option("--report", validate_report, "also write the report to a file");
  validate->add_flag("--allow-external", validate_allow_external,
                     "tolerate classes outside the tree");

  CLI::App* rebaseline =
      app.add_subcommand("rebaseline", "reset the baseline to the current work tree");
  rebaseline->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*init) return cmd_init(flags, force_chain, init_allow_external, self_exe_path(argv[0]));
    if (*precommit) return cmd_precommit(flags, on_fail);
    if (*select) return cmd_select(flags, prev_dir, cur_dir, emits, select_allow_external);
    if (*run) return cmd_run(flags, run_dir, run_filter, run_report, run_allow_external);
    if (*validate)
      return cmd_validate(flags, validate_dir, mutants, seed, validate_report,
                          validate_allow_external);
    if (*rebaseline) return cmd_rebaseline(flags);
  } catch (const CattoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

} // namespace catto
