#include "catto/mutation.hpp"

#include "catto/callgraph.hpp"
#include "catto/change_analyzer.hpp"
#include "catto/frontend.hpp"
#include "catto/printer.hpp"
#include "catto/render.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace catto {

const char* mutation_operator_name(MutationOperator op) {
  switch (op) {
    case MutationOperator::AOR: return "AOR";
    case MutationOperator::ROR: return "ROR";
    case MutationOperator::ConstantReplace: return "ConstantReplace";
    case MutationOperator::BoolNegate: return "BoolNegate";
  }
  return "?";
}

double tsr_metric(int suite_size, int selected) {
  if (suite_size < 1 || selected < 0 || selected > suite_size)
    throw CattoError("tsr: selected count out of range");
  return static_cast<double>(suite_size - selected) / static_cast<double>(suite_size);
}

double inclusiveness_metric(int fault_revealing, int fault_revealing_selected) {
  if (fault_revealing < 0 || fault_revealing_selected < 0 ||
      fault_revealing_selected > fault_revealing)
    throw CattoError("inclusiveness: counts out of range");
  if (fault_revealing == 0) return 1.0;
  return static_cast<double>(fault_revealing_selected) / static_cast<double>(fault_revealing);
}

double rfdc_metric(int fault_revealing, int fault_revealing_selected) {
  if (fault_revealing == 0) return 0.0;
  return 1.0 - inclusiveness_metric(fault_revealing, fault_revealing_selected);
}

namespace {

const char* swapped_binary_token(const std::string& token, MutationOperator* op) {
  if (token == "+") { *op = MutationOperator::AOR; return "-"; }
  if (token == "-") { *op = MutationOperator::AOR; return "+"; }
  if (token == "*") { *op = MutationOperator::AOR; return "/"; }
  if (token == "/") { *op = MutationOperator::AOR; return "*"; }
  if (token == "<") { *op = MutationOperator::ROR; return "<="; }
  if (token == "<=") { *op = MutationOperator::ROR; return "<"; }
  if (token == "==") { *op = MutationOperator::ROR; return "!="; }
  if (token == "!=") { *op = MutationOperator::ROR; return "=="; }
  return nullptr;
}

// Rewrites one instruction in place. Returns the human-readable delta, or
// empty when (instruction, variant) is not a legal site.
std::string rewrite_instruction(Instruction& instr, int variant) {
  switch (instr.op) {
    case Opcode::Binary: {
      if (variant != 0 || instr.operands.empty()) return {};
      MutationOperator op;
      const char* swapped = swapped_binary_token(instr.operands[0], &op);
      if (!swapped) return {};
      std::string delta = "'" + instr.operands[0] + "' -> '" + swapped + "'";
      instr.operands[0] = swapped;
      return delta;
    }
    case Opcode::IntLit: {
      if (instr.operands.empty()) return {};
      const std::string& text = instr.operands[0];
      if (variant == 0) {
        long long value = std::stoll(text);
        if (value == INT64_MAX) return {};
        std::string next = std::to_string(value + 1);
        std::string delta = text + " -> " + next;
        instr.operands[0] = next;
        return delta;
      }
      if (variant == 1 && text != "0") {
        std::string delta = text + " -> 0";
        instr.operands[0] = "0";
        return delta;
      }
      return {};
    }
    case Opcode::BoolLit: {
      if (variant != 0 || instr.operands.empty()) return {};
      std::string flipped = instr.operands[0] == "true" ? "false" : "true";
      std::string delta = instr.operands[0] + " -> " + flipped;
      instr.operands[0] = flipped;
      return delta;
    }
    default:
      return {};
  }
}

MutationOperator operator_for(const Instruction& instr) {
  switch (instr.op) {
    case Opcode::Binary: {
      MutationOperator op = MutationOperator::AOR;
      swapped_binary_token(instr.operands[0], &op);
      return op;
    }
    case Opcode::IntLit: return MutationOperator::ConstantReplace;
    case Opcode::BoolLit: return MutationOperator::BoolNegate;
    default: return MutationOperator::AOR;
  }
}

ast::TypeRef type_ref_from_canonical(const std::string& canonical) {
  size_t dot = canonical.rfind('.');
  if (dot == std::string::npos) return {"", canonical};
  return {canonical.substr(0, dot), canonical.substr(dot + 1)};
}

ast::Annotation annotation_for(MethodKind kind) {
  switch (kind) {
    case MethodKind::TestMethod: return ast::Annotation::Test;
    case MethodKind::FixtureBefore: return ast::Annotation::Before;
    case MethodKind::FixtureAfter: return ast::Annotation::After;
    default: return ast::Annotation::None;
  }
}

// Reconstructs compilable source for one class from its normalized form.
ast::ClassAst class_to_ast(const ClassDecl& decl) {
  ast::ClassAst cls;
  cls.name = decl.key.class_name;
  if (decl.superclass) {
    if (decl.superclass->package_name == decl.key.package_name)
      cls.extends = ast::TypeRef{"", decl.superclass->class_name};
    else
      cls.extends = ast::TypeRef{decl.superclass->package_name, decl.superclass->class_name};
  }
  for (const auto& field : decl.static_fields) {
    ast::FieldAst f;
    f.name = field.name;
    f.type = type_ref_from_canonical(field.declared_type);
    if (!field.init_instrs.empty())
      f.initializer = decode_initializer(field.init_instrs, decl.key.package_name);
    cls.fields.push_back(std::move(f));
  }
  for (const auto& method : decl.methods) {
    ast::MethodAst m;
    m.annotation = annotation_for(method.kind);
    m.name = method.sig.method_name;
    for (size_t i = 0; i < method.sig.param_types.size(); ++i) {
      // Decoded bodies reference parameters by canonical slot name, so the
      // declaration list must use the same names for the unit to re-parse.
      m.params.push_back({render_param_name(static_cast<int>(i)),
                          type_ref_from_canonical(method.sig.param_types[i])});
    }
    if (method.kind != MethodKind::Constructor && method.sig.return_type != "void")
      m.return_type = type_ref_from_canonical(method.sig.return_type);
    m.body = decode_body(method.body.instructions,
                         static_cast<int>(method.sig.param_types.size()),
                         decl.key.package_name);
    cls.methods.push_back(std::move(m));
  }
  return cls;
}

} // namespace

std::vector<Mutant> enumerate_mutation_sites(const ProjectSnapshot& snapshot) {
  std::vector<Mutant> sites;
  for (const auto& [key, decl] : snapshot.classes) {
    if (decl.is_test_class) continue;
    for (const auto& method : decl.methods) {
      if (method.kind != MethodKind::Production) continue;
      for (size_t i = 0; i < method.body.instructions.size(); ++i) {
        for (int variant = 0; variant < 2; ++variant) {
          Instruction probe = method.body.instructions[i];
          std::string delta = rewrite_instruction(probe, variant);
          if (delta.empty()) continue;
          Mutant m;
          m.op = operator_for(method.body.instructions[i]);
          m.method = method.sig;
          m.instruction_index = i;
          m.variant = variant;
          m.description = delta;
          sites.push_back(std::move(m));
        }
      }
    }
  }
  return sites;
}

std::vector<Mutant> generate_mutants(const ProjectSnapshot& snapshot, int n, uint64_t seed,
                                     std::vector<Diagnostic>* warnings) {
  std::vector<Mutant> sites = enumerate_mutation_sites(snapshot);
  if (sites.empty()) {
    if (warnings)
      warnings->push_back({"", 0, 0,
                           "no eligible mutation sites in snapshot '" +
                               snapshot.version_label + "'",
                           Severity::Warning});
    return {};
  }
  if (n < 0) n = 0;
  size_t want = std::min(static_cast<size_t>(n), sites.size());

  // Partial Fisher-Yates with a fixed generator: the same (snapshot, n, seed)
  // always yields the same sample, independent of platform library details.
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < want; ++i) {
    size_t j = i + static_cast<size_t>(rng() % (sites.size() - i));
    std::swap(sites[i], sites[j]);
  }
  sites.resize(want);
  for (size_t i = 0; i < sites.size(); ++i) sites[i].id = static_cast<int>(i) + 1;
  return sites;
}

ProjectSnapshot apply_mutant(const ProjectSnapshot& original, const Mutant& mutant) {
  const MethodDecl* target = original.find_method(mutant.method);
  if (!target)
    throw CattoError("mutant " + std::to_string(mutant.id) + " targets unknown method '" +
                     mutant.method.str() + "'");
  if (mutant.instruction_index >= target->body.instructions.size())
    throw CattoError("mutant " + std::to_string(mutant.id) + " targets instruction " +
                     std::to_string(mutant.instruction_index) + " beyond the body of '" +
                     mutant.method.str() + "'");

  // Rewrite on a copy of the declarations, then round-trip the whole project
  // through source so the result is a legal, fully re-checked snapshot.
  std::vector<ast::SourceUnit> units;
  for (const auto& [key, decl] : original.classes) {
    ClassDecl working = decl;
    if (key == mutant.method.class_key()) {
      for (auto& method : working.methods) {
        if (!(method.sig == mutant.method)) continue;
        Instruction& instr = method.body.instructions[mutant.instruction_index];
        std::string delta = rewrite_instruction(instr, mutant.variant);
        if (delta.empty())
          throw CattoError("mutant " + std::to_string(mutant.id) +
                           " does not apply to instruction " +
                           std::to_string(mutant.instruction_index) + " of '" +
                           mutant.method.str() + "'");
      }
    }
    ast::SourceUnit unit;
    unit.file_path = key.package_name + "/" + key.class_name + ".mini";
    unit.package_name = key.package_name;
    unit.classes.push_back(class_to_ast(working));
    units.push_back(std::move(unit));
  }

  // Normalization is a fixpoint of print+parse, so only the rewritten
  // instruction differs after this round trip.
  std::vector<ast::SourceUnit> reparsed;
  for (const auto& unit : units) {
    std::string source = print_source_unit(unit);
    ParseResult parsed = parse_source(source, unit.file_path);
    if (!parsed.unit)
      throw CattoError("mutant " + std::to_string(mutant.id) +
                       " produced unparsable source for " + unit.file_path + ":\n" +
                       render_diagnostics(parsed.diagnostics));
    reparsed.push_back(std::move(*parsed.unit));
  }

  FrontendOptions options;
  options.allow_external = true;
  SnapshotResult result = build_snapshot(
      reparsed, original.version_label + "+m" + std::to_string(mutant.id), options);
  if (!result.ok())
    throw CattoError("mutant " + std::to_string(mutant.id) + " failed to re-validate:\n" +
                     render_diagnostics(result.diagnostics));
  return std::move(*result.snapshot);
}

namespace {

std::vector<MethodSig> all_tests(const ProjectSnapshot& snapshot) {
  std::vector<MethodSig> tests;
  for (const auto& [key, decl] : snapshot.classes)
    for (const auto& m : decl.methods)
      if (m.kind == MethodKind::TestMethod) tests.push_back(m.sig);
  return tests;
}

std::set<MethodSig> failing_tests(const TestReport& report) {
  std::set<MethodSig> failing;
  for (const auto& outcome : report.outcomes)
    if (outcome.status != TestStatus::Passed) failing.insert(outcome.test);
  return failing;
}

} // namespace

PairEvaluation evaluate_pair(const ProjectSnapshot& original, const ProjectSnapshot& mutant,
                             const RunOptions& run_options) {
  PairEvaluation out;

  std::vector<MethodSig> suite = all_tests(mutant);
  TestReport original_report = run_tests(all_tests(original), original, run_options);
  TestReport mutant_report = run_tests(suite, mutant, run_options);

  std::set<MethodSig> originally_failing = failing_tests(original_report);
  for (const auto& test : originally_failing)
    out.warnings.push_back({"", 0, 0,
                            "test '" + test.str() +
                                "' already fails on the original version; excluded from the "
                                "fault-revealing set",
                            Severity::Warning});

  for (const auto& test : failing_tests(mutant_report))
    if (!originally_failing.count(test)) out.fault_revealing.push_back(test);
  std::sort(out.fault_revealing.begin(), out.fault_revealing.end());

  // Selection pipeline with the original as the previous version.
  ChangeSet changes = diff_snapshots(original, mutant);
  CallGraph prev_graph = build_call_graph(original, synthesize_test_entries(original));
  CoverageMap prev_cov = coverage_map(prev_graph);
  CallGraph cur_graph = build_call_graph(mutant, synthesize_test_entries(mutant));
  CoverageMap cur_cov = coverage_map(cur_graph);
  SelectedSuite selection = select_tests(changes, mutant, cur_graph, cur_cov, &prev_cov);
  out.selected = selection.tests;

  int x = 0;
  std::set<MethodSig> selected_set(out.selected.begin(), out.selected.end());
  for (const auto& test : out.fault_revealing)
    if (selected_set.count(test)) ++x;

  ValidationMetrics& m = out.metrics;
  m.suite_size = static_cast<int>(suite.size());
  m.selected_count = static_cast<int>(out.selected.size());
  m.fault_revealing_count = static_cast<int>(out.fault_revealing.size());
  m.fault_revealing_selected = x;
  m.tsr = tsr_metric(m.suite_size, m.selected_count);
  m.inclusiveness = inclusiveness_metric(m.fault_revealing_count, m.fault_revealing_selected);
  m.rfdc = rfdc_metric(m.fault_revealing_count, m.fault_revealing_selected);
  return out;
}

ValidationSummary validate_project(const ProjectSnapshot& original, int n, uint64_t seed,
                                   const RunOptions& run_options) {
  ValidationSummary summary;
  if (n <= 0) {
    summary.warnings.push_back(
        {"", 0, 0, "no mutants requested; nothing to validate", Severity::Warning});
    return summary;
  }
  std::vector<Mutant> mutants = generate_mutants(original, n, seed, &summary.warnings);
  if (mutants.empty()) return summary;

  summary.records.resize(mutants.size());
  for (size_t i = 0; i < mutants.size(); ++i) {
    MutantRecord record;
    record.mutant = mutants[i];
    ProjectSnapshot mutated = apply_mutant(original, mutants[i]);
    record.evaluation = evaluate_pair(original, mutated, run_options);
    summary.records[i] = std::move(record);
  }

  double sum_tsr = 0.0, sum_incl = 0.0, sum_rfdc = 0.0;
  bool any_revealing = false;
  for (const auto& record : summary.records) {
    sum_tsr += record.evaluation.metrics.tsr;
    sum_incl += record.evaluation.metrics.inclusiveness;
    sum_rfdc += record.evaluation.metrics.rfdc;
    if (record.evaluation.metrics.fault_revealing_count > 0) any_revealing = true;
    for (const auto& w : record.evaluation.warnings) summary.warnings.push_back(w);
  }
  const double count = static_cast<double>(summary.records.size());
  summary.mean_tsr = sum_tsr / count;
  summary.mean_inclusiveness = sum_incl / count;
  summary.mean_rfdc = sum_rfdc / count;
  summary.no_fault_revealing = !any_revealing;
  return summary;
}

std::string render_validation_text(const ValidationSummary& summary) {
  std::ostringstream out;
  for (const auto& record : summary.records) {
    const Mutant& m = record.mutant;
    const ValidationMetrics& v = record.evaluation.metrics;
    out << "mutant " << m.id << " [" << mutation_operator_name(m.op) << "] " << m.method.str()
        << "#" << m.instruction_index << " (" << m.description << "): "
        << "selected " << v.selected_count << "/" << v.suite_size << ", Y=" << v.fault_revealing_count
        << ", X=" << v.fault_revealing_selected << ", TSR=" << v.tsr << ", I=" << v.inclusiveness
        << ", RFDC=" << v.rfdc << "\n";
  }
  if (summary.records.empty()) {
    out << "no mutants evaluated\n";
    return out.str();
  }
  out << "mutants: " << summary.records.size() << "\n";
  out << "mean TSR:  " << summary.mean_tsr << "\n";
  out << "mean I:    " << summary.mean_inclusiveness << "\n";
  out << "mean RFDC: " << summary.mean_rfdc << "\n";
  if (summary.no_fault_revealing) out << "note: no fault-revealing mutants\n";
  return out.str();
}

std::string render_validation_json(const ValidationSummary& summary) {
  nlohmann::json mutants = nlohmann::json::array();
  for (const auto& record : summary.records) {
    const Mutant& m = record.mutant;
    const ValidationMetrics& v = record.evaluation.metrics;
    nlohmann::json revealing = nlohmann::json::array();
    for (const auto& t : record.evaluation.fault_revealing) revealing.push_back(t.str());
    nlohmann::json selected = nlohmann::json::array();
    for (const auto& t : record.evaluation.selected) selected.push_back(t.str());
    mutants.push_back({{"id", m.id},
                       {"operator", mutation_operator_name(m.op)},
                       {"method", m.method.str()},
                       {"instruction", m.instruction_index},
                       {"description", m.description},
                       {"suite_size", v.suite_size},
                       {"selected_count", v.selected_count},
                       {"fault_revealing_count", v.fault_revealing_count},
                       {"fault_revealing_selected", v.fault_revealing_selected},
                       {"tsr", v.tsr},
                       {"inclusiveness", v.inclusiveness},
                       {"rfdc", v.rfdc},
                       {"fault_revealing", std::move(revealing)},
                       {"selected", std::move(selected)}});
  }
  nlohmann::json doc{{"mutants", std::move(mutants)},
                     {"mutant_count", summary.records.size()},
                     {"mean_tsr", summary.mean_tsr},
                     {"mean_inclusiveness", summary.mean_inclusiveness},
                     {"mean_rfdc", summary.mean_rfdc},
                     {"no_fault_revealing", summary.no_fault_revealing}};
  return doc.dump(2) + "\n";
}

} // namespace catto
