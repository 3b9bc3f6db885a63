#pragma once

#include "catto/diagnostics.hpp"
#include "catto/project_model.hpp"
#include "catto/runner.hpp"
#include "catto/selector.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace catto {

enum class MutationOperator {
  AOR,             // + <-> -, * <-> /
  ROR,             // < <-> <=, == <-> !=
  ConstantReplace, // c -> c+1; c -> 0 when c != 0
  BoolNegate,      // true <-> false
};

const char* mutation_operator_name(MutationOperator op);

// One seeded fault: a single-instruction rewrite in a single production
// method of a non-test class. variant picks among rewrites the operator
// offers at one site (ConstantReplace has two).
struct Mutant {
  int id = 0;
  MutationOperator op = MutationOperator::AOR;
  MethodSig method;
  size_t instruction_index = 0;
  int variant = 0;
  std::string description; // human-readable delta, e.g. "'+' -> '-'"
};

// Per-mutant validation outcome. All ratios live in [0,1];
// rfdc == 1.0 - inclusiveness exactly whenever fault_revealing_count != 0.
struct ValidationMetrics {
  double tsr = 0.0;
  double inclusiveness = 0.0;
  double rfdc = 0.0;
  int suite_size = 0;             // |T|
  int selected_count = 0;         // |S|
  int fault_revealing_count = 0;  // Y
  int fault_revealing_selected = 0; // X
};

// (|T| - |S|) / |T|. suite_size must be >= 1 and selected <= suite_size.
double tsr_metric(int suite_size, int selected);
// X/Y, defined as 1.0 when Y == 0 (nothing to find, nothing missed).
double inclusiveness_metric(int fault_revealing, int fault_revealing_selected);
// 1.0 - X/Y, defined as 0.0 when Y == 0.
double rfdc_metric(int fault_revealing, int fault_revealing_selected);

// Deterministic enumeration of every rewrite site in production methods of
// non-test classes, in (class, method, instruction, variant) order.
std::vector<Mutant> enumerate_mutation_sites(const ProjectSnapshot& snapshot);

// Up to n distinct mutants sampled uniformly from the eligible sites with the
// given seed; ids are 1-based in sampled order. Zero eligible sites yields an
// empty list plus a warning.
std::vector<Mutant> generate_mutants(const ProjectSnapshot& snapshot, int n, uint64_t seed,
                                     std::vector<Diagnostic>* warnings = nullptr);

// Applies the rewrite, re-renders every class to source and re-parses, so the
// result is a legal snapshot whose only semantic difference is the mutated
// instruction. Throws CattoError if the mutant does not map onto the
// snapshot.
ProjectSnapshot apply_mutant(const ProjectSnapshot& original, const Mutant& mutant);

// Retest-all on both versions, then the selection pipeline with the original
// as previous version. Y = tests passing on original and failing on mutant;
// X = |Y ∩ selected|. Tests already failing on the original are excluded
// from Y with a warning.
struct PairEvaluation {
  ValidationMetrics metrics;
  std::vector<MethodSig> fault_revealing; // Y, sorted
  std::vector<MethodSig> selected;        // S, sorted
  std::vector<Diagnostic> warnings;
};

PairEvaluation evaluate_pair(const ProjectSnapshot& original, const ProjectSnapshot& mutant,
                             const RunOptions& run_options = {});

struct MutantRecord {
  Mutant mutant;
  PairEvaluation evaluation;
};

struct ValidationSummary {
  std::vector<MutantRecord> records;
  double mean_tsr = 0.0;
  double mean_inclusiveness = 0.0;
  double mean_rfdc = 0.0;
  bool no_fault_revealing = false; // every mutant had Y == 0
  std::vector<Diagnostic> warnings;
};

// Generates n mutants and evaluates each pair; means are arithmetic over the
// evaluated mutants. n == 0 produces an empty summary with a notice.
ValidationSummary validate_project(const ProjectSnapshot& original, int n, uint64_t seed,
                                   const RunOptions& run_options = {});

std::string render_validation_text(const ValidationSummary& summary);
std::string render_validation_json(const ValidationSummary& summary);

} // namespace catto
