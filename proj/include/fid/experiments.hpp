#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fid/fidcore.hpp"

namespace fid {

enum class ExperimentKind {
  coverage,
  risk_equality,
  dominance,
  octonion_suite,
  behrens_fisher,
};

const char* experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::octonion_suite;
  std::string model;                      // model id where applicable
  std::map<std::string, double> params;   // model parameters / true theta
  std::vector<double> levels{0.90, 0.95, 0.99};
  long reps = 0;    // 0 selects a per-experiment default
  long m = 0;       // fiducial draws per replication; 0 selects a default
  std::uint64_t seed = 0;
};

/// Parses a line-oriented `key = value` spec file; `#` starts a comment.
/// Throws std::runtime_error with the offending line number.
ExperimentSpec parse_spec_file(const std::string& path);

struct ReportCell {
  std::string name;
  double estimate = 0;
  double se = 0;
  double tolerance = 0;   // the numeric threshold the verdict used
  bool pass = false;
  long reps = 0;
  bool negative_control = false;  // expected to fail
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<ReportCell> cells;
  std::vector<std::string> notes;
  double wall_seconds = 0;  // informational; never serialized
  std::string version;

  /// False if any non-negative-control cell failed or a negative control
  /// unexpectedly passed.
  bool all_pass() const;
};

ExperimentReport run_coverage(const ExperimentSpec& spec);
ExperimentReport run_risk_equality(const ExperimentSpec& spec);
ExperimentReport run_dominance(const ExperimentSpec& spec);
ExperimentReport run_octonion_suite(const ExperimentSpec& spec);
ExperimentReport run_behrens_fisher(const ExperimentSpec& spec);

ExperimentReport run_experiment(const ExperimentSpec& spec);

enum class ReportFormat { csv, json };

/// Writes the report; CSV columns are exactly
/// experiment,cell,estimate,se,tolerance,pass,reps,seed. Output is a pure
/// function of (spec, seed, version): wall time is deliberately excluded.
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& path);

}  // namespace fid
