#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaussbound/config.hpp"
#include "gaussbound/mc_oracle.hpp"
#include "gaussbound/problem.hpp"

namespace gaussbound {

struct ReportRow {
  double param = 0.0;
  BoundFamily family = BoundFamily::Theorem1;
  double value = 0.0;
  double true_gen = 0.0;
  double ratio = 0.0;  // value / true_gen; +infinity for a vacuous bound
  // Per-point Monte-Carlo estimate of the true error (same for every family
  // at the point); absent when the config disables sampling.
  std::optional<McEstimate> mc;
};

struct SweepReport {
  std::string param_name;
  std::vector<ReportRow> rows;   // sweep order, families in config order
  std::string generated_at;      // RFC 3339 UTC; empty unless timestamping is on
};

// Materialize the problem at one sweep value.
ScalarLocationProblem scalar_problem_at(const SweepConfig& cfg, double value);
VectorLocationProblem vector_problem_at(const SweepConfig& cfg, double value);

// Evaluate every (sweep value, family) cell. Points run in parallel; rows come
// back in sweep order, so output is deterministic for a fixed config and seed.
SweepReport run_sweep(const SweepConfig& cfg);

// CSV with header `<param>,family,value,true_gen,ratio,mc_mean,mc_se`, floats
// serialized with 17 significant digits, infinities as "inf", absent
// Monte-Carlo columns empty. A timestamp, when enabled, is a leading comment.
std::string write_csv(const SweepReport& report);

// Same rows as JSON (numbers round-trip exactly; infinities as the string
// "inf", absent Monte-Carlo values as null).
std::string write_json(const SweepReport& report);

}  // namespace gaussbound
