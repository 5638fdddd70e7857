#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaussbound/bound_result.hpp"

namespace gaussbound {

enum class ProblemKind { Scalar, Vector };
enum class ReportFormat { Csv, Json };
enum class WeightScheme { Uniform, OneHot, Explicit };
enum class MetricKind { Identity, InverseCovariance, Diagonal };

// A validated sweep description parsed from a flat key = value config file.
// Exactly one field is swept; matrix-valued fields reference the sweep by
// name in their entries (kept as strings until materialization).
struct SweepConfig {
  ProblemKind kind = ProblemKind::Scalar;
  std::vector<BoundFamily> families;
  std::string sweep_name;
  std::vector<double> sweep_values;

  int n = 0;  // 0 while swept
  double noise_variance = 0.0;
  WeightScheme weights = WeightScheme::Uniform;
  std::vector<double> explicit_weights;
  double proxy = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t mc_samples = 0;  // 0 disables the Monte-Carlo columns
  std::uint64_t seed = 1;
  ReportFormat format = ReportFormat::Csv;
  std::string output;  // empty writes to stdout
  bool timestamp = false;

  // Scalar problem template.
  double mean = 0.0;
  double variance = 1.0;

  // Vector problem template.
  int dim = 0;
  std::vector<double> mean_vec;         // empty means zeros
  std::vector<std::string> sigma_diag;  // numbers or the sweep name
  std::vector<std::vector<double>> sigma_rows;
  MetricKind metric = MetricKind::Identity;
  std::vector<std::string> metric_diag;
};

// Parse outcome: `config` is set exactly when `diagnostics` is empty. Each
// diagnostic names the offending field and the violated constraint.
struct ConfigResult {
  std::optional<SweepConfig> config;
  std::vector<std::string> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

// Environment variable consulted for the default seed when the config has no
// `seed` key; an explicit config value always wins.
inline constexpr const char* kSeedEnvVar = "GAUSSBOUND_SEED";

// Parse config text plus key=value override strings (applied after the file,
// last one wins). Never throws on bad input; problems become diagnostics.
ConfigResult parse_sweep_config(const std::string& text,
                                std::span<const std::string> overrides = {});

// Same, reading `path` first. A missing or unreadable file is a diagnostic.
ConfigResult load_sweep_config(const std::string& path,
                               std::span<const std::string> overrides = {});

}  // namespace gaussbound
