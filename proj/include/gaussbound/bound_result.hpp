#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gaussbound {

// Bound variants. Scalar families first, then the two multivariate ones.
enum class BoundFamily {
  Theorem1,
  Cor1First,
  Cor1Second,
  Cor2First,
  Cor3First,
  Cor3Second,
  Cor4,
  EqMibFirst,
  EqMibSecond,
  XuRaginsky,
  BuEtAl,
  TrueGen,
  DirectVec,
  DecomposedVec,
};

// CLI / report identifier, e.g. "cor1_second".
std::string to_string(BoundFamily f);
// Inverse of to_string; throws std::invalid_argument for unknown names.
BoundFamily bound_family_from_string(const std::string& name);

struct BoundResult {
  double value = 0.0;
  BoundFamily family = BoundFamily::Theorem1;
  // Optimal lambda per summand where the family has one (per index, per
  // index-eigenvalue pair flattened index-major, or a single shared value).
  std::optional<std::vector<double>> per_index_lambda;
  // False when the bound is +infinity (vacuous).
  bool finite = true;
  // False when an inner optimization hit its iteration budget; the value is
  // then still a valid upper bound, just not certified to tolerance.
  bool converged = true;
};

}  // namespace gaussbound
