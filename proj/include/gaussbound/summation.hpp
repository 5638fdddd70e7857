#pragma once

#include <span>

namespace gaussbound {

// Index-ascending pairwise summation. Deterministic for a fixed input order,
// with O(log n) error growth instead of O(n).
double pairwise_sum(std::span<const double> xs);

}  // namespace gaussbound
