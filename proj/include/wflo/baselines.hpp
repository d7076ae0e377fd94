#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "wflo/qip_mrf.hpp"

namespace wflo {

struct BaselineResult {
  Layout layout;
  double value = 0.0;
};

inline constexpr double kDefaultEnumerationBudget = 1e7;

/// Exhaustive enumeration of every feasible layout in lexicographic order
/// of the selected index sets; the first optimum wins ties. Throws when
/// C(N, K) exceeds `budget` or no feasible layout exists.
BaselineResult brute_force(const QipModel& qip, double budget = kDefaultEnumerationBudget);

/// Same enumeration under an arbitrary cost (smaller is better), e.g. the
/// negated true farm power.
BaselineResult brute_force(const QipModel& qip, const std::function<double(const Layout&)>& cost,
                           double budget = kDefaultEnumerationBudget);

/// Adds one turbine at a time at the compatible cell with the smallest
/// increase in X^T W X, lowest index on ties.
Layout greedy_construct(const QipModel& qip);

/// repair_swap from the greedy layout and from `restarts - 1` random
/// feasible layouts drawn with a 64-bit Mersenne Twister seeded by `seed`.
/// Returns the lowest-energy result, earliest restart on ties.
BaselineResult local_search(const QipModel& qip, std::size_t restarts, std::uint64_t seed);

}  // namespace wflo
