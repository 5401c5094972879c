#pragma once

#include <cstddef>
#include <vector>

#include "nonlocal/game.hpp"

namespace nonlocal {

/// Local deterministic strategy: Alice answers f_a[x], Bob answers f_b[y].
struct DeterministicStrategy {
  std::vector<std::size_t> f_a;
  std::vector<std::size_t> f_b;

  bool operator==(const DeterministicStrategy&) const = default;
};

/// sum_{x,y} pi(x,y) V(f_a(x), f_b(y) | x, y). Throws RangeError on bad outputs
/// or table sizes.
double strategy_value(const GameSpec& spec, const DeterministicStrategy& s);

struct ClassicalResult {
  double omega_c = 0.0;
  // Every strategy within 1e-12 of omega_c, Alice-major lexicographic order.
  std::vector<DeterministicStrategy> maximizers;
  std::size_t strategies_examined = 0;
};

inline constexpr double kEnumerationLimit = 1e7;

/// Exact local value by enumerating all n_a^n_x * n_b^n_y deterministic
/// strategies. Throws TooLarge above kEnumerationLimit.
ClassicalResult classical_value(const GameSpec& spec, unsigned workers = 0);

}  // namespace nonlocal
