#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ascifit {

/// A maximal run of equal fitted values: indices [start, end] inclusive.
struct IsotonicBlock {
  std::size_t start = 0;
  std::size_t end = 0;
  double level = 0.0;

  std::size_t size() const noexcept { return end - start + 1; }
};

struct IsotonicFit {
  std::vector<double> values;
  std::vector<IsotonicBlock> blocks;
};

/// Least-squares projection of y onto the non-decreasing cone by pool
/// adjacent violators. O(n). Throws EmptyInput / NonFinite.
IsotonicFit pava(std::span<const double> y);

/// Projection onto {floor <= x_1 <= ... <= x_n}, computed as
/// max(pava(y), floor) componentwise. Blocks lying below the floor are merged
/// into a single leading block at the floor level.
IsotonicFit pava_lower_bounded(std::span<const double> y, double floor);

/// max_{j<=i} min_{k>=i} mean(y_j..y_k), evaluated directly in O(n^3).
/// Reference implementation for small inputs only.
std::vector<double> maxmin_oracle(std::span<const double> y);

}  // namespace ascifit
