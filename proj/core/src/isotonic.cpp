#include "ascifit/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ascifit/error.hpp"

namespace ascifit {
namespace {

void require_valid(std::span<const double> y, const char* where) {
  if (y.empty()) throw Error(ErrorCode::EmptyInput, std::string(where) + ": empty input");
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, std::string(where) + ": non-finite entry");
  }
}

// Pooled run; the level is kept as (sum, count) and divided on demand.
struct Run {
  std::size_t start;
  std::size_t count;
  double sum;

  double level() const { return sum / static_cast<double>(count); }
};

}  // namespace

IsotonicFit pava(std::span<const double> y) {
  require_valid(y, "pava");

  std::vector<Run> stack;
  stack.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    stack.push_back({i, 1, y[i]});
    // Strict violation only: equal neighbours stay separate.
    while (stack.size() > 1) {
      const Run& top = stack.back();
      const Run& prev = stack[stack.size() - 2];
      if (!(prev.level() > top.level())) break;
      Run merged{prev.start, prev.count + top.count, prev.sum + top.sum};
      stack.pop_back();
      stack.back() = merged;
    }
  }

  IsotonicFit fit;
  fit.values.resize(y.size());
  fit.blocks.reserve(stack.size());
  for (const Run& run : stack) {
    const double level = run.level();
    std::fill_n(fit.values.begin() + static_cast<std::ptrdiff_t>(run.start), run.count, level);
    fit.blocks.push_back({run.start, run.start + run.count - 1, level});
  }
  return fit;
}

IsotonicFit pava_lower_bounded(std::span<const double> y, double floor) {
  if (!std::isfinite(floor)) throw Error(ErrorCode::NonFinite, "pava_lower_bounded: non-finite floor");
  IsotonicFit fit = pava(y);
  for (double& v : fit.values) v = std::max(v, floor);

  std::vector<IsotonicBlock> blocks;
  blocks.reserve(fit.blocks.size());
  for (const IsotonicBlock& b : fit.blocks) {
    if (b.level < floor) {
      if (!blocks.empty() && blocks.back().level == floor) {
        blocks.back().end = b.end;
      } else {
        blocks.push_back({b.start, b.end, floor});
      }
    } else {
      blocks.push_back(b);
    }
  }
  fit.blocks = std::move(blocks);
  return fit;
}

std::vector<double> maxmin_oracle(std::span<const double> y) {
  if (y.empty()) throw Error(ErrorCode::EmptyInput, "maxmin_oracle: empty input");
  const std::size_t n = y.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + y[i];
  auto mean = [&](std::size_t j, std::size_t k) {
    return (prefix[k + 1] - prefix[j]) / static_cast<double>(k - j + 1);
  };

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= i; ++j) {
      double inner = std::numeric_limits<double>::infinity();
      for (std::size_t k = i; k < n; ++k) inner = std::min(inner, mean(j, k));
      best = std::max(best, inner);
    }
    out[i] = best;
  }
  return out;
}

}  // namespace ascifit
