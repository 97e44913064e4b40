#pragma once

#include "bayesmv/params.hpp"

#include <cstddef>

namespace bayesmv {

/// Composite Simpson rule on a uniform grid of `intervals` panels over [a, b].
/// An odd interval count is bumped to the next even one; a == b gives 0. The
/// last node is exactly b.
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals) {
  if (intervals == 0) throw DomainError("simpson: need at least one interval");
  if (a == b) return 0.0;
  const std::size_t n = intervals + (intervals % 2);
  const double h = (b - a) / static_cast<double>(n);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double x = a + static_cast<double>(i) * h;
    (i % 2 ? odd : even) += f(x);
  }
  return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

}  // namespace bayesmv
