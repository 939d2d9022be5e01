#pragma once

#include <algorithm>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace fracheat::quadrature {

inline constexpr std::size_t kPanelOrder = 16;

/// Composite Gauss-Legendre rule on [a, b] with about `nodes` evaluations
/// (rounded up to whole 16-point panels).
template <class F>
double composite_gauss(F&& f, double a, double b, std::size_t nodes) {
  using Rule = boost::math::quadrature::gauss<double, kPanelOrder>;
  const std::size_t panels = std::max<std::size_t>(1, (nodes + kPanelOrder - 1) / kPanelOrder);
  const double width = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + width * static_cast<double>(k);
    const double hi = k + 1 == panels ? b : lo + width;
    sum += Rule::integrate(f, lo, hi);
  }
  return sum;
}

}  // namespace fracheat::quadrature
