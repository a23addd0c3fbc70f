#pragma once

#include <cmath>
#include <vector>

#include "ayot/common.hpp"

namespace ayot::detail {

/// Cubic Hermite interpolant on a uniform grid; node values and node
/// derivatives are stored, which the ODE sweeps know exactly.
struct HermiteSeries {
  double lo = 0, dz = 1;
  std::vector<double> y;  // values at nodes
  std::vector<double> d;  // derivatives at nodes

  double hi() const { return lo + dz * (y.size() - 1); }

  bool contains(double x) const { return x >= lo - 1e-12 && x <= hi() + 1e-12; }

  double eval(double x) const {
    const auto [i, t] = locate(x);
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * y[i] + dz * h10 * d[i] + h01 * y[i + 1] + dz * h11 * d[i + 1];
  }

  double deriv(double x) const {
    const auto [i, t] = locate(x);
    const double g00 = 6 * t * (t - 1);
    const double g10 = (1 - t) * (1 - 3 * t);
    const double g01 = -g00;
    const double g11 = t * (3 * t - 2);
    return (g00 * y[i] + g01 * y[i + 1]) / dz + g10 * d[i] + g11 * d[i + 1];
  }

 private:
  std::pair<size_t, double> locate(double x) const {
    if (!contains(x)) throw WindowError("evaluation outside tabulated window");
    double u = (x - lo) / dz;
    auto i = static_cast<size_t>(u);
    if (i >= y.size() - 1) i = y.size() - 2;
    return {i, u - i};
  }
};

}  // namespace ayot::detail
