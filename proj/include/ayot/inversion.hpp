#pragma once

#include <complex>
#include <vector>

#include "ayot/common.hpp"

namespace ayot {

struct InversionConfig {
  enum class Method { GaverStehfest, FixedTalbot };
  Method method = Method::GaverStehfest;
  /// Gaver-Stehfest: even order in [8, 20]. Talbot: node count.
  int order = 14;
  std::vector<double> t_grid;  ///< strictly increasing positive times
};

struct CdfPoint {
  double t = 0;
  double F = 0;
};

struct InversionResult {
  std::vector<CdfPoint> points;
  /// Gaver-Stehfest is fragile: set when order-N and order-(N-2) values
  /// disagree by more than 1e-3 anywhere on the grid.
  bool cancellation_warning = false;
  double max_order_disagreement = 0;
};

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

/// Turns the Laplace transform q -> E[e^{-q tau}] of a nonnegative variable
/// into CDF values F(t) = P(tau <= t) by inverting transform(q)/q. Output is
/// clipped to [0,1] and monotone-projected (pool-adjacent-violators).
///
/// The real-argument overload runs Gaver-Stehfest (real abscissae only); the
/// complex overload runs the fixed Talbot contour and suits transforms with
/// an analytic continuation, such as the closed-form benchmarks.
InversionResult invert_cdf(const RealFn& transform, const InversionConfig& cfg);
InversionResult invert_cdf(const ComplexFn& transform, const InversionConfig& cfg);

}  // namespace ayot
