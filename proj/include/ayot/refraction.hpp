#pragma once

#include <optional>

#include "ayot/common.hpp"

namespace ayot {

/// Tax rate gamma(u) in [0, 1), paid on increments of the running maximum.
struct TaxRate {
  RealFn gamma;
  bool constant = false;
  double c = 0.0;

  double operator()(double u) const { return constant ? c : gamma(u); }

  static TaxRate constant_rate(double c);
  static TaxRate of(RealFn gamma);
};

/// The pair (h, g) of running-maximum functionals defining the two
/// Azema-Yor processes V = X - h(Xbar) and U = X - g(Xbar).
/// When built from a tax rate, g(u) = u - gamma_bar(u) = int_{x0}^u gamma
/// and the representation U = X - Xbar + gamma_bar(Xbar) holds pathwise.
struct RefractionSet {
  double x0 = 0.0;
  MaxFunctional h;
  MaxFunctional g;
  std::optional<TaxRate> tax;

  bool from_tax() const { return tax.has_value(); }
  /// gamma_bar(u) = u - int_{x0}^u gamma(z) dz; strictly increasing, in (x0, u].
  double gamma_bar(double u) const { return u - g(u); }
};

/// g(u) = int_{x0}^u gamma(z) dz, with h = g (both processes after-tax).
/// Constant rates stay affine; general rates are tabulated by cumulative
/// quadrature over [x0, window.hi].
RefractionSet refraction_from_tax(const TaxRate& rate, double x0,
                                  const Window& window = {0.0, 200.0});

RefractionSet make_refraction(MaxFunctional h, MaxFunctional g, double x0);

/// Sampled checks of the standing assumptions: h(x0) = g(x0) = 0,
/// 0 <= h,g <= u - x0, and (where requested) g >= h.
void validate_refraction(const RefractionSet& r, double u_hi, bool require_g_ge_h,
                         int grid_points = 256);

}  // namespace ayot
