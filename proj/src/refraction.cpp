#include "ayot/refraction.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ayot/detail/hermite.hpp"
#include "ayot/quadrature.hpp"

namespace ayot {

namespace {

double check_rate(const TaxRate& rate, double u) {
  const double v = rate(u);
  if (!(v >= 0.0 && v < 1.0))
    throw std::invalid_argument("tax rate outside [0,1) at u=" + std::to_string(u));
  return v;
}

}  // namespace

TaxRate TaxRate::constant_rate(double c) {
  if (!(c >= 0.0 && c < 1.0))
    throw std::invalid_argument("tax rate must lie in [0,1)");
  TaxRate t;
  t.constant = true;
  t.c = c;
  t.gamma = [c](double) { return c; };
  return t;
}

TaxRate TaxRate::of(RealFn gamma) {
  TaxRate t;
  t.gamma = std::move(gamma);
  return t;
}

RefractionSet refraction_from_tax(const TaxRate& rate, double x0, const Window& window) {
  RefractionSet r;
  r.x0 = x0;
  r.tax = rate;

  if (rate.constant) {
    r.g = MaxFunctional::linear(rate.c, x0);
    r.h = r.g;
    return r;
  }

  // Cumulative integral of gamma on [x0, window.hi], node derivatives are
  // gamma itself so the Hermite table is locally quartic-accurate.
  const double hi = std::max(window.hi, x0 + 1.0);
  const int n = std::clamp(static_cast<int>((hi - x0) * 64), 2048, 65536);
  const double dz = (hi - x0) / n;

  auto tab = std::make_shared<detail::HermiteSeries>();
  tab->lo = x0;
  tab->dz = dz;
  tab->y.assign(n + 1, 0.0);
  tab->d.assign(n + 1, 0.0);
  double acc = 0.0;
  tab->d[0] = check_rate(rate, x0);
  for (int i = 0; i < n; ++i) {
    const double a = x0 + i * dz, b = a + dz;
    acc += quad::gk15(rate.gamma, a, b).value;
    tab->y[i + 1] = acc;
    tab->d[i + 1] = check_rate(rate, b);
  }

  r.g = MaxFunctional::of([tab](double u) { return tab->eval(u); });
  r.h = r.g;
  return r;
}

RefractionSet make_refraction(MaxFunctional h, MaxFunctional g, double x0) {
  RefractionSet r;
  r.x0 = x0;
  r.h = std::move(h);
  r.g = std::move(g);
  return r;
}

void validate_refraction(const RefractionSet& r, double u_hi, bool require_g_ge_h, int n) {
  const double x0 = r.x0;
  if (std::fabs(r.h(x0)) > 1e-9 || std::fabs(r.g(x0)) > 1e-9)
    throw std::invalid_argument("refraction: h(x0) and g(x0) must vanish");
  for (int i = 0; i <= n; ++i) {
    const double u = x0 + (u_hi - x0) * i / n;
    const double hv = r.h(u), gv = r.g(u), cap = u - x0;
    if (hv < -1e-12 || hv > cap + 1e-9)
      throw std::invalid_argument("refraction: h(u) outside [0, u - x0] at u=" +
                                  std::to_string(u));
    if (gv < -1e-12 || gv > cap + 1e-9)
      throw std::invalid_argument("refraction: g(u) outside [0, u - x0] at u=" +
                                  std::to_string(u));
    if (require_g_ge_h && gv < hv - 1e-12)
      throw std::invalid_argument("refraction: g(u) >= h(u) violated at u=" +
                                  std::to_string(u));
    if (r.from_tax()) {
      const double gm = (*r.tax)(u);
      if (!(gm >= 0.0 && gm < 1.0))
        throw std::invalid_argument("tax rate outside [0,1) at u=" + std::to_string(u));
    }
  }
}

}  // namespace ayot
