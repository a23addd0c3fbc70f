#include "ayot/diffusion.hpp"

#include <algorithm>
#include <cmath>

namespace ayot {

DiffusionSpec make_brownian(double mu, double sigma, double x0) {
  if (!(sigma > 0)) throw std::invalid_argument("make_brownian: sigma must be > 0");
  if (mu == 0.0) throw std::invalid_argument("make_brownian: mu must be nonzero");
  DiffusionSpec s;
  s.kind = AnalyticKind::BrownianWithDrift;
  s.bm_mu = mu;
  s.bm_sigma = sigma;
  s.x0 = x0;
  s.mu = [mu](double) { return mu; };
  s.sigma = [sigma](double) { return sigma; };
  s.window = {x0 - 60.0, x0 + 200.0};
  return s;
}

DiffusionSpec make_custom(RealFn mu, RealFn sigma, double x0, Window window,
                          double lower_boundary) {
  if (!window.finite()) throw std::invalid_argument("make_custom: window must be finite");
  if (!(window.lo < x0 && x0 < window.hi))
    throw std::invalid_argument("make_custom: x0 must lie inside the window");
  DiffusionSpec s;
  s.kind = AnalyticKind::GeneralNumeric;
  s.mu = std::move(mu);
  s.sigma = std::move(sigma);
  s.x0 = x0;
  s.window = window;
  s.lower_boundary = lower_boundary;
  return s;
}

ValidationReport validate(const DiffusionSpec& spec, int n) {
  ValidationReport rep;
  const double lo = std::max(spec.window.lo, spec.lower_boundary + 1e-9);
  const double hi = spec.window.hi;
  const double dz = (hi - lo) / n;

  double lip = 0, growth = 0, smin = kInf;
  double pm = spec.mu(lo), ps = spec.sigma(lo);
  for (int i = 0; i <= n; ++i) {
    const double z = lo + i * dz;
    const double m = spec.mu(z), s = spec.sigma(z);
    if (!(s > 0)) {
      rep.ok = false;
      rep.notes.push_back("sigma not positive at z=" + std::to_string(z));
    }
    smin = std::min(smin, s);
    growth = std::max(growth, (m * m + s * s) / (1.0 + z * z));
    if (i > 0) lip = std::max(lip, (std::fabs(m - pm) + std::fabs(s - ps)) / dz);
    pm = m;
    ps = s;
  }
  rep.lipschitz_estimate = lip;
  rep.growth_estimate = growth;
  rep.sigma_min = smin;

  bool zero_drift = true;
  for (int i = 0; i <= 16; ++i)
    if (spec.mu(lo + i * (hi - lo) / 16.0) != 0.0) zero_drift = false;
  if (zero_drift)
    rep.notes.push_back(
        "drift is identically zero on the sampled window; scale is unbounded on both sides "
        "and first-hitting transforms may be slow to converge");
  return rep;
}

}  // namespace ayot
