#include "ayot/scale.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ayot/detail/hermite.hpp"

namespace ayot {

namespace {

struct ScaleTable {
  detail::HermiteSeries s;      // s with derivative s'
  detail::HermiteSeries lnsp;   // ln s' with derivative -2mu/sigma^2
};

// RK4 on the pair (ln s', s) from one node to the next.
void advance(const DiffusionSpec& spec, double z, double h, double& lnsp, double& sv) {
  auto f = [&spec](double zz, double lv, double& dl, double& ds) {
    const double sg = spec.sigma(zz);
    dl = -2.0 * spec.mu(zz) / (sg * sg);
    ds = std::exp(lv);
  };
  const int sub = 4;
  const double hh = h / sub;
  for (int k = 0; k < sub; ++k) {
    double l1, s1, l2, s2, l3, s3, l4, s4;
    f(z, lnsp, l1, s1);
    f(z + hh / 2, lnsp + hh / 2 * l1, l2, s2);
    f(z + hh / 2, lnsp + hh / 2 * l2, l3, s3);
    f(z + hh, lnsp + hh * l3, l4, s4);
    lnsp += hh / 6 * (l1 + 2 * l2 + 2 * l3 + l4);
    sv += hh / 6 * (s1 + 2 * s2 + 2 * s3 + s4);
    z += hh;
  }
}

std::shared_ptr<ScaleTable> build_table(const DiffusionSpec& spec) {
  const double lo = spec.window.lo, hi = spec.window.hi;
  const int n = std::clamp(static_cast<int>((hi - lo) * 128), 4096, 131072);
  const double dz = (hi - lo) / n;

  auto tbl = std::make_shared<ScaleTable>();
  tbl->s.lo = tbl->lnsp.lo = lo;
  tbl->s.dz = tbl->lnsp.dz = dz;
  tbl->s.y.assign(n + 1, 0);
  tbl->s.d.assign(n + 1, 0);
  tbl->lnsp.y.assign(n + 1, 0);
  tbl->lnsp.d.assign(n + 1, 0);

  // Anchor s(x0) = 0, s'(x0) = 1 at the node nearest x0, then sweep both ways.
  int i0 = static_cast<int>(std::lround((spec.x0 - lo) / dz));
  i0 = std::clamp(i0, 0, n);

  double lnsp = 0.0, sv = 0.0;
  // Correct to the exact anchor: advance from x0 to the node.
  {
    const double z0 = lo + i0 * dz;
    advance(spec, spec.x0, z0 - spec.x0, lnsp, sv);
  }
  tbl->lnsp.y[i0] = lnsp;
  tbl->s.y[i0] = sv;
  double l = lnsp, s = sv;
  for (int i = i0; i < n; ++i) {
    advance(spec, lo + i * dz, dz, l, s);
    tbl->lnsp.y[i + 1] = l;
    tbl->s.y[i + 1] = s;
  }
  l = lnsp;
  s = sv;
  for (int i = i0; i > 0; --i) {
    advance(spec, lo + i * dz, -dz, l, s);
    tbl->lnsp.y[i - 1] = l;
    tbl->s.y[i - 1] = s;
  }
  for (int i = 0; i <= n; ++i) {
    const double z = lo + i * dz;
    const double sg = spec.sigma(z);
    tbl->s.d[i] = std::exp(tbl->lnsp.y[i]);
    tbl->lnsp.d[i] = -2.0 * spec.mu(z) / (sg * sg);
  }
  return tbl;
}

}  // namespace

ScaleFunction scale(const DiffusionSpec& spec) {
  ScaleFunction out;
  if (spec.is_brownian()) {
    const double delta = spec.delta();
    out.backend = ScaleFunction::Backend::BrownianClosedForm;
    out.s = [delta](double z) { return -std::expm1(-2.0 * delta * z) / delta; };
    out.s_prime = [delta](double z) { return 2.0 * std::exp(-2.0 * delta * z); };
    out.domain = {-kInf, kInf};
    return out;
  }
  auto tbl = build_table(spec);
  out.backend = ScaleFunction::Backend::Numeric;
  out.domain = spec.window;
  out.s = [tbl](double z) { return tbl->s.eval(z); };
  out.s_prime = [tbl](double z) { return std::exp(tbl->lnsp.eval(z)); };
  return out;
}

}  // namespace ayot
