#include "ayot/scenarios.hpp"

#include <cmath>

namespace ayot {

namespace {

void need(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

RefractionSet tax_refraction(const ScenarioSpec& s, double x0, const Window& w) {
  if (!s.tax) return refraction_from_tax(TaxRate::constant_rate(0.0), x0, w);
  return refraction_from_tax(*s.tax, x0, w);
}

MaxFunctional combine_rel(double alpha, double x0, const MaxFunctional& h) {
  // (1-alpha)(u - x0) + alpha h(u)
  if (h.affine) {
    MaxFunctional m;
    m.slope = (1.0 - alpha) + alpha * h.slope;
    m.intercept = -(1.0 - alpha) * x0 + alpha * h.intercept;
    return m;
  }
  return MaxFunctional::of(
      [alpha, x0, h](double u) { return (1.0 - alpha) * (u - x0) + alpha * h(u); });
}

}  // namespace

ScenarioBundle build(const ScenarioSpec& s, double x0, const Window& window) {
  ScenarioBundle b;
  const bool rel_kind = s.kind == ScenarioKind::RelDrawdownUntilHit ||
                        s.kind == ScenarioKind::RelDrawdownOfVUntilVHits ||
                        s.kind == ScenarioKind::DrawdownUntilRelDrawdown ||
                        s.kind == ScenarioKind::DrawdownOfVUntilRelDrawdownOfV;
  if (rel_kind) {
    need(x0 > 0, "relative-drawdown scenarios require x0 > 0");
    need(s.alpha > 0 && s.alpha < 1, "alpha must lie in (0,1)");
  }

  switch (s.kind) {
    case ScenarioKind::TaxBelowYUntilXHits: {
      RefractionSet tax = tax_refraction(s, x0, window);
      b.refr = make_refraction(MaxFunctional::zero(), tax.g, x0);
      b.refr.tax = tax.tax;
      b.y = s.y_raw;
      b.a = s.a_raw;
      break;
    }
    case ScenarioKind::TaxBelowYUntilUHits: {
      b.refr = tax_refraction(s, x0, window);  // h = g: both after tax
      b.y = s.y_raw;
      b.a = s.a_raw;
      break;
    }
    case ScenarioKind::RelDrawdownUntilHit: {
      need(s.beta >= s.alpha && s.beta <= 1.0, "beta must lie in [alpha, 1]");
      b.refr = make_refraction(MaxFunctional::linear(1.0 - s.beta, x0),
                               MaxFunctional::linear(1.0 - s.alpha, x0), x0);
      b.y = -(1.0 - s.alpha) * x0;
      b.a = s.a_raw;
      break;
    }
    case ScenarioKind::RelDrawdownOfVUntilVHits: {
      // g is the combined functional, not the tax integral itself, so the
      // bundle does not advertise a tax representation.
      RefractionSet tax = tax_refraction(s, x0, window);
      b.refr = make_refraction(tax.h, combine_rel(s.alpha, x0, tax.h), x0);
      b.y = -(1.0 - s.alpha) * x0;
      b.a = s.a_raw;
      break;
    }
    case ScenarioKind::DrawdownUntilRelDrawdown: {
      need(s.y_raw >= 0, "drawdown level y must be >= 0");
      need(s.y_raw < s.alpha * x0, "drawdown level must satisfy y < alpha x0");
      b.refr = make_refraction(MaxFunctional::linear(1.0 - s.alpha, x0),
                               MaxFunctional::linear(1.0, x0), x0);
      b.y = s.y_raw - x0;
      b.a = -(1.0 - s.alpha) * x0;  // tau_{h,a} is then the relative drawdown time
      break;
    }
    case ScenarioKind::DrawdownOfVUntilRelDrawdownOfV: {
      need(s.y_raw >= 0, "drawdown level y must be >= 0");
      need(s.y_raw < s.alpha * x0, "drawdown level must satisfy y < alpha x0");
      RefractionSet tax = tax_refraction(s, x0, window);
      b.refr = make_refraction(combine_rel(s.alpha, x0, tax.h),
                               MaxFunctional::linear(1.0, x0), x0);
      b.y = s.y_raw - x0;
      b.a = -(1.0 - s.alpha) * x0;
      break;
    }
    case ScenarioKind::WeightedArea: {
      need(s.y_raw >= 0, "drawdown level y must be >= 0");
      b.refr = make_refraction(MaxFunctional::zero(), MaxFunctional::linear(1.0, x0), x0);
      b.y = s.y_raw - x0;
      b.a = s.a_raw;
      b.weight = s.weight;
      break;
    }
  }

  need(b.y >= -x0, "scenario produced y < -x0");
  need(b.y < b.a, "scenario produced y >= a");
  validate_refraction(b.refr, x0 + 10.0, /*require_g_ge_h=*/true);
  return b;
}

}  // namespace ayot
