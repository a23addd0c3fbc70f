#include "ayot/eigenfunctions.hpp"

#include <algorithm>
#include <cmath>

#include "ayot/detail/hermite.hpp"

namespace ayot {

// Numeric backend: the logarithmic derivative v = (log phi)' solves the
// Riccati equation v' = 2 rate/sigma^2 - (2 mu/sigma^2) v - v^2. The
// increasing branch is the forward-attracting fixed point and the decreasing
// branch the backward-attracting one, so integrating v+ left-to-right and
// v- right-to-left is self-correcting: WKB slope errors at the truncated
// edges decay at rate (r+ - r-) moving inward.
struct EigenPair::Numeric {
  detail::HermiteSeries vp, lp;     // psi+ candidate v+ and log phi+
  detail::HermiteSeries vm, lm;     // v- = (log phi-)' (negative) and log phi-
};

namespace {

struct Coeffs {
  RealFn drift2;  // 2 mu / sigma^2
  RealFn rate2;   // 2 rate / sigma^2
};

double wkb_plus(const Coeffs& c, double z) {
  const double d = c.drift2(z), r = c.rate2(z);
  return 0.5 * (-d + std::sqrt(d * d + 4.0 * r));
}

double wkb_minus(const Coeffs& c, double z) {
  const double d = c.drift2(z), r = c.rate2(z);
  return 0.5 * (-d - std::sqrt(d * d + 4.0 * r));
}

// RK4 step of (v, l) with l' = v, v' = rate2 - drift2 v - v^2.
void rk4(const Coeffs& c, double z, double h, double& v, double& l) {
  auto dv = [&c](double zz, double vv) {
    return c.rate2(zz) - c.drift2(zz) * vv - vv * vv;
  };
  const double k1 = dv(z, v);
  const double k2 = dv(z + h / 2, v + h / 2 * k1);
  const double k3 = dv(z + h / 2, v + h / 2 * k2);
  const double k4 = dv(z + h, v + h * k3);
  // l advanced with the same embedded stages (Simpson on v).
  l += h / 6 * (v + 2 * (v + h / 2 * k1) + 2 * (v + h / 2 * k2) + (v + h * k3));
  v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace

EigenPair EigenPair::brownian(double delta, double sigma, double q) {
  if (q < 0) throw std::invalid_argument("eigenpair: q must be >= 0");
  EigenPair p;
  p.q_ = q;
  p.analytic_ = true;
  p.delta_ = delta;
  p.gamma_ = std::sqrt(delta * delta + 2.0 * q / (sigma * sigma));
  p.w_ = p.gamma_;
  return p;
}

EigenPair EigenPair::natural_scale(const ScaleFunction& s, Window window) {
  EigenPair p;
  p.q_ = 0;
  p.natural_ = true;
  p.domain_ = window;
  const double slo = s.s(window.lo);
  p.s0_ = s.s;
  p.sp0_ = s.s_prime;
  p.s_lo_ = slo - 1.0;  // phi+ = s - s(lo) + 1 > 0 on the window
  p.w_ = 1.0;
  return p;
}

EigenPair EigenPair::numeric(const DiffusionSpec& spec, double q, const RealFn& rate,
                             Window window) {
  if (!(q > 0)) throw std::invalid_argument("numeric eigenpair requires q > 0");
  if (!window.finite()) throw std::invalid_argument("numeric eigenpair requires a finite window");

  Coeffs c;
  c.drift2 = [&spec](double z) {
    const double sg = spec.sigma(z);
    return 2.0 * spec.mu(z) / (sg * sg);
  };
  c.rate2 = [&rate, &spec](double z) {
    const double sg = spec.sigma(z);
    const double r = rate(z);
    if (!(r > 0)) throw std::invalid_argument("eigenpair rate must be positive on the window");
    return 2.0 * r / (sg * sg);
  };

  const double lo = window.lo, hi = window.hi;
  // Step density tracks the fastest WKB slope so the Riccati solve stays
  // accurate when the rate grows across the window (weighted pairs).
  double psi_scale = 1.0;
  for (int i = 0; i <= 16; ++i) {
    const double z = lo + (hi - lo) * i / 16.0;
    psi_scale = std::max(psi_scale, wkb_plus(c, z) - wkb_minus(c, z));
  }
  const double per_unit = std::max(256.0, 64.0 * psi_scale);
  const int n = std::clamp(static_cast<int>((hi - lo) * per_unit), 4000, 1 << 20);
  const double dz = (hi - lo) / n;

  auto num = std::make_shared<Numeric>();
  for (auto* s : {&num->vp, &num->lp, &num->vm, &num->lm}) {
    s->lo = lo;
    s->dz = dz;
    s->y.assign(n + 1, 0.0);
    s->d.assign(n + 1, 0.0);
  }

  // phi+: forward sweep from the WKB slope at the left edge.
  double v = wkb_plus(c, lo), l = 0.0;
  num->vp.y[0] = v;
  num->lp.y[0] = l;
  for (int i = 0; i < n; ++i) {
    rk4(c, lo + i * dz, dz, v, l);
    num->vp.y[i + 1] = v;
    num->lp.y[i + 1] = l;
  }
  // phi-: backward sweep from the WKB slope at the right edge.
  v = wkb_minus(c, hi);
  l = 0.0;
  num->vm.y[n] = v;
  num->lm.y[n] = l;
  for (int i = n; i > 0; --i) {
    rk4(c, lo + i * dz, -dz, v, l);
    num->vm.y[i - 1] = v;
    num->lm.y[i - 1] = l;
  }
  for (int i = 0; i <= n; ++i) {
    const double z = lo + i * dz;
    auto dv = [&c](double zz, double vv) { return c.rate2(zz) - c.drift2(zz) * vv - vv * vv; };
    num->vp.d[i] = dv(z, num->vp.y[i]);
    num->vm.d[i] = dv(z, num->vm.y[i]);
    num->lp.d[i] = num->vp.y[i];
    num->lm.d[i] = num->vm.y[i];
  }

  EigenPair p;
  p.q_ = q;
  p.domain_ = window;
  p.num_ = num;

  // Wronskian against the canonical normalization s'(x0) = 1:
  // w(z) = phi+ phi- (v+ - v-) / s', constant in z up to solver error.
  {
    // Accumulate ln s' on the same grid (trapezoid on drift2 is enough here:
    // only the *constancy* of w matters, its absolute value cancels in every
    // transform; still, keep it accurate).
    std::vector<double> lsp(n + 1, 0.0);
    const int i0 = std::clamp(static_cast<int>(std::lround((spec.x0 - lo) / dz)), 0, n);
    double acc = 0.0;
    std::vector<double> dr(n + 1);
    for (int i = 0; i <= n; ++i) dr[i] = c.drift2(lo + i * dz);
    for (int i = i0; i < n; ++i) {
      acc += -0.5 * (dr[i] + dr[i + 1]) * dz;
      lsp[i + 1] = acc;
    }
    acc = 0.0;
    for (int i = i0; i > 0; --i) {
      acc += 0.5 * (dr[i] + dr[i - 1]) * dz;
      lsp[i - 1] = acc;
    }

    double wmid = 0.0, wmin = kInf, wmax = -kInf;
    const int margin = n / 8;
    for (int i = margin; i <= n - margin; ++i) {
      const double lw = num->lp.y[i] + num->lm.y[i] - lsp[i];
      const double w = std::exp(lw) * (num->vp.y[i] - num->vm.y[i]);
      wmin = std::min(wmin, w);
      wmax = std::max(wmax, w);
      if (i == n / 2) wmid = w;
    }
    p.w_ = wmid;
    p.wronskian_residual_ = (wmax - wmin) / std::fabs(wmid);
  }
  return p;
}

double EigenPair::log_phi_plus(double z) const {
  if (analytic_) return (gamma_ - delta_) * z;
  if (natural_) return std::log(s0_(z) - s_lo_);
  return num_->lp.eval(z);
}

double EigenPair::log_phi_minus(double z) const {
  if (analytic_) return -(gamma_ + delta_) * z;
  if (natural_) return 0.0;
  return num_->lm.eval(z);
}

double EigenPair::psi_plus(double z) const {
  if (analytic_) return gamma_ - delta_;
  if (natural_) return sp0_(z) / (s0_(z) - s_lo_);
  return num_->vp.eval(z);
}

double EigenPair::psi_minus(double z) const {
  if (analytic_) return gamma_ + delta_;
  if (natural_) return 0.0;
  return -num_->vm.eval(z);
}

EigenPair eigenpair(const DiffusionSpec& spec, double q) {
  if (q < 0) throw std::invalid_argument("eigenpair: q must be >= 0");
  if (spec.is_brownian()) return EigenPair::brownian(spec.delta(), spec.bm_sigma, q);
  if (q == 0.0) return EigenPair::natural_scale(scale(spec), spec.window);
  return EigenPair::numeric(spec, q, [q](double) { return q; }, spec.window);
}

EigenPair eigenpair_weighted(const DiffusionSpec& spec, double q, const RealFn& b) {
  if (!b) return eigenpair(spec, q);
  // Constant weight on the Brownian backend just rescales the rate.
  if (spec.is_brownian()) {
    const double b0 = b(spec.x0);
    bool constant = true;
    for (int i = 0; i <= 16; ++i) {
      const double z = spec.window.lo + (spec.window.hi - spec.window.lo) * i / 16.0;
      if (std::fabs(b(z) - b0) > 1e-14 * std::max(1.0, std::fabs(b0))) {
        constant = false;
        break;
      }
    }
    if (constant) return EigenPair::brownian(spec.delta(), spec.bm_sigma, q * b0 * b0);
  }
  if (q == 0.0) return EigenPair::natural_scale(scale(spec), spec.window);
  Window w = spec.window;
  if (!w.finite()) throw std::invalid_argument("weighted eigenpair requires a finite window");
  return EigenPair::numeric(
      spec, q,
      [q, b](double z) {
        const double bv = b(z);
        return q * bv * bv;
      },
      w);
}

}  // namespace ayot
