#include "ayot/occupation.hpp"

#include <algorithm>
#include <cmath>

#include "ayot/quadrature.hpp"

namespace ayot {

namespace {

// All transforms are sub-probability transforms; tiny numerical excursions
// outside [0,1] are clipped, anything larger is a genuine failure.
double clip_unit(double v, double err, double where) {
  const double eps = std::max(1e-9, 4.0 * err);
  if (v < -eps || v > 1.0 + eps)
    throw ConvergenceError("transform value escaped [0,1]: " + std::to_string(v), where);
  return std::clamp(v, 0.0, 1.0);
}

double cap_by_domain(double m_max, const EigenPair& pair) {
  const Window d = pair.domain();
  if (std::isfinite(d.hi)) return std::min(m_max, d.hi);
  return m_max;
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

quad::SweepOptions sweep_options(const QuadOptions& opt, double m_cap) {
  quad::SweepOptions so;
  so.rel_tol = opt.rel_tol * 0.1;
  so.abs_tol = opt.abs_tol * 0.1;
  so.m_max = std::min(opt.m_max, m_cap);
  return so;
}

TransformResult from_sweep(const quad::SweepResult& sw, double extra = 0.0) {
  TransformResult r;
  r.value = clip_unit(sw.integral + extra, sw.abs_err, sw.m_end);
  r.abs_err_estimate = sw.abs_err;
  r.truncation_point = sw.m_end;
  r.n_evals = sw.n_evals;
  r.backend = TransformBackend::Quadrature;
  return r;
}

}  // namespace

TransformResult lt_occupation_until_hitting(const ScaleFunction& scale, const WFunctions& wfs,
                                            const RefractionSet& refr, double y, double a,
                                            double q, const QuadOptions& opt) {
  const double x0 = refr.x0;
  require(q >= 0, "lt_occupation_until_hitting: q >= 0 required");
  require(-x0 <= y && y < a, "lt_occupation_until_hitting: -x0 <= y < a required");
  require(std::fabs(wfs.q() - q) < 1e-12, "WFunctions rate does not match q");
  validate_refraction(refr, x0 + 10.0, /*require_g_ge_h=*/true);

  const auto& s = scale.s;
  const auto& sp = scale.s_prime;
  auto alpha = [&](double u) { return refr.g(u) - y; };
  auto beta = [&](double u) { return refr.h(u) - a; };

  // kappa(u): the bracketed integrand of the exponent; f(m): the density-like
  // outer factor. Both are assembled from the stable ratio R = W1/W.
  auto kappa = [&](double u) {
    const double al = alpha(u), be = beta(u);
    const double R = wfs.ratio_W1_W(al, be);
    const double T = (s(u) - s(al)) / sp(al);
    if (!std::isfinite(T))
      throw ConvergenceError("scale density underflow in occupation integrand", u);
    return (sp(u) / sp(al)) * R / (1.0 + T * R);
  };
  auto log_f = [&](double m) {
    const double al = alpha(m), be = beta(m);
    const double R = wfs.ratio_W1_W(al, be);
    const double T = (s(m) - s(al)) / sp(al);
    return std::log(sp(m)) - wfs.log_W(al, be) - std::log1p(T * R);
  };

  auto sw = quad::exp_weighted_sweep(kappa, log_f, x0,
                                     sweep_options(opt, cap_by_domain(opt.m_max, wfs.pair())));
  if (!sw.converged)
    throw ConvergenceError("outer integral did not converge by m = " + std::to_string(sw.m_end),
                           sw.m_end);
  return from_sweep(sw);
}

TransformResult lt_hitting_time(const ScaleFunction& scale, const WFunctions& wfs,
                                const MaxFunctional& h, double x0, double a, double q,
                                const QuadOptions& opt) {
  require(q >= 0, "lt_hitting_time: q >= 0 required");
  require(a > -x0, "lt_hitting_time: a > -x0 required");

  auto beta = [&](double u) { return h(u) - a; };
  auto kappa = [&](double u) { return wfs.ratio_W1_W(u, beta(u)); };
  auto log_f = [&](double m) { return std::log(scale.s_prime(m)) - wfs.log_W(m, beta(m)); };

  auto sw = quad::exp_weighted_sweep(kappa, log_f, x0,
                                     sweep_options(opt, cap_by_domain(opt.m_max, wfs.pair())));
  if (!sw.converged)
    throw ConvergenceError("outer integral did not converge by m = " + std::to_string(sw.m_end),
                           sw.m_end);
  return from_sweep(sw);
}

namespace {

// Shared engine for the exponential-clock transforms: computes
//   E_x[ e^{-p O_y^{q,g}} ] = 1 - survival - integral
// where the integrand denominators D(u) = W_{q,1}(al,u) + W_q(u,al) A(al)
// are reduced to psi ratios; E2 = phi+(u) phi-(al) cancels throughout except
// in log D, which enters log f.
TransformResult exp_clock_engine(const ScaleFunction& scale, const WFunctions& wfs,
                                 const RefractionSet& refr, double y, double q, double p,
                                 const EigenPair& pair_qp, const QuadOptions& opt,
                                 bool complement) {
  const double x0 = refr.x0;
  const EigenPair& pq = wfs.pair();
  const auto& sp = scale.s_prime;

  auto alpha = [&](double u) { return refr.g(u) - y; };

  auto parts = [&](double u, double& kap, double& log_D) {
    const double al = alpha(u);
    const double pp_u = pq.psi_plus(u), pm_u = pq.psi_minus(u);
    const double pp_a = pq.psi_plus(al), pm_a = pq.psi_minus(al);
    const double A = pair_qp.psi_plus(al);
    const double d = (pq.log_phi_plus(u) - pq.log_phi_plus(al)) +
                     (pq.log_phi_minus(al) - pq.log_phi_minus(u));
    const double r = std::exp(-d);
    const double denom = pm_a + pp_a * r + A * (-std::expm1(-d));
    const double numer = pp_u * pm_a - pp_a * pm_u * r + A * (pp_u + pm_u * r);
    kap = numer / denom;
    log_D = pq.log_phi_plus(u) + pq.log_phi_minus(al) - std::log(wfs.wronskian()) +
            std::log(denom);
  };

  auto kappa = [&](double u) {
    double kap, ld;
    parts(u, kap, ld);
    return kap;
  };
  auto log_f = [&](double m) {
    double kap, ld;
    parts(m, kap, ld);
    const double A = pair_qp.psi_plus(alpha(m));
    return std::log(p / (q + p)) + std::log(sp(m)) + std::log(A) - ld;
  };

  auto so = sweep_options(opt, cap_by_domain(opt.m_max, pq));
  so.require_survival_decay = true;  // exp(-I(inf)) is part of the value here
  auto sw = quad::exp_weighted_sweep(kappa, log_f, x0, so);
  if (!sw.converged)
    throw ConvergenceError("exponential-clock integral did not converge by m = " +
                               std::to_string(sw.m_end),
                           sw.m_end);

  TransformResult r;
  // complement = false: E[e^{-pO}] = 1 - surv - integral
  // complement = true:  1 - E[e^{-pO}] = surv + integral  (bankruptcy transform)
  r.value = complement ? sw.survival + sw.integral : 1.0 - sw.survival - sw.integral;
  r.value = clip_unit(r.value, sw.abs_err, sw.m_end);
  r.abs_err_estimate = sw.abs_err + sw.survival;
  r.truncation_point = sw.m_end;
  r.n_evals = sw.n_evals;
  r.backend = TransformBackend::Quadrature;
  return r;
}

}  // namespace

TransformResult lt_occupation_until_exp(const DiffusionSpec& spec, const ScaleFunction& scale,
                                        const WFunctions& wfs, const RefractionSet& refr,
                                        double y, double q, double p, const QuadOptions& opt,
                                        const EigenPair* pair_qp) {
  const double x0 = refr.x0;
  require(p > 0 && q > 0, "lt_occupation_until_exp: p, q > 0 required");
  require(y >= -x0, "lt_occupation_until_exp: y >= -x0 required");
  require(std::fabs(wfs.q() - q) < 1e-12, "WFunctions rate does not match q");
  validate_refraction(refr, x0 + 10.0, /*require_g_ge_h=*/false);

  EigenPair local = pair_qp ? *pair_qp : eigenpair(spec, q + p);
  require(std::fabs(local.q() - (q + p)) < 1e-9, "pair_qp must be at rate q + p");
  return exp_clock_engine(scale, wfs, refr, y, q, p, local, opt, /*complement=*/false);
}

TransformResult lt_occupation_below_level_exp(const DiffusionSpec& spec,
                                              const WFunctions& wfs, double b_level, double q,
                                              double p) {
  require(p > 0 && q > 0, "lt_occupation_below_level_exp: p, q > 0 required");
  const double x0 = spec.x0;
  const EigenPair& pq = wfs.pair();
  const EigenPair pqp = eigenpair(spec, q + p);

  const double A = pqp.psi_plus(b_level);         // phi+'_{q+p}(b)/phi+_{q+p}(b)
  const double pm_b = pq.psi_minus(b_level);      // -phi-'_q(b)/phi-_q(b)
  TransformResult r;
  r.backend = TransformBackend::ClosedForm;
  r.n_evals = 4;
  if (x0 >= b_level) {
    // 1 - p/(q+p) * A * (phi-_q(x)/phi-_q(b)) / (A + psi-_q(b))
    const double ratio = std::exp(pq.log_phi_minus(x0) - pq.log_phi_minus(b_level));
    r.value = 1.0 - (p / (q + p)) * A * ratio / (A + pm_b);
  } else {
    // p/(q+p) * (phi+_{q+p}(x)/phi+_{q+p}(b)) * psi-_q(b)/(A + psi-_q(b)) + q/(q+p)
    const double ratio = std::exp(pqp.log_phi_plus(x0) - pqp.log_phi_plus(b_level));
    r.value = (p / (q + p)) * ratio * pm_b / (A + pm_b) + q / (q + p);
  }
  r.value = clip_unit(r.value, 0.0, b_level);
  return r;
}

TransformResult lt_bankruptcy_tax(const DiffusionSpec& spec, const ScaleFunction& scale,
                                  const WFunctions& wfs, const RefractionSet& refr, double y,
                                  double q, double omega, const QuadOptions& opt) {
  require(q > 0 && omega > 0, "lt_bankruptcy_tax: q, omega > 0 required");
  require(y >= -refr.x0, "lt_bankruptcy_tax: y >= -x0 required");
  require(refr.from_tax(), "lt_bankruptcy_tax: refraction must be built from a tax rate");
  const EigenPair pqo = eigenpair(spec, q + omega);
  return exp_clock_engine(scale, wfs, refr, y, q, omega, pqo, opt, /*complement=*/true);
}

TransformResult lt_weighted_occupation(const DiffusionSpec& spec, const ScaleFunction& scale,
                                       const RefractionSet& refr, double y, double a, double q,
                                       const RealFn& b, const QuadOptions& opt) {
  EigenPair starred = eigenpair_weighted(spec, q, b);
  WFunctions wstar(std::make_shared<EigenPair>(std::move(starred)), scale);
  return lt_occupation_until_hitting(scale, wstar, refr, y, a, q, opt);
}

// ---------------------------------------------------------------------------
// Brownian constant-tax fast paths (x0 = 0).

namespace {

// log(gamma cosh z + gp sinh z) for z >= 0, overflow-free.
double log_cosh_mix(double gamma, double gp, double z) {
  return z + std::log(0.5 * (gamma + gp) + 0.5 * (gamma - gp) * std::exp(-2.0 * z));
}

}  // namespace

TransformResult lt_occupation_bm_tax(double delta, double sigma, double c, double y, double a,
                                     double q, const QuadOptions& opt) {
  require(sigma > 0, "lt_occupation_bm_tax: sigma > 0 required");
  require(c >= 0 && c < 1, "lt_occupation_bm_tax: c in [0,1) required");
  require(0 <= y && y < a, "lt_occupation_bm_tax: 0 <= y < a required");
  require(q >= 0, "lt_occupation_bm_tax: q >= 0 required");

  const double gamma = std::sqrt(delta * delta + 2.0 * q / (sigma * sigma));
  const double th = gamma * (a - y);

  if (c == 0.0) {
    TransformResult r;
    r.backend = TransformBackend::ClosedForm;
    r.n_evals = 1;
    // gamma e^{-delta(a+y)} / (gamma cosh th + delta sinh th)
    const double log_den = log_cosh_mix(gamma, delta, th);
    r.value = clip_unit(std::exp(std::log(gamma) - delta * (a + y) - log_den), 0.0, 0.0);
    return r;
  }

  if (!(delta > 0))
    throw ConvergenceError(
        "eq. tail e^{-2 delta (1-c) m} does not decay: need delta > 0 for c > 0", 0.0);

  const double coth = 1.0 / std::tanh(th);
  const double B = (gamma * coth + delta) / (gamma * coth - delta);
  const double lnB = std::log(B);
  // log (gamma cosh th - delta sinh th) = th + log((gamma-delta)/2 + (gamma+delta)e^{-2th}/2)
  const double log_mix_minus = log_cosh_mix(gamma, -delta, th);
  const double log_pref =
      std::log(2.0 * delta * gamma) - delta * (a - y) - log_mix_minus;

  const double pw = 1.0 / (1.0 - c);
  const double z0 = 2.0 * delta * y + lnB;  // z(m) = 2 delta (1-c) m + z0 > 0
  const double log_E0m1 = z0 + log1mexp(z0);

  auto integrand = [&](double m) {
    const double z = 2.0 * delta * (1.0 - c) * m + z0;
    const double log_Em1 = z + log1mexp(z);
    const double L = 2.0 * delta * m - log_Em1 + pw * (log_E0m1 - log_Em1);
    return std::exp(log_pref + L);
  };

  const double decay = 2.0 * delta * (1.0 - c);
  auto qr = quad::integrate_semi_infinite(integrand, 0.0, opt.abs_tol, opt.rel_tol, decay,
                                          std::min(opt.m_max, 1e7));
  if (!qr.converged) throw ConvergenceError("tax occupation integral did not converge", 0.0);

  TransformResult r;
  r.value = clip_unit(qr.value, qr.abs_err, 0.0);
  r.abs_err_estimate = qr.abs_err;
  r.n_evals = qr.n_evals;
  r.backend = TransformBackend::Quadrature;
  return r;
}

TransformResult lt_bankruptcy_bm_tax(double delta, double sigma, double c, double y, double q,
                                     double omega, const QuadOptions& opt) {
  require(sigma > 0, "lt_bankruptcy_bm_tax: sigma > 0 required");
  require(c >= 0 && c < 1, "lt_bankruptcy_bm_tax: c in [0,1) required");
  require(y >= 0, "lt_bankruptcy_bm_tax: y >= 0 required");
  require(q > 0 && omega > 0, "lt_bankruptcy_bm_tax: q, omega > 0 required");

  const double s2 = sigma * sigma;
  const double gamma = std::sqrt(delta * delta + 2.0 * q / s2);
  const double gp = std::sqrt(delta * delta + 2.0 * (q + omega) / s2);

  if (c == 0.0) {
    TransformResult r;
    r.backend = TransformBackend::ClosedForm;
    r.n_evals = 1;
    // omega (gamma'-delta) e^{-(gamma+delta) y} / ((q+omega)(gamma+gamma')):
    // the explicit evaluation of the m-integral below at c = 0.
    const double v = omega / (q + omega) * (gp - delta) / (gamma + gp) *
                     std::exp(-(gamma + delta) * y);
    r.value = clip_unit(v, 0.0, 0.0);
    return r;
  }

  // Integrand derived from the general exponential-clock formula with the
  // Brownian eigenfunctions (kappa du decomposes into
  // (-delta + gamma d/dw log A_c) dw with A_c(w) = gamma cosh w + gp sinh w):
  //   (omega/(q+omega)) gamma (gp-delta) e^{-delta y}
  //     int_0^inf e^{c delta m} A_c(gamma y)^{1/(1-c)} / A_c(w)^{1/(1-c)+1} dm,
  // w = gamma (1-c) m + gamma y.
  const double pw = 1.0 / (1.0 - c);
  const double log_mix0 = log_cosh_mix(gamma, gp, gamma * y);
  const double log_pref = std::log(omega / (q + omega)) + std::log(gamma) +
                          std::log(gp - delta) - delta * y + pw * log_mix0;

  auto integrand = [&](double m) {
    const double z = gamma * (1.0 - c) * m + gamma * y;
    const double L = c * delta * m - (pw + 1.0) * log_cosh_mix(gamma, gp, z);
    return std::exp(log_pref + L);
  };

  const double decay = gamma * (2.0 - c) - c * delta;
  auto qr = quad::integrate_semi_infinite(integrand, 0.0, opt.abs_tol, opt.rel_tol, decay,
                                          std::min(opt.m_max, 1e7));
  if (!qr.converged) throw ConvergenceError("tax bankruptcy integral did not converge", 0.0);

  TransformResult r;
  r.value = clip_unit(qr.value, qr.abs_err, 0.0);
  r.abs_err_estimate = qr.abs_err;
  r.n_evals = qr.n_evals;
  r.backend = TransformBackend::Quadrature;
  return r;
}

}  // namespace ayot
