#pragma once

#include "ayot/common.hpp"

namespace ayot::quad {

struct QuadResult {
  double value = 0;
  double abs_err = 0;
  long n_evals = 0;
  bool converged = true;
};

/// Single Gauss-Kronrod 7-15 panel with embedded error estimate.
QuadResult gk15(const RealFn& f, double a, double b);

/// Adaptive bisection on [a, b] driven by the GK15 error estimate.
QuadResult integrate(const RealFn& f, double a, double b, double abs_tol = 1e-12,
                     double rel_tol = 1e-10, int max_intervals = 4000);

/// Integral over [a, inf) by panel doubling. `decay_rate`, when positive, is
/// the known asymptotic exponential decay of |f| and sharpens the tail stop;
/// the estimated tail is folded into abs_err. Fails (converged = false) if
/// the running sum has not settled by `hard_limit`.
QuadResult integrate_semi_infinite(const RealFn& f, double a, double abs_tol = 1e-12,
                                   double rel_tol = 1e-10, double decay_rate = 0.0,
                                   double hard_limit = 1e9);

struct SweepOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
  /// Truncation threshold: stop once the integrand (relative to the partial
  /// sum) and its fitted exponential tail are below this.
  double surv_cut = 1e-13;
  /// Additionally require exp(-I) itself to vanish before stopping; needed
  /// by the exponential-clock formulas where exp(-I(inf)) enters the value.
  /// Must stay off for hitting transforms: defective stopping times leave
  /// exp(-I) bounded away from zero.
  bool require_survival_decay = false;
  double m_max = 1e7;
  double h_init = 1e-3;
  double h_max = 2.0;
  double h_min = 1e-12;
  long max_steps = 4000000;
};

struct SweepResult {
  double integral = 0;  ///< integral of exp(log_f(m) - I(m)) dm
  double survival = 0;  ///< exp(-I) at the stopping point
  double m_end = 0;
  double abs_err = 0;
  long n_evals = 0;
  bool converged = false;
};

/// One-pass evaluation of
///     P = \int_{x0}^{M} exp(log_f(m) - I(m)) dm,   I(m) = \int_{x0}^{m} kappa(u) du,
/// advancing the inner exponent together with the outer integral (coupled
/// Dormand-Prince 5(4) system), so the nested integral costs O(n) instead of
/// O(n^2). M adapts until the survival factor exp(-I) is negligible relative
/// to the partial sum.
SweepResult exp_weighted_sweep(const RealFn& kappa, const RealFn& log_f, double x0,
                               const SweepOptions& opt = {});

}  // namespace ayot::quad
