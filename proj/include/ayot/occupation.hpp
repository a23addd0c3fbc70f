#pragma once

#include "ayot/refraction.hpp"
#include "ayot/wfunctions.hpp"

namespace ayot {

enum class TransformBackend { ClosedForm, Quadrature };

struct TransformResult {
  double value = 0;            ///< the Laplace transform, in [0, 1]
  double abs_err_estimate = 0;
  double truncation_point = 0; ///< outer-integral cutoff M
  long n_evals = 0;
  TransformBackend backend = TransformBackend::Quadrature;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double m_max = kInf;  ///< capped further by the eigen backend's window
};

/// E_x[ e^{-q G_y^{a,h,g}} ; tau_{h,a} < inf ]: occupation of U = X - g(Xbar)
/// below -y until V = X - h(Xbar) first hits -a. Requires q >= 0,
/// -x0 <= y < a and g >= h on [x0, inf).
TransformResult lt_occupation_until_hitting(const ScaleFunction& scale, const WFunctions& wfs,
                                            const RefractionSet& refr, double y, double a,
                                            double q, const QuadOptions& opt = {});

/// E_x[ e^{-q tau_{h,a}} ]: plain first-hitting transform of V to -a.
/// Coincides with lt_occupation_until_hitting at (y = -x0, g = u - x0).
TransformResult lt_hitting_time(const ScaleFunction& scale, const WFunctions& wfs,
                                const MaxFunctional& h, double x0, double a, double q,
                                const QuadOptions& opt = {});

/// E_x[ e^{-p O_y^{q,g}} ]: occupation of U below -y until an independent
/// exponential time e_q. Requires p, q > 0, y >= -x0. `pair_qp`, when given,
/// must be the eigenpair at rate q + p (otherwise it is built internally).
TransformResult lt_occupation_until_exp(const DiffusionSpec& spec, const ScaleFunction& scale,
                                        const WFunctions& wfs, const RefractionSet& refr,
                                        double y, double q, double p,
                                        const QuadOptions& opt = {},
                                        const EigenPair* pair_qp = nullptr);

/// E_x[ e^{-p int_0^{e_q} 1{X < b} dt} ]: occupation of the plain diffusion
/// below a level b, closed form in the eigenfunctions (no outer integral).
TransformResult lt_occupation_below_level_exp(const DiffusionSpec& spec,
                                              const WFunctions& wfs, double b_level, double q,
                                              double p);

/// E_x[ e^{-q tau_omega} ] for the Omega model with tax: bankruptcy when the
/// occupation clock of U below -y, run at intensity omega, beats a unit
/// exponential. Equals 1 - lt_occupation_until_exp with p = omega and the
/// tax refraction g = u - gamma_bar(u).
TransformResult lt_bankruptcy_tax(const DiffusionSpec& spec, const ScaleFunction& scale,
                                  const WFunctions& wfs, const RefractionSet& refr, double y,
                                  double q, double omega, const QuadOptions& opt = {});

/// E_x[ e^{-q int_0^{tau_{h,a}} b^2(X) 1{U < -y} dt} ; tau < inf ] via the
/// time-changed eigenpair (same scale function, rate q b^2).
TransformResult lt_weighted_occupation(const DiffusionSpec& spec, const ScaleFunction& scale,
                                       const RefractionSet& refr, double y, double a, double q,
                                       const RealFn& b, const QuadOptions& opt = {});

/// Brownian constant-tax fast path (x0 = 0, h = g = c u): the one-dimensional
/// integral in closed form coefficients; c = 0 needs no quadrature at all.
/// Requires 0 <= y < a, c in [0,1); the tail only decays for delta > 0 when
/// c > 0, otherwise the outer integral diverges and is reported as such.
TransformResult lt_occupation_bm_tax(double delta, double sigma, double c, double y, double a,
                                     double q, const QuadOptions& opt = {});

/// Brownian constant-tax bankruptcy fast path (x0 = 0), y >= 0, q, omega > 0.
TransformResult lt_bankruptcy_bm_tax(double delta, double sigma, double c, double y, double q,
                                     double omega, const QuadOptions& opt = {});

}  // namespace ayot
