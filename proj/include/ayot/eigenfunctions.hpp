#pragma once

#include <memory>

#include "ayot/diffusion.hpp"
#include "ayot/scale.hpp"

namespace ayot {

/// The increasing/decreasing positive solutions phi+-_q of
///     (1/2) sigma^2 f'' + mu f' = q f
/// (or q b^2(z) f for the time-changed variant). Everything is held in log
/// space: log phi and the logarithmic derivatives psi+- = +-phi'/phi, which
/// is what the W-function algebra actually consumes and what survives
/// evaluation far into the exponential growth regime.
class EigenPair {
 public:
  double q() const { return q_; }

  double log_phi_plus(double z) const;
  double log_phi_minus(double z) const;
  /// psi+ = phi+'/phi+ (> 0 for q > 0)
  double psi_plus(double z) const;
  /// psi- = -phi-'/phi- (> 0 for q > 0)
  double psi_minus(double z) const;

  double phi_plus(double z) const { return std::exp(log_phi_plus(z)); }
  double phi_minus(double z) const { return std::exp(log_phi_minus(z)); }
  double dphi_plus(double z) const { return psi_plus(z) * phi_plus(z); }
  double dphi_minus(double z) const { return -psi_minus(z) * phi_minus(z); }

  /// Wronskian constant against the canonical scale normalization of the
  /// spec this pair was built from: w_q s' = phi+' phi- - phi-' phi+.
  double wronskian() const { return w_; }

  /// Largest relative deviation of (phi+' phi- - phi-' phi+)/s' from w_q
  /// across the solve grid (0 for the analytic backend).
  double wronskian_residual() const { return wronskian_residual_; }

  /// Valid evaluation range; +-inf for the analytic backend.
  Window domain() const { return domain_; }

  bool analytic() const { return analytic_; }

  static EigenPair brownian(double delta, double sigma, double q);
  /// Numeric solve on `window`; `rate(z)` is the right-hand-side coefficient
  /// (q for the plain equation, q b^2(z) for the weighted one), and must be
  /// positive on the window.
  static EigenPair numeric(const DiffusionSpec& spec, double q, const RealFn& rate,
                           Window window);
  /// q = 0: phi+ affine in the scale function, phi- constant.
  static EigenPair natural_scale(const ScaleFunction& s, Window window);

 private:
  struct Numeric;
  EigenPair() = default;
  double q_ = 0;
  double w_ = 0;
  double wronskian_residual_ = 0;
  Window domain_{-kInf, kInf};
  bool analytic_ = false;
  // analytic backend
  double delta_ = 0, gamma_ = 0;
  // q = 0 backend
  RealFn s0_, sp0_;
  double s_lo_ = 0;
  bool natural_ = false;
  std::shared_ptr<const Numeric> num_;
};

/// Eigenfunction pair for the diffusion at rate q >= 0. BrownianWithDrift
/// specs get the closed forms phi+ = e^{(gamma-delta) z}, phi- = e^{-(gamma+delta) z},
/// w_q = gamma with gamma = sqrt(delta^2 + 2q/sigma^2); general specs are
/// solved on the declared window with WKB boundary slopes at the edges.
EigenPair eigenpair(const DiffusionSpec& spec, double q);

/// Pair for the time-changed diffusion: solutions of
/// (1/2) sigma^2 f'' + mu f' = q b^2 f. Same scale function as the base
/// diffusion. b must be positive on the window.
EigenPair eigenpair_weighted(const DiffusionSpec& spec, double q, const RealFn& b);

}  // namespace ayot
