#include "ayot/wfunctions.hpp"

#include <cmath>

namespace ayot {

WFunctions::WFunctions(std::shared_ptr<const EigenPair> pair, ScaleFunction scale)
    : pair_(std::move(pair)), scale_(std::move(scale)) {
  // Wronskian against *this* scale normalization, evaluated at one point:
  // phi+' phi- - phi-' phi+ = phi+ phi- (psi+ + psi-).
  const Window d = pair_->domain();
  double z = 0.0;
  if (std::isfinite(d.lo) && std::isfinite(d.hi)) z = 0.5 * (d.lo + d.hi);
  const double lw = pair_->log_phi_plus(z) + pair_->log_phi_minus(z);
  w_ = std::exp(lw) * (pair_->psi_plus(z) + pair_->psi_minus(z)) / scale_.s_prime(z);
}

double WFunctions::log_W(double x, double y) const {
  if (!(x > y)) throw std::invalid_argument("log_W requires x > y");
  const double d = (pair_->log_phi_plus(x) - pair_->log_phi_plus(y)) +
                   (pair_->log_phi_minus(y) - pair_->log_phi_minus(x));
  return pair_->log_phi_plus(x) + pair_->log_phi_minus(y) - std::log(w_) + log1mexp(d);
}

double WFunctions::ratio_W1_W(double x, double y) const {
  if (!(x > y)) throw std::invalid_argument("ratio_W1_W requires x > y");
  const double d = (pair_->log_phi_plus(x) - pair_->log_phi_plus(y)) +
                   (pair_->log_phi_minus(y) - pair_->log_phi_minus(x));
  const double r = std::exp(-d);
  const double denom = -std::expm1(-d);  // 1 - r, accurate for small gaps
  return (pair_->psi_plus(x) + pair_->psi_minus(x) * r) / denom;
}

double WFunctions::W(double x, double y) const {
  if (x == y) return 0.0;
  if (x < y) return -W(y, x);
  return std::exp(log_W(x, y));
}

double WFunctions::W1(double x, double y) const {
  // (phi+'(x) phi-(y) - phi+(y) phi-'(x)) / w; both terms are positive, the
  // factorization just pulls out whichever cross product dominates.
  const bool flip = x < y;
  const double xx = flip ? y : x, yy = flip ? x : y;
  const double lf1 = pair_->log_phi_plus(xx) + pair_->log_phi_minus(yy) - std::log(w_);
  const double d = (pair_->log_phi_plus(xx) - pair_->log_phi_plus(yy)) +
                   (pair_->log_phi_minus(yy) - pair_->log_phi_minus(xx));
  const double r = std::exp(-d);
  if (!flip) return std::exp(lf1) * (pair_->psi_plus(x) + pair_->psi_minus(x) * r);
  // x < y: W1(x,y) = (phi+'(x) phi-(y) - phi+(y) phi-'(x)) / w, dominant term
  // is phi+(y) psi-(x) phi-(x); reuse the mirrored factorization.
  return std::exp(lf1) * (pair_->psi_minus(x) + pair_->psi_plus(x) * r);
}

double WFunctions::W2(double x, double y) const {
  // (phi+'(x) phi-'(y) - phi+'(y) phi-'(x)) / w
  const bool flip = x < y;
  const double xx = flip ? y : x, yy = flip ? x : y;
  const double lf1 = pair_->log_phi_plus(xx) + pair_->log_phi_minus(yy) - std::log(w_);
  const double d = (pair_->log_phi_plus(xx) - pair_->log_phi_plus(yy)) +
                   (pair_->log_phi_minus(yy) - pair_->log_phi_minus(xx));
  const double r = std::exp(-d);
  const double pp_x = pair_->psi_plus(x), pm_x = pair_->psi_minus(x);
  const double pp_y = pair_->psi_plus(y), pm_y = pair_->psi_minus(y);
  if (!flip) return std::exp(lf1) * (-pp_x * pm_y + pp_y * pm_x * r);
  return std::exp(lf1) * (pp_y * pm_x - pp_x * pm_y * r);
}

WFunctions w_functions(const EigenPair& pair, const ScaleFunction& scale) {
  return WFunctions(std::make_shared<EigenPair>(pair), scale);
}

}  // namespace ayot
