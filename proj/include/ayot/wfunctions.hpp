#pragma once

#include <memory>

#include "ayot/eigenfunctions.hpp"
#include "ayot/scale.hpp"

namespace ayot {

/// The two-variable functions
///   W_q(x,y)  = (phi+(x) phi-(y) - phi+(y) phi-(x)) / w_q
///   W_{q,1}   = d/dx W_q,   W_{q,2} = d/dy W_{q,1}
/// assembled from the eigenfunction pair and its first derivatives only (no
/// numerical differentiation). Internally everything reduces to psi+- and
/// log-phi differences, which keeps W ratios finite long after phi+
/// overflows a double.
class WFunctions {
 public:
  WFunctions(std::shared_ptr<const EigenPair> pair, ScaleFunction scale);

  double q() const { return pair_->q(); }
  const EigenPair& pair() const { return *pair_; }
  const ScaleFunction& scale() const { return scale_; }
  /// Wronskian constant against the scale normalization handed in here.
  double wronskian() const { return w_; }

  double W(double x, double y) const;
  double W1(double x, double y) const;
  double W2(double x, double y) const;
  double psi_plus(double z) const { return pair_->psi_plus(z); }
  double psi_minus(double z) const { return pair_->psi_minus(z); }

  /// log W_q(x,y), requires x > y.
  double log_W(double x, double y) const;
  /// W_{q,1}(x,y) / W_q(x,y), requires x > y. For Brownian this equals
  /// gamma coth[gamma (x-y)] - delta.
  double ratio_W1_W(double x, double y) const;

 private:
  std::shared_ptr<const EigenPair> pair_;
  ScaleFunction scale_;
  double w_ = 0;
};

WFunctions w_functions(const EigenPair& pair, const ScaleFunction& scale);

}  // namespace ayot
