#pragma once

#include "ayot/diffusion.hpp"

namespace ayot {

/// Scale function of the diffusion: s strictly increasing, s(X) a local
/// martingale. Defined up to an affine map; every transform downstream is a
/// ratio invariant under s -> alpha s + beta.
struct ScaleFunction {
  enum class Backend { BrownianClosedForm, Numeric };
  RealFn s;
  RealFn s_prime;
  Backend backend = Backend::Numeric;
  Window domain{-kInf, kInf};
};

/// For BrownianWithDrift returns the closed form s(z) = (1 - e^{-2 delta z}) / delta
/// (anchored at s(0) = 0). General diffusions get the scale integral
/// s'(z) = exp(-int_{x0}^z 2 mu / sigma^2), s(x0) = 0, cached on a dense grid
/// over the declared window.
ScaleFunction scale(const DiffusionSpec& spec);

}  // namespace ayot
