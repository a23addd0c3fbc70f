#pragma once

#include "ayot/common.hpp"

namespace ayot {

/// Parameters of one occupation-time query. Which fields are read depends on
/// the operation/target: y and a are levels (occupation below -y, hitting of
/// -a), q the transform (or clock) rate, p the secondary transform rate,
/// omega the bankruptcy intensity, weight the b(.) of the integral
/// functional (null means b = 1).
struct OccupationQuery {
  double y = 0.0;
  double a = 1.0;
  double q = 1.0;
  double p = 1.0;
  double omega = 1.0;
  RealFn weight;
};

}  // namespace ayot
