#pragma once

#include <optional>

#include "ayot/refraction.hpp"

namespace ayot {

/// The application cases: each kind maps an intent ("occupation of the
/// relative drawdown of V over size alpha until V hits -a") onto the raw
/// (h, g, y, a) bundle the transforms consume.
enum class ScenarioKind {
  TaxBelowYUntilXHits,             ///< after-tax U below -y until X hits -a
  TaxBelowYUntilUHits,             ///< after-tax U below -y until U hits -a
  RelDrawdownUntilHit,             ///< rel. drawdown of X over alpha until V hits -a
  RelDrawdownOfVUntilVHits,        ///< rel. drawdown of V over alpha until V hits -a
  DrawdownUntilRelDrawdown,        ///< drawdown of X above y until rel. drawdown alpha
  DrawdownOfVUntilRelDrawdownOfV,  ///< drawdown of V above y until rel. drawdown of V
  WeightedArea                     ///< stochastic area with a drawdown constraint
};

struct ScenarioSpec {
  ScenarioKind kind;
  double alpha = 0.0;  ///< relative drawdown size, in (0,1)
  double beta = 1.0;   ///< tax rate of V in RelDrawdownUntilHit, in [alpha, 1]
  double y_raw = 0.0;  ///< level as the user states it (see build())
  double a_raw = 1.0;  ///< barrier as the user states it
  std::optional<TaxRate> tax;
  RealFn weight;  ///< b(.) for WeightedArea
};

struct ScenarioBundle {
  RefractionSet refr;
  double y = 0.0;
  double a = 0.0;
  RealFn weight;
};

/// Translates the scenario into the (h, g, y, a) substitutions.
///
/// Levels are converted so the indicator identities hold pathwise: for the
/// relative-drawdown kinds the occupation level is y = -(1-alpha) x0 (and
/// a = -(1-alpha) x0 where the stopping time is the relative drawdown time),
/// which makes {U < -y} == {(Vbar - V)/Vbar > alpha} exactly; drawdown kinds
/// take the user's drawdown level y_raw >= 0 and shift by -x0.
ScenarioBundle build(const ScenarioSpec& s, double x0, const Window& window = {0.0, 200.0});

}  // namespace ayot
