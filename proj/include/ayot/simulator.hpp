#pragma once

#include <cstdint>
#include <vector>

#include "ayot/diffusion.hpp"
#include "ayot/query.hpp"
#include "ayot/refraction.hpp"
#include "ayot/scale.hpp"

namespace ayot {

struct PathConfig {
  double dt = 1e-4;
  double horizon = 50.0;
  std::int64_t n_paths = 100000;
  std::uint64_t seed = 1;
  /// Sample the within-step maximum from the Brownian bridge (exact for the
  /// Brownian backend) instead of the endpoint max; also applies a bridged
  /// crossing test at the hitting barrier.
  bool bridge_correction = true;
  bool antithetic = false;
  /// Abandon a path once its best possible remaining contribution to the
  /// estimator falls below this bound (scale-function escape test plus
  /// e^{-qt} decay). 0 disables pruning. The induced bias is at most this.
  double early_stop_tol = 1e-7;
  /// Let far-from-threshold Brownian paths take exact long strides. Only
  /// engages for the analytic backend with affine refraction functionals.
  bool long_strides = true;
  int threads = 0;  ///< 0 = hardware concurrency
};

struct SimEstimate {
  double mean = 0;
  double std_error = 0;
  std::int64_t n_censored = 0;  ///< paths still unresolved at the horizon
  std::int64_t n_paths = 0;
  double censored_fraction() const {
    return n_paths ? static_cast<double>(n_censored) / n_paths : 0.0;
  }
};

enum class SimTarget {
  HittingOccupation,   ///< E[e^{-q G_y^{a,h,g}}; tau_{h,a} < inf]
  ExpClockOccupation,  ///< E[e^{-p O_y^{q,g}}]
  BankruptcyTime,      ///< E[e^{-q tau_omega}]
  HittingTime,         ///< E[e^{-q tau_{h,a}}]
  WeightedOccupation   ///< E[e^{-q int b^2(X) 1{U<-y}}; tau < inf]
};

/// Euler-Maruyama path oracle for every transform in the library. Censored
/// paths (unresolved at the horizon) contribute their known bound (0 for
/// hitting/bankruptcy payoffs) and are counted separately rather than folded
/// into the estimate.
SimEstimate simulate_transform(const DiffusionSpec& spec, const RefractionSet& refr,
                               const OccupationQuery& query, SimTarget target,
                               const PathConfig& cfg);

struct TraceRow {
  double t, x, xbar, u, v, occupation;
};

/// Per-path trace of (t, X, Xbar, U, V, occupation) for debugging; records
/// every `stride`-th step of the first path.
std::vector<TraceRow> simulate_trace(const DiffusionSpec& spec, const RefractionSet& refr,
                                     const OccupationQuery& query, const PathConfig& cfg,
                                     int stride = 1);

/// Pathwise diagnostic of Y_t = P(rho > t | F_t), the conditional probability
/// that X revisits its maximum before V hits -a: checks Y_0 = 1, Y in [0,1],
/// Y -> 0 at tau_{h,a}, and the supermartingale property through the mean
/// increment over a fixed observation grid.
struct LastPassageDiagnostic {
  std::vector<std::pair<double, double>> trace;  ///< (t, Y) along the first path
  double mean_increment = 0;
  double mean_increment_se = 0;
  double y_min = 0, y_max = 0;
  double max_y_at_tau = 0;   ///< largest Y observed at a hitting time
  std::int64_t n_hit = 0;
  std::int64_t n_paths = 0;
  bool y0_ok = true;
};

LastPassageDiagnostic last_passage_diagnostic(const DiffusionSpec& spec,
                                              const ScaleFunction& scale,
                                              const RefractionSet& refr, double a,
                                              const PathConfig& cfg, double obs_dt = 0.05);

}  // namespace ayot
