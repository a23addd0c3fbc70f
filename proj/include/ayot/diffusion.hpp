#pragma once

#include <vector>

#include "ayot/common.hpp"

namespace ayot {

enum class AnalyticKind { GeneralNumeric, BrownianWithDrift };

/// The underlying diffusion dX = mu(X) dt + sigma(X) dW on (lower_boundary, inf).
struct DiffusionSpec {
  RealFn mu;
  RealFn sigma;
  double lower_boundary = -kInf;
  double x0 = 0.0;
  AnalyticKind kind = AnalyticKind::GeneralNumeric;
  double bm_mu = 0.0;     // set for BrownianWithDrift
  double bm_sigma = 1.0;  // set for BrownianWithDrift
  Window window{-40.0, 120.0};

  bool is_brownian() const { return kind == AnalyticKind::BrownianWithDrift; }
  /// delta = mu / sigma^2 (Brownian backend only).
  double delta() const { return bm_mu / (bm_sigma * bm_sigma); }
};

/// Brownian motion with drift; the analytic backend of the whole library.
/// Rejects sigma <= 0 and mu == 0 (zero drift mean-reverts every closed form
/// to a degenerate scale; use make_custom for driftless experiments).
DiffusionSpec make_brownian(double mu, double sigma, double x0);

DiffusionSpec make_custom(RealFn mu, RealFn sigma, double x0, Window window,
                          double lower_boundary = -kInf);

/// Sampling-based sanity check of the Lipschitz/linear-growth condition on
/// the declared window. Heuristic: finite grid, finite differences.
struct ValidationReport {
  double lipschitz_estimate = 0.0;
  double growth_estimate = 0.0;
  double sigma_min = 0.0;
  std::vector<std::string> notes;
  bool ok = true;
};

ValidationReport validate(const DiffusionSpec& spec, int grid_points = 512);

}  // namespace ayot
