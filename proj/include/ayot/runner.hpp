#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ayot/diffusion.hpp"
#include "ayot/inversion.hpp"
#include "ayot/occupation.hpp"
#include "ayot/scenarios.hpp"
#include "ayot/simulator.hpp"

namespace ayot {

/// Parsed configuration file; one file drives a full reproducible run.
struct RunConfig {
  // model block
  bool brownian = true;
  double mu = 0.5, sigma = 1.0, x0 = 0.0;
  Window window{-40.0, 120.0};
  bool window_set = false;
  std::vector<std::pair<double, double>> mu_table, sigma_table;  // custom model
  std::optional<double> const_tax;
  std::vector<std::pair<double, double>> tax_table;

  // scenario block (optional)
  struct Scenario {
    std::string kind;
    double alpha = 0.0, beta = 1.0, y = 0.0, a = 1.0;
  };
  std::optional<Scenario> scenario;

  // query grid
  std::string op;
  std::vector<double> y, a, q, p, omega, c;
  double weight_const = 1.0;

  std::string engine = "quadrature";
  PathConfig mc;
  InversionConfig inversion;
  std::string output = "out.csv";
  double z_max = 4.0;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

struct ModelBundle {
  DiffusionSpec spec;
  ScaleFunction scale;
  RefractionSet refr;
  double scenario_y = 0.0, scenario_a = 0.0;
  bool scenario_levels = false;
  RealFn weight;
};

/// Builds the diffusion, scale function and refraction from a config,
/// resolving the scenario block if present (scenario levels then override
/// the query's y/a lists).
ModelBundle build_model(const RunConfig& cfg, std::optional<double> const_tax_override = {});

struct RunStatus {
  int exit_code = 0;
  std::string message;
};

RunStatus run_transform(const RunConfig& cfg);
RunStatus run_compare(const RunConfig& cfg);
RunStatus run_invert(const RunConfig& cfg);
RunStatus run_simulate(const RunConfig& cfg);
RunStatus run_diagnose(const RunConfig& cfg);

/// |quadrature - mc| in standard errors (0/inf convention when se = 0).
double z_score(double quad_value, double mc_mean, double mc_se);

}  // namespace ayot
