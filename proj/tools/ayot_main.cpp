#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ayot/runner.hpp"

namespace {

int dispatch(const std::string& cmd, ayot::RunConfig cfg) {
  using ayot::RunStatus;
  RunStatus st;
  if (cmd == "transform")
    st = ayot::run_transform(cfg);
  else if (cmd == "compare")
    st = ayot::run_compare(cfg);
  else if (cmd == "invert")
    st = ayot::run_invert(cfg);
  else if (cmd == "simulate")
    st = ayot::run_simulate(cfg);
  else
    st = ayot::run_diagnose(cfg);
  if (!st.message.empty()) std::fprintf(st.exit_code ? stderr : stdout, "%s\n", st.message.c_str());
  return st.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace transforms of occupation times of running-maximum-refracted diffusions"};
  app.require_subcommand(1);

  std::string config_path, out_override, engine_override;
  bool have_seed = false;
  std::uint64_t seed_override = 0;
  double z_max_override = -1;

  for (const char* name : {"transform", "compare", "invert", "simulate", "diagnose"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_override, "override output CSV path");
    sub->add_option("--seed", seed_override, "override the Monte Carlo seed")
        ->each([&](const std::string&) { have_seed = true; });
    sub->add_option("--engine", engine_override, "override engine (quadrature|montecarlo|both)");
    sub->add_option("--z-max", z_max_override, "override the comparison gate");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    ayot::RunConfig cfg = ayot::load_config(config_path);
    if (!out_override.empty()) cfg.output = out_override;
    if (have_seed) cfg.mc.seed = seed_override;
    if (!engine_override.empty()) cfg.engine = engine_override;
    if (z_max_override >= 0) cfg.z_max = z_max_override;
    return dispatch(app.get_subcommands().front()->get_name(), std::move(cfg));
  } catch (const ayot::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "evaluation failed: %s\n", e.what());
    return 1;
  }
}
