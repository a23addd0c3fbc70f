#include "ayot/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace ayot {

namespace {

using nlohmann::json;

std::vector<std::pair<double, double>> parse_table(const json& j, const char* what) {
  std::vector<std::pair<double, double>> t;
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + ": expected [[x,y],...]");
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 2)
      throw ConfigError(std::string(what) + ": expected [[x,y],...]");
    t.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  for (size_t i = 1; i < t.size(); ++i)
    if (!(t[i].first > t[i - 1].first))
      throw ConfigError(std::string(what) + ": x values must be strictly increasing");
  return t;
}

RealFn interp_fn(std::vector<std::pair<double, double>> table) {
  return [table = std::move(table)](double x) {
    if (x <= table.front().first) return table.front().second;
    if (x >= table.back().first) return table.back().second;
    auto it = std::upper_bound(table.begin(), table.end(), x,
                               [](double v, const auto& row) { return v < row.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  };
}

std::vector<double> parse_list(const json& j, const char* what) {
  std::vector<double> v;
  if (j.is_number()) {
    v.push_back(j.get<double>());
    return v;
  }
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected number or list");
  for (const auto& e : j) v.push_back(e.get<double>());
  return v;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    if (!j.contains("model")) throw ConfigError("missing model block");
    const auto& m = j["model"];
    const std::string kind = m.value("model", "brownian");
    if (kind == "brownian") {
      cfg.brownian = true;
      cfg.mu = m.at("mu").get<double>();
      cfg.sigma = m.at("sigma").get<double>();
    } else if (kind == "custom") {
      cfg.brownian = false;
      cfg.mu_table = parse_table(m.at("mu"), "model.mu");
      cfg.sigma_table = parse_table(m.at("sigma"), "model.sigma");
    } else {
      throw ConfigError("model.model must be 'brownian' or 'custom'");
    }
    cfg.x0 = m.value("x0", 0.0);
    if (m.contains("window")) {
      cfg.window = {m["window"].at(0).get<double>(), m["window"].at(1).get<double>()};
      cfg.window_set = true;
    }
    if (m.contains("tax")) {
      const auto& tx = m["tax"];
      if (tx.is_string()) {
        const std::string s = tx.get<std::string>();
        if (s.rfind("constant:", 0) != 0)
          throw ConfigError("model.tax string must look like 'constant:<c>'");
        cfg.const_tax = std::stod(s.substr(9));
      } else {
        cfg.tax_table = parse_table(tx, "model.tax");
      }
    }

    if (j.contains("scenario")) {
      const auto& sc = j["scenario"];
      RunConfig::Scenario s;
      s.kind = sc.at("kind").get<std::string>();
      s.alpha = sc.value("alpha", 0.0);
      s.beta = sc.value("beta", 1.0);
      s.y = sc.value("y", 0.0);
      s.a = sc.value("a", 1.0);
      cfg.scenario = s;
    }

    if (!j.contains("query")) throw ConfigError("missing query block");
    const auto& qb = j["query"];
    cfg.op = qb.at("op").get<std::string>();
    if (qb.contains("y")) cfg.y = parse_list(qb["y"], "query.y");
    if (qb.contains("a")) cfg.a = parse_list(qb["a"], "query.a");
    if (qb.contains("q")) cfg.q = parse_list(qb["q"], "query.q");
    if (qb.contains("p")) cfg.p = parse_list(qb["p"], "query.p");
    if (qb.contains("omega")) cfg.omega = parse_list(qb["omega"], "query.omega");
    if (qb.contains("c")) cfg.c = parse_list(qb["c"], "query.c");
    cfg.weight_const = qb.value("weight", 1.0);

    cfg.engine = j.value("engine", "quadrature");
    if (j.contains("montecarlo")) {
      const auto& mc = j["montecarlo"];
      cfg.mc.n_paths = mc.value("n_paths", cfg.mc.n_paths);
      cfg.mc.dt = mc.value("dt", cfg.mc.dt);
      cfg.mc.horizon = mc.value("horizon", cfg.mc.horizon);
      cfg.mc.bridge_correction = mc.value("bridge", cfg.mc.bridge_correction);
      cfg.mc.antithetic = mc.value("antithetic", cfg.mc.antithetic);
      cfg.mc.threads = mc.value("threads", cfg.mc.threads);
      cfg.mc.early_stop_tol = mc.value("early_stop_tol", cfg.mc.early_stop_tol);
      cfg.mc.long_strides = mc.value("long_strides", cfg.mc.long_strides);
    }
    cfg.mc.seed = j.value("seed", std::uint64_t{1});

    if (j.contains("inversion")) {
      const auto& iv = j["inversion"];
      const std::string method = iv.value("method", "gaver-stehfest");
      if (method == "gaver-stehfest")
        cfg.inversion.method = InversionConfig::Method::GaverStehfest;
      else if (method == "fixed-talbot")
        cfg.inversion.method = InversionConfig::Method::FixedTalbot;
      else
        throw ConfigError("inversion.method must be 'gaver-stehfest' or 'fixed-talbot'");
      cfg.inversion.order = iv.value("order", 14);
      if (iv.contains("t_grid")) cfg.inversion.t_grid = parse_list(iv["t_grid"], "t_grid");
    }

    cfg.output = j.value("output", cfg.output);
    cfg.z_max = j.value("z_max", cfg.z_max);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

ScenarioKind scenario_kind(const std::string& s) {
  if (s == "tax_below_y_until_x_hits") return ScenarioKind::TaxBelowYUntilXHits;
  if (s == "tax_below_y_until_u_hits") return ScenarioKind::TaxBelowYUntilUHits;
  if (s == "rel_drawdown_until_hit") return ScenarioKind::RelDrawdownUntilHit;
  if (s == "rel_drawdown_of_v_until_v_hits") return ScenarioKind::RelDrawdownOfVUntilVHits;
  if (s == "drawdown_until_rel_drawdown") return ScenarioKind::DrawdownUntilRelDrawdown;
  if (s == "drawdown_of_v_until_rel_drawdown_of_v")
    return ScenarioKind::DrawdownOfVUntilRelDrawdownOfV;
  if (s == "weighted_area") return ScenarioKind::WeightedArea;
  throw ConfigError("unknown scenario.kind: " + s);
}

TaxRate model_tax(const RunConfig& cfg) {
  if (cfg.const_tax) return TaxRate::constant_rate(*cfg.const_tax);
  if (!cfg.tax_table.empty()) return TaxRate::of(interp_fn(cfg.tax_table));
  return TaxRate::constant_rate(0.0);
}

}  // namespace

ModelBundle build_model(const RunConfig& cfg, std::optional<double> const_tax_override) {
  ModelBundle b;
  if (cfg.brownian) {
    b.spec = make_brownian(cfg.mu, cfg.sigma, cfg.x0);
    if (cfg.window_set) b.spec.window = cfg.window;
  } else {
    if (!cfg.window_set) throw ConfigError("custom models must declare model.window");
    b.spec = make_custom(interp_fn(cfg.mu_table), interp_fn(cfg.sigma_table), cfg.x0,
                         cfg.window);
  }
  b.scale = scale(b.spec);

  TaxRate tax = const_tax_override ? TaxRate::constant_rate(*const_tax_override)
                                   : model_tax(cfg);
  const Window tax_window{cfg.x0, b.spec.window.hi};

  if (cfg.scenario) {
    if (const_tax_override)
      throw ConfigError("query.c cannot override the tax inside a scenario");
    ScenarioSpec s;
    s.kind = scenario_kind(cfg.scenario->kind);
    s.alpha = cfg.scenario->alpha;
    s.beta = cfg.scenario->beta;
    s.y_raw = cfg.scenario->y;
    s.a_raw = cfg.scenario->a;
    s.tax = tax;
    if (cfg.weight_const != 1.0) {
      const double w = cfg.weight_const;
      s.weight = [w](double) { return w; };
    }
    ScenarioBundle sb = build(s, cfg.x0, tax_window);
    b.refr = sb.refr;
    b.scenario_y = sb.y;
    b.scenario_a = sb.a;
    b.scenario_levels = true;
    b.weight = sb.weight;
  } else {
    b.refr = refraction_from_tax(tax, cfg.x0, tax_window);
    if (cfg.weight_const != 1.0) {
      const double w = cfg.weight_const;
      b.weight = [w](double) { return w; };
    }
  }
  return b;
}

double z_score(double quad_value, double mc_mean, double mc_se) {
  const double d = quad_value - mc_mean;
  if (mc_se <= 0) return d == 0 ? 0.0 : kInf;
  return d / mc_se;
}

namespace {

struct Row {
  double y = NAN, a = NAN, q = NAN, p = NAN, omega = NAN, c = NAN;
};

struct OpTraits {
  bool uses_y = false, uses_a = false, uses_q = true, uses_p = false, uses_omega = false;
  bool c_required = false, bm_only = false;
};

OpTraits traits_for(const std::string& op) {
  OpTraits t;
  if (op == "occupation_until_hitting" || op == "weighted_occupation") {
    t.uses_y = t.uses_a = true;
  } else if (op == "hitting_time") {
    t.uses_a = true;
  } else if (op == "occupation_until_exp") {
    t.uses_y = t.uses_p = true;
  } else if (op == "occupation_below_level_exp") {
    t.uses_y = t.uses_p = true;  // y holds the level b
  } else if (op == "bankruptcy_tax") {
    t.uses_y = t.uses_omega = true;
  } else if (op == "occupation_bm_tax") {
    t.uses_y = t.uses_a = true;
    t.c_required = t.bm_only = true;
  } else if (op == "bankruptcy_bm_tax") {
    t.uses_y = t.uses_omega = true;
    t.c_required = t.bm_only = true;
  } else {
    throw ConfigError("unknown query.op: " + op);
  }
  return t;
}

std::vector<Row> expand_grid(const RunConfig& cfg, const OpTraits& t, bool scenario_levels) {
  auto required = [](const std::vector<double>& v, const char* name) {
    if (v.empty()) throw ConfigError(std::string("empty grid: query.") + name + " is required");
    return v;
  };
  std::vector<double> ys{NAN}, as{NAN}, qs, ps{NAN}, oms{NAN}, cs{NAN};
  if (t.uses_y && !scenario_levels) ys = required(cfg.y, "y");
  if (t.uses_a && !scenario_levels) as = required(cfg.a, "a");
  qs = required(cfg.q, "q");
  if (t.uses_p) ps = required(cfg.p, "p");
  if (t.uses_omega) oms = required(cfg.omega, "omega");
  if (t.c_required)
    cs = required(cfg.c, "c");
  else if (!cfg.c.empty())
    cs = cfg.c;

  std::vector<Row> rows;
  for (double y : ys)
    for (double a : as)
      for (double q : qs)
        for (double p : ps)
          for (double om : oms)
            for (double c : cs) rows.push_back({y, a, q, p, om, c});
  if (rows.empty()) throw ConfigError("empty grid");
  return rows;
}

// Cached eigen machinery per rate so grids over q reuse solves.
struct Evaluator {
  const RunConfig& cfg;
  ModelBundle base;
  std::map<double, std::shared_ptr<WFunctions>> wfs_cache;
  std::map<double, std::shared_ptr<EigenPair>> pair_cache;
  std::map<double, ModelBundle> tax_cache;  // keyed by constant tax override

  explicit Evaluator(const RunConfig& c) : cfg(c), base(build_model(c)) {}

  ModelBundle& bundle_for(const Row& r) {
    if (std::isnan(r.c)) return base;
    auto it = tax_cache.find(r.c);
    if (it == tax_cache.end())
      it = tax_cache.emplace(r.c, build_model(cfg, r.c)).first;
    return it->second;
  }

  const EigenPair& pair_at(ModelBundle& mb, double rate) {
    auto it = pair_cache.find(rate);
    if (it == pair_cache.end())
      it = pair_cache.emplace(rate, std::make_shared<EigenPair>(eigenpair(mb.spec, rate)))
               .first;
    return *it->second;
  }

  const WFunctions& wfs_at(ModelBundle& mb, double q) {
    auto it = wfs_cache.find(q);
    if (it == wfs_cache.end()) {
      auto pair = std::make_shared<EigenPair>(eigenpair(mb.spec, q));
      it = wfs_cache.emplace(q, std::make_shared<WFunctions>(pair, mb.scale)).first;
    }
    return *it->second;
  }

  double level_y(const Row& r, const ModelBundle& mb) const {
    return mb.scenario_levels ? mb.scenario_y : r.y;
  }
  double level_a(const Row& r, const ModelBundle& mb) const {
    return mb.scenario_levels ? mb.scenario_a : r.a;
  }

  TransformResult quadrature(const Row& r) {
    ModelBundle& mb = bundle_for(r);
    const std::string& op = cfg.op;
    if (op == "occupation_until_hitting")
      return lt_occupation_until_hitting(mb.scale, wfs_at(mb, r.q), mb.refr, level_y(r, mb),
                                         level_a(r, mb), r.q);
    if (op == "hitting_time")
      return lt_hitting_time(mb.scale, wfs_at(mb, r.q), mb.refr.h, mb.spec.x0,
                             level_a(r, mb), r.q);
    if (op == "occupation_until_exp")
      return lt_occupation_until_exp(mb.spec, mb.scale, wfs_at(mb, r.q), mb.refr,
                                     level_y(r, mb), r.q, r.p, {}, &pair_at(mb, r.q + r.p));
    if (op == "occupation_below_level_exp")
      return lt_occupation_below_level_exp(mb.spec, wfs_at(mb, r.q), r.y, r.q, r.p);
    if (op == "bankruptcy_tax")
      return lt_bankruptcy_tax(mb.spec, mb.scale, wfs_at(mb, r.q), mb.refr, level_y(r, mb),
                               r.q, r.omega);
    if (op == "weighted_occupation")
      return lt_weighted_occupation(mb.spec, mb.scale, mb.refr, level_y(r, mb),
                                    level_a(r, mb), r.q, mb.weight);
    if (op == "occupation_bm_tax") {
      require_bm(mb);
      return lt_occupation_bm_tax(mb.spec.delta(), mb.spec.bm_sigma, r.c, r.y, r.a, r.q);
    }
    if (op == "bankruptcy_bm_tax") {
      require_bm(mb);
      return lt_bankruptcy_bm_tax(mb.spec.delta(), mb.spec.bm_sigma, r.c, r.y, r.q, r.omega);
    }
    throw ConfigError("unknown query.op: " + op);
  }

  SimEstimate monte_carlo(const Row& r) {
    ModelBundle& mb = bundle_for(r);
    const std::string& op = cfg.op;
    OccupationQuery query;
    query.q = r.q;
    query.p = r.p;
    query.omega = r.omega;
    query.weight = mb.weight;
    SimTarget target;
    RefractionSet refr = mb.refr;
    if (op == "occupation_until_hitting" || op == "occupation_bm_tax") {
      target = SimTarget::HittingOccupation;
      query.y = level_y(r, mb);
      query.a = level_a(r, mb);
    } else if (op == "weighted_occupation") {
      target = SimTarget::WeightedOccupation;
      query.y = level_y(r, mb);
      query.a = level_a(r, mb);
    } else if (op == "hitting_time") {
      target = SimTarget::HittingTime;
      query.a = level_a(r, mb);
    } else if (op == "occupation_until_exp") {
      target = SimTarget::ExpClockOccupation;
      query.y = level_y(r, mb);
    } else if (op == "occupation_below_level_exp") {
      target = SimTarget::ExpClockOccupation;
      refr = make_refraction(MaxFunctional::zero(), MaxFunctional::zero(), mb.spec.x0);
      query.y = -r.y;  // occupation below the level b = r.y
    } else if (op == "bankruptcy_tax" || op == "bankruptcy_bm_tax") {
      target = SimTarget::BankruptcyTime;
      query.y = level_y(r, mb);
    } else {
      throw ConfigError("op has no Monte Carlo form: " + op);
    }
    if (op == "occupation_bm_tax" || op == "bankruptcy_bm_tax") require_bm(mb);
    return simulate_transform(mb.spec, refr, query, target, cfg.mc);
  }

  static void require_bm(const ModelBundle& mb) {
    if (!mb.spec.is_brownian())
      throw ConfigError("occupation_bm_tax/bankruptcy_bm_tax require model='brownian'");
    if (mb.spec.x0 != 0.0)
      throw ConfigError("the Brownian tax fast paths assume x0 = 0");
  }
};

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << header << "\n";
  for (const auto& r : rows) out << r << "\n";
}

std::string row_params(const std::string& op, const Row& r) {
  std::string s = op;
  for (double v : {r.y, r.a, r.q, r.p, r.omega, r.c}) s += "," + fmt(v);
  return s;
}

}  // namespace

RunStatus run_transform(const RunConfig& cfg) {
  Evaluator ev(cfg);
  const OpTraits t = traits_for(cfg.op);
  const auto rows = expand_grid(cfg, t, ev.base.scenario_levels);
  std::vector<std::string> out;
  for (const Row& r : rows) {
    const TransformResult res = ev.quadrature(r);
    out.push_back(row_params(cfg.op, r) + "," + fmt(res.value) + "," +
                  fmt(res.abs_err_estimate) + "," +
                  (res.backend == TransformBackend::ClosedForm ? "closed_form" : "quadrature") +
                  "," + std::to_string(res.n_evals));
  }
  write_csv(cfg.output, "op,y,a,q,p,omega,c,value,abs_err,backend,n_evals", out);
  return {0, "wrote " + std::to_string(out.size()) + " rows to " + cfg.output};
}

RunStatus run_simulate(const RunConfig& cfg) {
  Evaluator ev(cfg);
  const OpTraits t = traits_for(cfg.op);
  const auto rows = expand_grid(cfg, t, ev.base.scenario_levels);
  std::vector<std::string> out;
  for (const Row& r : rows) {
    const SimEstimate e = ev.monte_carlo(r);
    out.push_back(row_params(cfg.op, r) + "," + fmt(e.mean) + "," + fmt(e.std_error) + "," +
                  std::to_string(e.n_paths) + "," + std::to_string(e.n_censored));
  }
  write_csv(cfg.output, "op,y,a,q,p,omega,c,mc_mean,mc_se,n_paths,n_censored", out);
  return {0, "wrote " + std::to_string(out.size()) + " rows to " + cfg.output};
}

RunStatus run_compare(const RunConfig& cfg) {
  Evaluator ev(cfg);
  const OpTraits t = traits_for(cfg.op);
  const auto rows = expand_grid(cfg, t, ev.base.scenario_levels);
  std::vector<std::string> out;
  double worst = 0;
  bool low_power = false;
  for (const Row& r : rows) {
    const TransformResult res = ev.quadrature(r);
    const SimEstimate e = ev.monte_carlo(r);
    const double z = z_score(res.value, e.mean, e.std_error);
    worst = std::max(worst, std::fabs(z));
    if (e.std_error > 0.25) low_power = true;
    out.push_back(row_params(cfg.op, r) + "," + fmt(res.value) + "," + fmt(e.mean) + "," +
                  fmt(e.std_error) + "," + fmt(z) + "," + std::to_string(e.n_paths) + "," +
                  std::to_string(e.n_censored));
  }
  write_csv(cfg.output, "op,y,a,q,p,omega,c,quadrature,mc_mean,mc_se,z,n_paths,n_censored",
            out);
  std::string msg = "worst |z| = " + fmt(worst);
  if (low_power) msg += " (low power: standard errors above 0.25)";
  if (worst > cfg.z_max) return {1, msg + " exceeds z_max = " + fmt(cfg.z_max)};
  return {0, msg};
}

RunStatus run_invert(const RunConfig& cfg) {
  if (cfg.inversion.t_grid.empty()) throw ConfigError("inversion requires a t_grid");
  Evaluator ev(cfg);
  const OpTraits t = traits_for(cfg.op);
  if (!t.uses_omega) throw ConfigError("invert expects a bankruptcy op");
  const auto rows = expand_grid(cfg, t, ev.base.scenario_levels);
  const Row r0 = rows.front();

  RealFn transform = [&](double q) {
    Row r = r0;
    r.q = q;
    return ev.quadrature(r).value;
  };
  InversionConfig icfg = cfg.inversion;
  const InversionResult res = invert_cdf(transform, icfg);

  std::vector<std::string> out;
  const char* method =
      icfg.method == InversionConfig::Method::GaverStehfest ? "gaver-stehfest" : "fixed-talbot";
  for (const auto& ptf : res.points)
    out.push_back(fmt(ptf.t) + "," + fmt(ptf.F) + "," + method + "," +
                  std::to_string(icfg.order));
  write_csv(cfg.output, "t,F,method,order", out);
  std::string msg = "wrote " + std::to_string(out.size()) + " rows";
  if (res.cancellation_warning)
    msg += " (warning: Gaver-Stehfest order disagreement " + fmt(res.max_order_disagreement) +
           ")";
  return {0, msg};
}

RunStatus run_diagnose(const RunConfig& cfg) {
  Evaluator ev(cfg);
  ModelBundle& mb = ev.base;
  std::vector<std::string> out;

  const ValidationReport rep = validate(mb.spec);
  out.push_back("cond1,lipschitz_estimate," + fmt(rep.lipschitz_estimate));
  out.push_back("cond1,growth_estimate," + fmt(rep.growth_estimate));
  out.push_back("cond1,sigma_min," + fmt(rep.sigma_min));
  for (const auto& n : rep.notes) out.push_back("cond1,note," + n);

  const auto qs = cfg.q.empty() ? std::vector<double>{1.0} : cfg.q;
  for (double q : qs) {
    if (q <= 0) continue;
    Window w = mb.spec.is_brownian() ? Window{mb.spec.x0 - 15.0, mb.spec.x0 + 15.0}
                                     : mb.spec.window;
    EigenPair num = EigenPair::numeric(mb.spec, q, [q](double) { return q; }, w);
    out.push_back("eigen,q=" + fmt(q) + "_wronskian_residual," + fmt(num.wronskian_residual()));
    if (mb.spec.is_brownian()) {
      const EigenPair ana = eigenpair(mb.spec, q);
      double worst = 0;
      for (int i = 0; i <= 60; ++i) {
        const double z = mb.spec.x0 - 3.0 + i * 0.1;
        worst = std::max(worst, std::fabs(num.psi_plus(z) - ana.psi_plus(z)));
        worst = std::max(worst, std::fabs(num.psi_minus(z) - ana.psi_minus(z)));
      }
      out.push_back("eigen,q=" + fmt(q) + "_psi_vs_analytic," + fmt(worst));
    }
  }

  const double a_diag = cfg.a.empty() ? 1.0 : cfg.a.front();
  PathConfig pc = cfg.mc;
  pc.n_paths = std::min<std::int64_t>(pc.n_paths, 20000);
  const LastPassageDiagnostic d = last_passage_diagnostic(mb.spec, mb.scale, mb.refr, a_diag, pc);
  out.push_back("last_passage,y0_is_one," + std::string(d.y0_ok ? "1" : "0"));
  out.push_back("last_passage,y_min," + fmt(d.y_min));
  out.push_back("last_passage,y_max," + fmt(d.y_max));
  out.push_back("last_passage,max_y_at_tau," + fmt(d.max_y_at_tau));
  out.push_back("last_passage,mean_increment," + fmt(d.mean_increment));
  out.push_back("last_passage,mean_increment_se," + fmt(d.mean_increment_se));
  out.push_back("last_passage,n_hit," + std::to_string(d.n_hit));

  write_csv(cfg.output, "check,name,value", out);
  return {0, "wrote diagnostics to " + cfg.output};
}

}  // namespace ayot
