#include "ayot/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ayot/detail/hermite.hpp"
#include "ayot/quadrature.hpp"
#include "ayot/rng.hpp"

namespace ayot {

namespace {

struct PathResult {
  double payoff = 0;
  bool censored = false;
};

struct BrownianModel {
  double mu, sigma;
  static constexpr bool exact_gaussian = true;
  double drift(double) const { return mu; }
  double vol(double) const { return sigma; }
};

struct GenericModel {
  const DiffusionSpec* spec;
  static constexpr bool exact_gaussian = false;
  double drift(double x) const { return spec->mu(x); }
  double vol(double x) const { return spec->sigma(x); }
};

// Escape pruning: once the best possible remaining contribution of a path is
// below tol, resolve it as never-hitting. Uses only the classical
// scale-function exit identities, never the transforms under test.
struct KillTable {
  bool enabled = false;
  double u_top = 0;
  detail::HermiteSeries K0;  // int_u^top kappa0, kappa0 = s'/(s - s(h - a))
  double tail = 0;           // conservative bound beyond the grid
  RealFn s, sp;
  double p2(double u) const {
    if (u >= u_top) return std::min(1.0, tail);
    return std::min(1.0, K0.eval(u) + tail);
  }
};

KillTable build_kill_table(const DiffusionSpec& spec, const ScaleFunction& scale,
                           const MaxFunctional& h, double a, double horizon) {
  KillTable kt;
  kt.s = scale.s;
  kt.sp = scale.s_prime;
  const double x0 = spec.x0;
  const double sig = spec.sigma(x0);
  const double mu_pos = std::max(spec.mu(x0), 0.0);
  const double top = x0 + std::max(10.0, mu_pos * horizon + 8.0 * sig * std::sqrt(horizon) + 5.0);

  auto kappa0 = [&](double v) {
    const double den = scale.s(v) - scale.s(h(v) - a);
    return scale.s_prime(v) / den;
  };

  const int n = 1024;
  kt.K0.lo = x0;
  kt.K0.dz = (top - x0) / n;
  kt.K0.y.assign(n + 1, 0.0);
  kt.K0.d.assign(n + 1, 0.0);
  try {
    // Tail beyond the grid: if kappa0 decays exponentially use a padded
    // geometric bound, otherwise pruning stays off above the grid.
    const double k_end = kappa0(top), k_in = kappa0(top - kt.K0.dz);
    const double lam = std::log(std::max(k_in, 1e-300) / std::max(k_end, 1e-300)) / kt.K0.dz;
    kt.tail = lam > 1e-6 ? 2.0 * k_end / lam : 2.0;

    double acc = 0.0;
    for (int i = n; i > 0; --i) {
      const double b = x0 + i * kt.K0.dz, aa = b - kt.K0.dz;
      acc += quad::gk15(kappa0, aa, b).value;
      kt.K0.y[i - 1] = acc;
      kt.K0.d[i - 1] = -kappa0(aa);
    }
    kt.u_top = top;
    kt.enabled = true;
  } catch (const std::exception&) {
    kt.enabled = false;  // scale window too small to bound escapes; keep simulating
  }
  return kt;
}

// Maximum of a Brownian bridge between (x0, x1) over duration tau.
inline double bridge_max(double x0, double x1, double var_tau, double u01) {
  const double d = x1 - x0;
  return 0.5 * (x0 + x1 + std::sqrt(d * d - 2.0 * var_tau * std::log(u01)));
}

struct Thresholds {
  double occ, hit;
};

template <class Model>
struct Kernel {
  Model model;
  MaxFunctional h, g;
  double x0, y, a, q, p, omega;
  SimTarget target;
  PathConfig cfg;
  RealFn weight;
  KillTable kill;
  bool strides_ok = false;

  Thresholds thresholds(double xbar) const { return {g(xbar) - y, h(xbar) - a}; }

  PathResult run(std::uint64_t stream, bool negate) const {
    PathRng rng(cfg.seed, stream);
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);

    double x = x0, xbar = x0, t = 0.0;
    double occ = 0.0;     // occupation (weighted for WeightedOccupation)
    double lam = 0.0;     // accumulated bankruptcy intensity
    double clock_end = kInf;
    double e1 = 0.0;
    if (target == SimTarget::ExpClockOccupation) clock_end = rng.exponential(q);
    if (target == SimTarget::BankruptcyTime) e1 = rng.exponential(1.0);

    Thresholds th = thresholds(xbar);
    long steps_since_check = 0;

    auto normal = [&]() {
      const double z = rng.normal();
      return negate ? -z : z;
    };

    while (true) {
      // --- resolution by payoff/escape bound -------------------------------
      if (cfg.early_stop_tol > 0 && (steps_since_check >= 256)) {
        steps_since_check = 0;
        double bound = 1.0;
        switch (target) {
          case SimTarget::BankruptcyTime:
            bound = std::exp(-q * t);
            break;
          case SimTarget::HittingTime:
          case SimTarget::HittingOccupation:
          case SimTarget::WeightedOccupation: {
            if (!kill.enabled) {
              bound = 1.0;
              break;
            }
            try {
              const double sh = kill.s(xbar);
              const double p1 = (sh - kill.s(x)) / (sh - kill.s(th.hit));
              const double esc = std::min(1.0, p1 + kill.p2(xbar));
              bound = target == SimTarget::HittingTime ? std::min(esc, std::exp(-q * t))
                                                       : esc * std::exp(-q * occ);
            } catch (const WindowError&) {
              bound = 1.0;  // outside the tabulated scale window: keep simulating
            }
            break;
          }
          case SimTarget::ExpClockOccupation:
            bound = 1.0;
            break;
        }
        if (bound < cfg.early_stop_tol) return {0.0, false};
      }

      if (t >= cfg.horizon) {
        // Unresolved at the horizon: hitting/bankruptcy payoffs are bounded
        // by a vanishing factor and contribute 0; the exponential clock
        // reports its partial occupation.
        if (target == SimTarget::ExpClockOccupation) return {std::exp(-p * occ), true};
        return {0.0, true};
      }

      // --- far-field stride (Brownian, affine refraction) ------------------
      if constexpr (Model::exact_gaussian) {
        if (strides_ok) {
          const double gap = x - std::max(th.occ, th.hit);
          const double sig = model.sigma;
          if (gap > 24.0 * sig * sqdt) {
            double tau = (gap / (12.0 * sig)) * (gap / (12.0 * sig));
            tau = std::min({tau, 16.0, cfg.horizon - t, clock_end - t});
            bool safe = false;
            const double kmax = std::max({g.slope, h.slope, 0.0});
            (void)kmax;
            while (tau >= 4.0 * dt) {
              const double spread = 9.0 * sig * std::sqrt(tau);
              const double up = model.mu * tau + spread;
              const double xb_cap = std::max(xbar, x + up);
              const Thresholds thc = thresholds(xb_cap);
              const double x_low = x + model.mu * tau - spread;
              if (x_low > std::max(thc.occ, thc.hit)) {
                safe = true;
                break;
              }
              tau *= 0.5;
            }
            if (safe) {
              const double z = normal();
              const double xn = x + model.mu * tau + sig * std::sqrt(tau) * z;
              const double m = bridge_max(x, xn, sig * sig * tau, rng.uniform());
              if (m > xbar) {
                xbar = m;
                th = thresholds(xbar);
              }
              x = xn;
              t += tau;
              steps_since_check += 64;  // strides still hit the pruning check
              continue;
            }
          }
        }
      }

      // --- fine Euler-Maruyama step ----------------------------------------
      const double sig = model.vol(x);
      const double drift = model.drift(x);
      const double z = normal();
      const double xn = x + drift * dt + sig * sqdt * z;

      const bool occupied = x < th.occ;
      if (occupied) {
        double inc = dt;
        if (target == SimTarget::WeightedOccupation && weight) {
          const double b = weight(x);
          inc *= b * b;
        }
        if (target == SimTarget::BankruptcyTime) {
          const double dlam = omega * dt;
          if (lam + dlam >= e1) {
            const double tau_hat = t + (e1 - lam) / omega;
            return {std::exp(-q * tau_hat), false};
          }
          lam += dlam;
        }
        occ += inc;
      }

      // Exponential clock expiring inside this step.
      if (t + dt >= clock_end) {
        if (occupied) occ -= (t + dt - clock_end);  // only the part before e_q counts
        return {std::exp(-p * occ), false};
      }

      // Running maximum, optionally with the bridged within-step maximum.
      double mx = std::max(x, xn);
      if (cfg.bridge_correction) {
        const double prod = (xbar - x) * (xbar - xn);
        if (mx >= xbar || prod < 18.5 * sig * sig * dt)
          mx = bridge_max(x, xn, sig * sig * dt, rng.uniform());
      }
      if (mx > xbar) {
        xbar = mx;
        th = thresholds(xbar);
      }

      // Hitting of V = X - h(Xbar) at -a.
      if (target != SimTarget::ExpClockOccupation && target != SimTarget::BankruptcyTime) {
        bool hit = xn <= th.hit;
        double tau = t + dt;
        if (!hit && cfg.bridge_correction) {
          const double prod = (x - th.hit) * (xn - th.hit);
          if (x > th.hit && prod < 18.5 * sig * sig * dt) {
            const double pc = std::exp(-2.0 * prod / (sig * sig * dt));
            if (rng.uniform() < pc) {
              hit = true;
              tau = t + 0.5 * dt;
            }
          }
        }
        if (hit) {
          switch (target) {
            case SimTarget::HittingTime:
              return {std::exp(-q * tau), false};
            case SimTarget::HittingOccupation:
            case SimTarget::WeightedOccupation:
              return {std::exp(-q * occ), false};
            default:
              break;
          }
        }
      }

      x = xn;
      t += dt;
      ++steps_since_check;
    }
  }
};

template <class Model>
SimEstimate drive(const Kernel<Model>& kern, const PathConfig& cfg) {
  const bool anti = cfg.antithetic;
  const std::int64_t n_units = anti ? (cfg.n_paths + 1) / 2 : cfg.n_paths;
  constexpr std::int64_t kChunk = 2048;
  const std::int64_t n_chunks = (n_units + kChunk - 1) / kChunk;

  struct ChunkSums {
    double sum = 0, sumsq = 0;
    std::int64_t censored = 0;
  };
  std::vector<ChunkSums> sums(static_cast<size_t>(n_chunks));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr worker_error;
  std::mutex error_mutex;

  auto work = [&]() {
    try {
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        ChunkSums cs;
        const std::int64_t lo = c * kChunk, hi = std::min(n_units, lo + kChunk);
        for (std::int64_t i = lo; i < hi; ++i) {
          double v;
          if (anti) {
            const PathResult r1 = kern.run(static_cast<std::uint64_t>(i), false);
            const PathResult r2 = kern.run(static_cast<std::uint64_t>(i), true);
            v = 0.5 * (r1.payoff + r2.payoff);
            cs.censored += r1.censored + r2.censored;
          } else {
            const PathResult r = kern.run(static_cast<std::uint64_t>(i), false);
            v = r.payoff;
            cs.censored += r.censored;
          }
          cs.sum += v;
          cs.sumsq += v * v;
        }
        sums[static_cast<size_t>(c)] = cs;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!worker_error) worker_error = std::current_exception();
      next.store(n_chunks);  // drain remaining work
    }
  };

  int nt = cfg.threads > 0 ? cfg.threads
                           : static_cast<int>(std::thread::hardware_concurrency());
  nt = std::max(1, std::min<int>(nt, static_cast<int>(std::min<std::int64_t>(n_chunks, 64))));
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  for (int i = 1; i < nt; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (worker_error) std::rethrow_exception(worker_error);

  // Fixed-order reduction: independent of thread count and scheduling.
  double sum = 0, sumsq = 0;
  std::int64_t cens = 0;
  for (const auto& cs : sums) {
    sum += cs.sum;
    sumsq += cs.sumsq;
    cens += cs.censored;
  }
  SimEstimate e;
  e.n_paths = anti ? 2 * n_units : n_units;
  e.n_censored = cens;
  e.mean = sum / n_units;
  const double var = std::max(0.0, sumsq / n_units - e.mean * e.mean);
  e.std_error = std::sqrt(var / n_units);
  return e;
}

template <class Model>
Kernel<Model> make_kernel(Model model, const DiffusionSpec& spec, const RefractionSet& refr,
                          const OccupationQuery& query, SimTarget target,
                          const PathConfig& cfg) {
  Kernel<Model> k{model,   refr.h,  refr.g, spec.x0, query.y, query.a,
                  query.q, query.p, query.omega, target,  cfg,     query.weight,
                  KillTable{}, false};
  const bool needs_hitting = target == SimTarget::HittingOccupation ||
                             target == SimTarget::HittingTime ||
                             target == SimTarget::WeightedOccupation;
  if (cfg.early_stop_tol > 0 && needs_hitting)
    k.kill = build_kill_table(spec, scale(spec), refr.h, query.a, cfg.horizon);
  k.strides_ok = Model::exact_gaussian && cfg.long_strides && cfg.bridge_correction &&
                 refr.h.affine && refr.g.affine;
  return k;
}

void check_query(const RefractionSet& refr, const OccupationQuery& query, SimTarget target) {
  const double x0 = refr.x0;
  switch (target) {
    case SimTarget::HittingOccupation:
    case SimTarget::WeightedOccupation:
      if (!(-x0 <= query.y && query.y < query.a))
        throw std::invalid_argument("simulate: -x0 <= y < a required");
      if (!(query.q >= 0)) throw std::invalid_argument("simulate: q >= 0 required");
      break;
    case SimTarget::HittingTime:
      if (!(query.a > -x0)) throw std::invalid_argument("simulate: a > -x0 required");
      break;
    case SimTarget::ExpClockOccupation:
      if (!(query.y >= -x0)) throw std::invalid_argument("simulate: y >= -x0 required");
      if (!(query.q > 0 && query.p > 0))
        throw std::invalid_argument("simulate: p, q > 0 required");
      break;
    case SimTarget::BankruptcyTime:
      if (!(query.y >= -x0)) throw std::invalid_argument("simulate: y >= -x0 required");
      if (!(query.q > 0 && query.omega > 0))
        throw std::invalid_argument("simulate: q, omega > 0 required");
      break;
  }
}

}  // namespace

SimEstimate simulate_transform(const DiffusionSpec& spec, const RefractionSet& refr,
                               const OccupationQuery& query, SimTarget target,
                               const PathConfig& cfg) {
  if (!(cfg.dt > 0) || !(cfg.dt <= cfg.horizon))
    throw std::invalid_argument("simulate: need 0 < dt <= horizon");
  if (cfg.n_paths < 1) throw std::invalid_argument("simulate: n_paths >= 1");
  check_query(refr, query, target);

  if (spec.is_brownian()) {
    BrownianModel m{spec.bm_mu, spec.bm_sigma};
    return drive(make_kernel(m, spec, refr, query, target, cfg), cfg);
  }
  GenericModel m{&spec};
  return drive(make_kernel(m, spec, refr, query, target, cfg), cfg);
}

std::vector<TraceRow> simulate_trace(const DiffusionSpec& spec, const RefractionSet& refr,
                                     const OccupationQuery& query, const PathConfig& cfg,
                                     int stride) {
  std::vector<TraceRow> rows;
  PathRng rng(cfg.seed, 0);
  const double dt = cfg.dt, sqdt = std::sqrt(dt);
  double x = spec.x0, xbar = spec.x0, t = 0.0, occ = 0.0;
  long n = 0;
  while (t < cfg.horizon) {
    const double u = x - refr.g(xbar);
    const double v = x - refr.h(xbar);
    if (n % stride == 0) rows.push_back({t, x, xbar, u, v, occ});
    if (u < -query.y) occ += dt;
    const double sig = spec.sigma(x);
    const double xn = x + spec.mu(x) * dt + sig * sqdt * rng.normal();
    double mx = std::max(x, xn);
    if (cfg.bridge_correction) {
      const double prod = (xbar - x) * (xbar - xn);
      if (mx >= xbar || prod < 18.5 * sig * sig * dt)
        mx = bridge_max(x, xn, sig * sig * dt, rng.uniform());
    }
    xbar = std::max(xbar, mx);
    x = xn;
    t += dt;
    ++n;
  }
  return rows;
}

LastPassageDiagnostic last_passage_diagnostic(const DiffusionSpec& spec,
                                              const ScaleFunction& scale,
                                              const RefractionSet& refr, double a,
                                              const PathConfig& cfg, double obs_dt) {
  LastPassageDiagnostic diag;
  diag.n_paths = cfg.n_paths;
  diag.y_min = kInf;
  diag.y_max = -kInf;

  auto yval = [&](double x, double xbar) {
    const double base = scale.s(refr.h(xbar) - a);
    return (scale.s(x) - base) / (scale.s(xbar) - base);
  };

  const int n_threads = std::max(1, cfg.threads > 0
                                        ? cfg.threads
                                        : static_cast<int>(std::thread::hardware_concurrency()));
  struct Acc {
    double sum_inc = 0, sumsq_inc = 0;
    long n_inc = 0;
    double y_min = kInf, y_max = -kInf, max_y_tau = 0;
    std::int64_t n_hit = 0;
    bool y0_ok = true;
  };
  // Chunked like the estimator so the reduction order is fixed.
  constexpr std::int64_t kChunk = 1024;
  const std::int64_t n_chunks = (cfg.n_paths + kChunk - 1) / kChunk;
  std::vector<Acc> accs(static_cast<size_t>(n_chunks));
  std::atomic<std::int64_t> next{0};

  auto run_path = [&](std::int64_t i, Acc& A) {
      PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
      double x = spec.x0, xbar = spec.x0, t = 0.0;
      double y_prev = yval(x, xbar);
      if (std::fabs(y_prev - 1.0) > 1e-12) A.y0_ok = false;
      double next_obs = obs_dt;
      const double dt = cfg.dt, sqdt = std::sqrt(dt);
      bool hit = false;
      while (t < cfg.horizon && !hit) {
        const double sig = spec.sigma(x);
        const double xn = x + spec.mu(x) * dt + sig * sqdt * rng.normal();
        double mx = std::max(x, xn);
        if (cfg.bridge_correction) {
          const double prod = (xbar - x) * (xbar - xn);
          if (mx >= xbar || prod < 18.5 * sig * sig * dt)
            mx = bridge_max(x, xn, sig * sig * dt, rng.uniform());
        }
        xbar = std::max(xbar, mx);
        x = xn;
        t += dt;
        if (x <= refr.h(xbar) - a) {
          hit = true;
          const double yv = std::max(yval(x, xbar), 0.0);
          A.max_y_tau = std::max(A.max_y_tau, yv);
          ++A.n_hit;
          break;
        }
        if (t >= next_obs) {
          const double yv = yval(x, xbar);
          A.y_min = std::min(A.y_min, yv);
          A.y_max = std::max(A.y_max, yv);
          const double inc = yv - y_prev;
          A.sum_inc += inc;
          A.sumsq_inc += inc * inc;
          ++A.n_inc;
          y_prev = yv;
          next_obs += obs_dt;
        }
      }
  };

  auto work = [&]() {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      Acc A;
      const std::int64_t lo = c * kChunk, hi = std::min<std::int64_t>(cfg.n_paths, lo + kChunk);
      for (std::int64_t i = lo; i < hi; ++i) run_path(i, A);
      accs[static_cast<size_t>(c)] = A;
    }
  };

  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  double sum = 0, sumsq = 0;
  long n_inc = 0;
  for (const auto& A : accs) {
    sum += A.sum_inc;
    sumsq += A.sumsq_inc;
    n_inc += A.n_inc;
    diag.y_min = std::min(diag.y_min, A.y_min);
    diag.y_max = std::max(diag.y_max, A.y_max);
    diag.max_y_at_tau = std::max(diag.max_y_at_tau, A.max_y_tau);
    diag.n_hit += A.n_hit;
    diag.y0_ok = diag.y0_ok && A.y0_ok;
  }
  if (n_inc > 0) {
    diag.mean_increment = sum / n_inc;
    const double var = std::max(0.0, sumsq / n_inc - diag.mean_increment * diag.mean_increment);
    diag.mean_increment_se = std::sqrt(var / n_inc);
  }

  // Trace of the first path on the observation grid.
  {
    PathRng rng(cfg.seed, 0);
    double x = spec.x0, xbar = spec.x0, t = 0.0, next_obs = 0.0;
    const double dt = cfg.dt, sqdt = std::sqrt(dt);
    while (t < std::min(cfg.horizon, 20.0)) {
      if (t >= next_obs) {
        diag.trace.emplace_back(t, yval(x, xbar));
        next_obs += obs_dt;
      }
      const double sig = spec.sigma(x);
      const double xn = x + spec.mu(x) * dt + sig * sqdt * rng.normal();
      double mx = std::max(x, xn);
      if (cfg.bridge_correction) {
        const double prod = (xbar - x) * (xbar - xn);
        if (mx >= xbar || prod < 18.5 * sig * sig * dt)
          mx = bridge_max(x, xn, sig * sig * dt, rng.uniform());
      }
      xbar = std::max(xbar, mx);
      x = xn;
      t += dt;
      if (x <= refr.h(xbar) - a) {
        diag.trace.emplace_back(t, 0.0);
        break;
      }
    }
  }
  return diag;
}

}  // namespace ayot
