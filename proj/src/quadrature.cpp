#include "ayot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ayot::quad {

namespace {

// Kronrod 15-point abscissae/weights on [-1,1]; Gauss-7 weights sit on the
// odd-index Kronrod nodes.
const double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                        0.741531185599394, 0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.000000000000000};
const double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                        0.140653259715525, 0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

}  // namespace

QuadResult gk15(const RealFn& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);

  double fc = f(mid);
  double k15 = kWgk[7] * fc;
  double g7 = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = hl * kXgk[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    k15 += kWgk[i] * fsum;
    if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
  }
  k15 *= hl;
  g7 *= hl;

  QuadResult r;
  r.value = k15;
  r.abs_err = std::fabs(k15 - g7);  // conservative; no resasc normalization
  r.n_evals = 15;
  return r;
}

QuadResult integrate(const RealFn& f, double a, double b, double abs_tol, double rel_tol,
                     int max_intervals) {
  struct Iv {
    double a, b, value, err;
  };
  QuadResult first = gk15(f, a, b);
  std::vector<Iv> heap{{a, b, first.value, first.abs_err}};
  double total = first.value, toterr = first.abs_err;
  long evals = first.n_evals;

  auto worst = [&]() {
    size_t w = 0;
    for (size_t i = 1; i < heap.size(); ++i)
      if (heap[i].err > heap[w].err) w = i;
    return w;
  };

  while (toterr > std::max(abs_tol, rel_tol * std::fabs(total)) &&
         static_cast<int>(heap.size()) < max_intervals) {
    size_t w = worst();
    Iv iv = heap[w];
    if (iv.b - iv.a < 1e-15 * (std::fabs(iv.a) + std::fabs(iv.b) + 1.0)) break;
    const double mid = 0.5 * (iv.a + iv.b);
    QuadResult l = gk15(f, iv.a, mid), r = gk15(f, mid, iv.b);
    evals += l.n_evals + r.n_evals;
    total += l.value + r.value - iv.value;
    toterr += l.abs_err + r.abs_err - iv.err;
    heap[w] = {iv.a, mid, l.value, l.abs_err};
    heap.push_back({mid, iv.b, r.value, r.abs_err});
  }

  QuadResult out;
  out.value = total;
  out.abs_err = std::max(toterr, 0.0);
  out.n_evals = evals;
  out.converged = toterr <= std::max(abs_tol, rel_tol * std::fabs(total)) * 1.001 ||
                  toterr <= abs_tol;
  return out;
}

QuadResult integrate_semi_infinite(const RealFn& f, double a, double abs_tol, double rel_tol,
                                   double decay_rate, double hard_limit) {
  QuadResult out;
  double lo = a;
  double width = decay_rate > 0 ? std::max(1.0, 2.0 / decay_rate) : 1.0;
  int quiet_panels = 0;

  while (lo < hard_limit) {
    const double hi = std::min(lo + width, hard_limit);
    QuadResult panel = integrate(f, lo, hi, abs_tol * 0.25, rel_tol * 0.25);
    out.value += panel.value;
    out.abs_err += panel.abs_err;
    out.n_evals += panel.n_evals;

    const double tol = std::max(abs_tol, rel_tol * std::fabs(out.value));
    double tail = std::fabs(f(hi));
    out.n_evals += 1;
    if (decay_rate > 0) tail /= decay_rate;  // integral of the exponential tail

    if (std::fabs(panel.value) < tol && tail < tol) {
      if (++quiet_panels >= 2) {
        out.abs_err += tail;
        out.converged = true;
        return out;
      }
    } else {
      quiet_panels = 0;
    }
    lo = hi;
    width *= 2.0;
  }
  out.converged = false;
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
const double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
const double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
const double kB4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                       -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

SweepResult exp_weighted_sweep(const RealFn& kappa, const RealFn& log_f, double x0,
                               const SweepOptions& opt) {
  SweepResult res;
  double m = x0, I = 0.0, P = 0.0;
  double h = opt.h_init;
  long steps = 0;

  // Truncation bookkeeping: the integrand's recent log-slope gives an
  // exponential tail bound; stop when integrand and tail are negligible.
  double peak_integ = 0.0;
  constexpr int kRing = 6;
  double ring_m[kRing] = {0}, ring_lg[kRing] = {0};
  int ring_n = 0;

  // State derivative: dI/dm = kappa(m), dP/dm = exp(log_f(m) - I).
  auto rhs = [&](double mm, double II, double& dI, double& dP) {
    dI = kappa(mm);
    dP = std::exp(log_f(mm) - II);
    res.n_evals += 2;
    if (!std::isfinite(dI) || std::isnan(dP))
      throw ConvergenceError("non-finite integrand in occupation sweep", mm);
  };

  double kI[7], kP[7];
  while (steps < opt.max_steps) {
    if (m >= opt.m_max) break;
    h = std::min(h, opt.m_max - m);

    rhs(m, I, kI[0], kP[0]);
    bool bad = false;
    for (int s = 1; s < 7 && !bad; ++s) {
      double accI = 0, accP = 0;
      for (int j = 0; j < s; ++j) {
        accI += kA[s][j] * kI[j];
        accP += kA[s][j] * kP[j];
      }
      const double Is = I + h * accI;
      if (!std::isfinite(Is)) {
        bad = true;
        break;
      }
      rhs(m + kC[s] * h, Is, kI[s], kP[s]);
    }
    if (bad) {
      h *= 0.5;
      if (h < opt.h_min) throw ConvergenceError("sweep step underflow", m);
      continue;
    }

    // 5th-order solution (FSAL row) and embedded 4th-order error.
    double I5 = I, P5 = P, I4 = I, P4 = P;
    for (int s = 0; s < 7; ++s) {
      if (s < 6) {
        I5 += h * kA[6][s] * kI[s];
        P5 += h * kA[6][s] * kP[s];
      }
      I4 += h * kB4[s] * kI[s];
      P4 += h * kB4[s] * kP[s];
    }

    const double scI = opt.abs_tol + opt.rel_tol * std::fabs(I5);
    const double scP = opt.abs_tol + opt.rel_tol * std::max(std::fabs(P5), 1e-3);
    const double eI = std::fabs(I5 - I4) / scI;
    const double eP = std::fabs(P5 - P4) / scP;
    const double err = std::max(eI, eP);

    if (err <= 1.0) {
      m += h;
      I = I5;
      P = P5;
      res.abs_err += std::fabs(P5 - P4);
      ++steps;

      const double surv = std::exp(-I);
      const double integ = kP[6];  // exp(log_f - I) at the new point
      peak_integ = std::max(peak_integ, integ);

      double lambda = 0.0;  // fitted decay rate of the integrand
      if (integ > 0) {
        const int slot = ring_n % kRing;
        if (ring_n >= kRing) {
          const int old = (ring_n + 1) % kRing;
          lambda = (ring_lg[old] - std::log(integ)) / (m - ring_m[old]);
        }
        ring_m[slot] = m;
        ring_lg[slot] = std::log(integ);
        ++ring_n;
      }

      const double cut = opt.surv_cut * std::max(std::fabs(P), 0.01);
      const bool integ_dead =
          peak_integ > 0 && integ < cut && integ < 1e-8 * peak_integ &&
          (integ == 0.0 || (lambda > 1e-4 && integ / lambda < 8.0 * cut));
      const bool surv_ok = !opt.require_survival_decay || surv < opt.surv_cut;
      if (integ_dead && surv_ok && m > x0 + 0.5) {
        res.integral = P;
        res.survival = surv;
        res.m_end = m;
        if (lambda > 0) res.abs_err += integ / lambda;
        res.converged = true;
        return res;
      }
    }

    const double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    h = std::min(h, opt.h_max);
    if (h < opt.h_min) throw ConvergenceError("sweep step underflow", m);
  }

  res.integral = P;
  res.survival = std::exp(-I);
  res.m_end = m;
  res.converged = false;
  return res;
}

}  // namespace ayot::quad
