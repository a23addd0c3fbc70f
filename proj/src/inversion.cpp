#include "ayot/inversion.hpp"

#include <algorithm>
#include <cmath>

namespace ayot {

namespace {

void check_grid(const InversionConfig& cfg) {
  if (cfg.t_grid.empty()) throw std::invalid_argument("inversion: empty t_grid");
  for (size_t i = 0; i < cfg.t_grid.size(); ++i) {
    if (!(cfg.t_grid[i] > 0)) throw std::invalid_argument("inversion: t must be positive");
    if (i > 0 && !(cfg.t_grid[i] > cfg.t_grid[i - 1]))
      throw std::invalid_argument("inversion: t_grid must be strictly increasing");
  }
}

// Stehfest coefficients, extended precision.
std::vector<long double> stehfest_coeffs(int N) {
  const int half = N / 2;
  auto lfact = [](int n) { return std::lgammal(static_cast<long double>(n) + 1.0L); };
  std::vector<long double> zeta(static_cast<size_t>(N) + 1, 0.0L);
  for (int k = 1; k <= N; ++k) {
    long double sum = 0.0L;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      long double lt = half * std::log(static_cast<long double>(j)) + lfact(2 * j) -
                       lfact(half - j) - lfact(j) - lfact(j - 1) - lfact(k - j) -
                       lfact(2 * j - k);
      sum += std::exp(lt);
    }
    zeta[static_cast<size_t>(k)] = ((half + k) % 2 == 0 ? 1.0L : -1.0L) * sum;
  }
  return zeta;
}

// f(t) ~ (ln2/t) sum_k zeta_k F(k ln2 / t)
double gaver_stehfest(const RealFn& F, double t, const std::vector<long double>& zeta) {
  const double ln2t = std::log(2.0) / t;
  long double acc = 0.0L;
  for (size_t k = 1; k < zeta.size(); ++k)
    acc += zeta[k] * static_cast<long double>(F(static_cast<double>(k) * ln2t));
  return static_cast<double>(acc * static_cast<long double>(ln2t));
}

// Fixed-Talbot (Abate-Valko): M nodes on the contour s(theta) = r theta (cot theta + i).
double fixed_talbot(const ComplexFn& F, double t, int M) {
  const double r = 2.0 * M / (5.0 * t);
  std::complex<double> acc = 0.5 * F(std::complex<double>(r, 0.0)) * std::exp(r * t);
  double sum = acc.real();
  for (int k = 1; k < M; ++k) {
    const double th = k * M_PI / M;
    const double cot = std::cos(th) / std::sin(th);
    const std::complex<double> s(r * th * cot, r * th);
    const double sigma = th + (th * cot - 1.0) * cot;
    const std::complex<double> term =
        std::exp(s * t) * F(s) * std::complex<double>(1.0, sigma);
    sum += term.real();
  }
  return (r / M) * sum;
}

std::vector<CdfPoint> isotonic_clip(std::vector<CdfPoint> pts) {
  // Pool adjacent violators with equal weights, then clip to [0,1].
  const size_t n = pts.size();
  std::vector<double> level(n), weight(n);
  std::vector<size_t> count(n);
  size_t m = 0;
  for (size_t i = 0; i < n; ++i) {
    level[m] = pts[i].F;
    weight[m] = 1;
    count[m] = 1;
    ++m;
    while (m > 1 && level[m - 2] > level[m - 1]) {
      const double w = weight[m - 2] + weight[m - 1];
      level[m - 2] = (weight[m - 2] * level[m - 2] + weight[m - 1] * level[m - 1]) / w;
      weight[m - 2] = w;
      count[m - 2] += count[m - 1];
      --m;
    }
  }
  size_t i = 0;
  for (size_t b = 0; b < m; ++b)
    for (size_t c = 0; c < count[b]; ++c) pts[i++].F = std::clamp(level[b], 0.0, 1.0);
  return pts;
}

}  // namespace

InversionResult invert_cdf(const RealFn& transform, const InversionConfig& cfg) {
  check_grid(cfg);
  if (cfg.method == InversionConfig::Method::FixedTalbot)
    throw std::invalid_argument(
        "FixedTalbot needs a complex-capable transform; use the complex overload");
  if (cfg.order < 8 || cfg.order > 20 || cfg.order % 2 != 0)
    throw std::invalid_argument("Gaver-Stehfest order must be even and within [8, 20]");

  auto Fhat = [&transform](double q) { return transform(q) / q; };
  const auto zeta = stehfest_coeffs(cfg.order);
  const auto zeta_lo = stehfest_coeffs(cfg.order - 2);

  InversionResult res;
  for (double t : cfg.t_grid) {
    const double v = gaver_stehfest(Fhat, t, zeta);
    const double v_lo = gaver_stehfest(Fhat, t, zeta_lo);
    res.max_order_disagreement = std::max(res.max_order_disagreement, std::fabs(v - v_lo));
    res.points.push_back({t, v});
  }
  res.cancellation_warning = res.max_order_disagreement > 1e-3;
  res.points = isotonic_clip(std::move(res.points));
  return res;
}

InversionResult invert_cdf(const ComplexFn& transform, const InversionConfig& cfg) {
  check_grid(cfg);
  if (cfg.method == InversionConfig::Method::GaverStehfest) {
    RealFn real_transform = [&transform](double q) {
      return transform(std::complex<double>(q, 0.0)).real();
    };
    return invert_cdf(real_transform, cfg);
  }
  if (cfg.order < 4) throw std::invalid_argument("Talbot node count must be >= 4");

  auto Fhat = [&transform](std::complex<double> s) { return transform(s) / s; };
  InversionResult res;
  for (double t : cfg.t_grid) res.points.push_back({t, fixed_talbot(Fhat, t, cfg.order)});
  res.points = isotonic_clip(std::move(res.points));
  return res;
}

}  // namespace ayot
