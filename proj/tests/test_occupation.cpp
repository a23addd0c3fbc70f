#include <doctest.h>

#include <cmath>
#include <memory>

#include "ayot/occupation.hpp"

using namespace ayot;

namespace {

const DiffusionSpec kBm = make_brownian(0.5, 1.0, 0.0);  // delta = 0.5, sigma = 1, x0 = 0

WFunctions wfs_at(double q, const DiffusionSpec& spec = kBm) {
  return WFunctions(std::make_shared<EigenPair>(eigenpair(spec, q)), scale(spec));
}

double gamma_at(double q, double delta = 0.5, double sigma = 1.0) {
  return std::sqrt(delta * delta + 2.0 * q / (sigma * sigma));
}

// The paper's c = 0 closed form for the occupation-until-hitting transform.
double closed_form_no_tax(double delta, double sigma, double y, double a, double q) {
  const double g = gamma_at(q, delta, sigma);
  return g * std::exp(-delta * (a + y)) /
         (g * std::cosh(g * (a - y)) + delta * std::sinh(g * (a - y)));
}

// c = 0 closed form for the bankruptcy transform:
// omega (gamma'-delta) e^{-(gamma+delta) y} / ((q+omega)(gamma+gamma')).
double closed_form_bankruptcy(double delta, double sigma, double y, double q, double omega) {
  const double g = gamma_at(q, delta, sigma);
  const double gp = gamma_at(q + omega, delta, sigma);
  return omega / (q + omega) * (gp - delta) / (g + gp) * std::exp(-(g + delta) * y);
}

// Independent oracle for the same quantity, assembled from first-passage
// pieces only: E[e^{-omega O}] = (1 - E[e^{-q tau_b}]) + E[e^{-q tau_b}] E_b[e^{-omega O}],
// with E_x[e^{-q tau_b^-}] = phi-_q(x)/phi-_q(b) and the at-the-level value
// ((q/(q+omega)) psi+_{q+omega} + psi-_q) / (psi+_{q+omega} + psi-_q).
double strong_markov_bankruptcy(double delta, double sigma, double y, double q, double omega) {
  const double g = gamma_at(q, delta, sigma);
  const double gp = gamma_at(q + omega, delta, sigma);
  const double psi_p = gp - delta, psi_m = g + delta;
  const double at_level = (q / (q + omega) * psi_p + psi_m) / (psi_p + psi_m);
  const double lt_tau = std::exp(-(g + delta) * y);  // phi-_q(0)/phi-_q(-y)
  const double occ_transform = (1.0 - lt_tau) + lt_tau * at_level;
  return 1.0 - occ_transform;
}

}  // namespace

TEST_CASE("no-tax occupation until hitting matches the closed form") {
  auto sf = scale(kBm);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.0), 0.0);
  for (double q : {0.5, 1.0, 2.0}) {
    auto w = wfs_at(q);
    for (double y : {0.0, 0.2, 0.5})
      for (double a : {1.0, 2.0}) {
        const auto r = lt_occupation_until_hitting(sf, w, refr, y, a, q);
        CHECK(r.value ==
              doctest::Approx(closed_form_no_tax(0.5, 1.0, y, a, q)).epsilon(1e-8));
      }
  }
  // Frozen spot value from the closed form.
  auto w1 = wfs_at(1.0);
  const auto spot = lt_occupation_until_hitting(sf, w1, refr, 0.0, 1.0, 1.0);
  CHECK(spot.value == doctest::Approx(0.1980723).epsilon(1e-5));
  CHECK(spot.value >= 0.0);
  CHECK(spot.value <= 1.0);
}

TEST_CASE("drawdown-type hitting is certain at q = 0 for positive drift") {
  auto sf = scale(kBm);
  auto w0 = wfs_at(0.0);
  auto drawdown = make_refraction(MaxFunctional::linear(1.0, 0.0),
                                  MaxFunctional::linear(1.0, 0.0), 0.0);
  const auto r = lt_occupation_until_hitting(sf, w0, drawdown, 0.0, 1.0, 0.0);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));

  const auto h = lt_hitting_time(sf, w0, MaxFunctional::linear(1.0, 0.0), 0.0, 1.0, 0.0);
  CHECK(h.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("reduction: eq. (main) collapses to the hitting-time formula") {
  // y = -x0 and g(u) = u - x0 turn the occupation into the elapsed time.
  auto sf = scale(kBm);
  for (double q : {0.4, 1.0, 2.5}) {
    auto w = wfs_at(q);
    for (double hk : {0.0, 0.3, 0.8}) {
      auto refr = make_refraction(MaxFunctional::linear(hk, 0.0),
                                  MaxFunctional::linear(1.0, 0.0), 0.0);
      const auto full = lt_occupation_until_hitting(sf, w, refr, 0.0, 1.0, q);
      const auto lo = lt_hitting_time(sf, w, MaxFunctional::linear(hk, 0.0), 0.0, 1.0, q);
      CHECK(full.value == doctest::Approx(lo.value).epsilon(1e-8));
    }
  }
}

TEST_CASE("reduction: h = g = 0 against the explicit two-sided expression") {
  // (s(inf)-s(x)) s'(-y) / ((s(inf)-s(-y)) W1(-y,-a) + s'(-y) W(-y,-a)),
  // with s(inf) = 1/delta = 2 for delta = 0.5.
  auto sf = scale(kBm);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.0), 0.0);
  const double s_inf = 2.0;
  struct Pt {
    double y, a, q;
  };
  for (Pt pt : {Pt{0.0, 1.0, 1.0}, Pt{0.2, 1.5, 0.7}, Pt{0.5, 2.0, 2.0}}) {
    auto w = wfs_at(pt.q);
    const double num = (s_inf - sf.s(0.0)) * sf.s_prime(-pt.y);
    const double den = (s_inf - sf.s(-pt.y)) * w.W1(-pt.y, -pt.a) +
                       sf.s_prime(-pt.y) * w.W(-pt.y, -pt.a);
    const auto r = lt_occupation_until_hitting(sf, w, refr, pt.y, pt.a, pt.q);
    CHECK(r.value == doctest::Approx(num / den).epsilon(1e-8));
  }
}

TEST_CASE("reduction: exponential clock with full refraction gives q/(q+p)") {
  auto sf = scale(kBm);
  auto refr = make_refraction(MaxFunctional::linear(1.0, 0.0), MaxFunctional::linear(1.0, 0.0),
                              0.0);
  struct Pt {
    double q, p;
  };
  for (Pt pt : {Pt{1.0, 2.0}, Pt{0.5, 0.5}, Pt{2.0, 3.0}}) {
    auto w = wfs_at(pt.q);
    const auto r = lt_occupation_until_exp(kBm, sf, w, refr, 0.0, pt.q, pt.p);
    CHECK(r.value == doctest::Approx(pt.q / (pt.q + pt.p)).epsilon(1e-8));
  }
}

TEST_CASE("reduction: exponential clock at g = 0 against the eigenfunction expression") {
  auto sf = scale(kBm);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.0), 0.0);
  struct Pt {
    double y, q, p;
  };
  for (Pt pt : {Pt{0.0, 1.0, 2.0}, Pt{0.3, 0.7, 1.3}, Pt{1.0, 2.0, 0.5}}) {
    auto w = wfs_at(pt.q);
    const EigenPair pq = eigenpair(kBm, pt.q);
    const EigenPair pqp = eigenpair(kBm, pt.q + pt.p);
    const double b = -pt.y;
    const double numer = pqp.dphi_plus(b) * pq.phi_minus(0.0);
    const double denom =
        pqp.dphi_plus(b) * pq.phi_minus(b) - pq.dphi_minus(b) * pqp.phi_plus(b);
    const double expected = 1.0 - pt.p / (pt.q + pt.p) * numer / denom;
    const auto r = lt_occupation_until_exp(kBm, sf, w, refr, pt.y, pt.q, pt.p);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-8));
  }
  // x = 0, y = 0 instance: ((q/(q+p)) psi+_{q+p} + psi-_q) / (psi+_{q+p} + psi-_q) = 2/3.
  auto w = wfs_at(1.0);
  const auto r = lt_occupation_until_exp(kBm, sf, w, refr, 0.0, 1.0, 2.0);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("occupation below a level: branch agreement and limits") {
  auto w = wfs_at(1.0);
  // x0 = b: both branches must agree; at b = x0 = 0 the value is 2/3.
  const auto at_boundary = lt_occupation_below_level_exp(kBm, w, 0.0, 1.0, 2.0);
  CHECK(at_boundary.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  // x0 >= b and x0 < b branches joined continuously across b = x0.
  const auto just_below = lt_occupation_below_level_exp(kBm, w, -1e-9, 1.0, 2.0);
  const auto just_above = lt_occupation_below_level_exp(kBm, w, 1e-9, 1.0, 2.0);
  CHECK(just_below.value == doctest::Approx(at_boundary.value).epsilon(1e-6));
  CHECK(just_above.value == doctest::Approx(at_boundary.value).epsilon(1e-6));

  // p -> 0+ limit: no penalty, transform -> 1.
  const auto p0 = lt_occupation_below_level_exp(kBm, w, 0.0, 1.0, 1e-8);
  CHECK(p0.value == doctest::Approx(1.0).epsilon(1e-6));

  // x0 > b: the closed form against the exponential-clock engine on the raw
  // diffusion (level b = -y). The x0 < b branch is checked by Monte Carlo in
  // the simulator suite.
  auto sf = scale(kBm);
  auto refr0 = refraction_from_tax(TaxRate::constant_rate(0.0), 0.0);
  const auto direct = lt_occupation_below_level_exp(kBm, w, -0.3, 1.0, 2.0);
  const auto via_clock = lt_occupation_until_exp(kBm, sf, w, refr0, 0.3, 1.0, 2.0);
  CHECK(direct.value == doctest::Approx(via_clock.value).epsilon(1e-8));

  // x0 < b monotone sanity: deeper starting points make the occupation
  // larger and the transform smaller.
  const DiffusionSpec below = make_brownian(0.5, 1.0, -1.0);
  auto wb = wfs_at(1.0, below);
  const auto deep = lt_occupation_below_level_exp(below, wb, 0.0, 1.0, 2.0);
  CHECK(deep.value < at_boundary.value);
  CHECK(deep.value > 0.0);
}

TEST_CASE("bankruptcy with zero tax reproduces the closed form") {
  auto sf = scale(kBm);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.0), 0.0);
  auto w = wfs_at(1.0);
  const auto r = lt_bankruptcy_tax(kBm, sf, w, refr, 0.0, 1.0, 2.0);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

  for (double y : {0.0, 0.5})
    for (double om : {1.0, 2.0}) {
      // The two test oracles must agree with each other...
      CHECK(closed_form_bankruptcy(0.5, 1.0, y, 1.0, om) ==
            doctest::Approx(strong_markov_bankruptcy(0.5, 1.0, y, 1.0, om)).epsilon(1e-12));
      // ...and the general quadrature path with both.
      const auto v = lt_bankruptcy_tax(kBm, sf, w, refr, y, 1.0, om);
      CHECK(v.value == doctest::Approx(closed_form_bankruptcy(0.5, 1.0, y, 1.0, om))
                           .epsilon(1e-8));
    }

  // omega -> 0+: no bankruptcy pressure.
  const auto r0 = lt_bankruptcy_tax(kBm, sf, w, refr, 0.0, 1.0, 1e-8);
  CHECK(r0.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("weighted occupation: unit and constant weights reduce as stated") {
  auto sf = scale(kBm);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.5), 0.0);
  const double y = 0.2, a = 1.0, q = 1.0;

  auto w1 = wfs_at(q);
  const auto base = lt_occupation_until_hitting(sf, w1, refr, y, a, q);

  const auto unit = lt_weighted_occupation(kBm, sf, refr, y, a, q, [](double) { return 1.0; });
  CHECK(unit.value == doctest::Approx(base.value).epsilon(1e-8));

  auto w4 = wfs_at(4.0 * q);
  const auto base4 = lt_occupation_until_hitting(sf, w4, refr, y, a, 4.0 * q);
  const auto twice = lt_weighted_occupation(kBm, sf, refr, y, a, q, [](double) { return 2.0; });
  CHECK(twice.value == doctest::Approx(base4.value).epsilon(1e-8));
}

TEST_CASE("weighted occupation with a state-dependent weight stays a transform") {
  DiffusionSpec bm = kBm;
  bm.window = {-15.0, 40.0};
  auto sf = scale(bm);
  auto refr = make_refraction(MaxFunctional::zero(), MaxFunctional::linear(1.0, 0.0), 0.0);
  const auto r = lt_weighted_occupation(bm, sf, refr, 0.2, 1.0, 1.0,
                                        [](double z) { return std::sqrt(1.0 + z * z); });
  CHECK(r.value > 0.0);
  CHECK(r.value < 1.0);
  // A larger weight can only shrink the transform.
  const auto base = lt_weighted_occupation(bm, sf, refr, 0.2, 1.0, 1.0,
                                           [](double) { return 1.0; });
  CHECK(r.value < base.value);
}

TEST_CASE("Brownian tax fast paths: c = 0 closed forms and spot values") {
  const auto occ = lt_occupation_bm_tax(0.5, 1.0, 0.0, 0.0, 1.0, 1.0);
  CHECK(occ.backend == TransformBackend::ClosedForm);
  CHECK(occ.value == doctest::Approx(0.1980723).epsilon(1e-5));
  CHECK(occ.value == doctest::Approx(closed_form_no_tax(0.5, 1.0, 0.0, 1.0, 1.0))
                         .epsilon(1e-12));

  const auto bk = lt_bankruptcy_bm_tax(0.5, 1.0, 0.0, 0.0, 1.0, 2.0);
  CHECK(bk.backend == TransformBackend::ClosedForm);
  CHECK(bk.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const auto bk5 = lt_bankruptcy_bm_tax(0.5, 1.0, 0.0, 0.5, 1.0, 2.0);
  CHECK(bk5.value == doctest::Approx(closed_form_bankruptcy(0.5, 1.0, 0.5, 1.0, 2.0))
                         .epsilon(1e-12));
}

TEST_CASE("Brownian tax fast paths agree with the general machinery at c = 0.5") {
  auto sf = scale(kBm);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.5), 0.0);
  auto w = wfs_at(1.0);

  const auto fast = lt_occupation_bm_tax(0.5, 1.0, 0.5, 0.2, 1.0, 1.0);
  const auto gen = lt_occupation_until_hitting(sf, w, refr, 0.2, 1.0, 1.0);
  CHECK(fast.value == doctest::Approx(gen.value).epsilon(1e-6));
  CHECK(fast.backend == TransformBackend::Quadrature);

  const auto fastb = lt_bankruptcy_bm_tax(0.5, 1.0, 0.5, 0.0, 1.0, 2.0);
  const auto genb = lt_bankruptcy_tax(kBm, sf, w, refr, 0.0, 1.0, 2.0);
  CHECK(fastb.value == doctest::Approx(genb.value).epsilon(1e-6));
}

TEST_CASE("fast-path integral at c = 0 equals the printed closed form") {
  // Evaluate eq1g's integral with a tiny positive c and compare against c = 0.
  const auto tiny = lt_occupation_bm_tax(0.5, 1.0, 1e-8, 0.2, 1.0, 1.0);
  const auto zero = lt_occupation_bm_tax(0.5, 1.0, 0.0, 0.2, 1.0, 1.0);
  CHECK(tiny.value == doctest::Approx(zero.value).epsilon(1e-6));

  const auto tinyb = lt_bankruptcy_bm_tax(0.5, 1.0, 1e-8, 0.3, 1.0, 2.0);
  const auto zerob = lt_bankruptcy_bm_tax(0.5, 1.0, 0.0, 0.3, 1.0, 2.0);
  CHECK(tinyb.value == doctest::Approx(zerob.value).epsilon(1e-6));
}

TEST_CASE("fast path flags non-decaying tails") {
  CHECK_THROWS_AS(lt_occupation_bm_tax(-0.5, 1.0, 0.5, 0.2, 1.0, 1.0), ConvergenceError);
}

TEST_CASE("general path handles negative drift") {
  // delta < 0: upward transience fails but the m-integral still converges.
  const DiffusionSpec down = make_brownian(-0.3, 1.0, 0.0);
  auto sf = scale(down);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.0), 0.0);
  auto w = wfs_at(1.0, down);
  const auto r = lt_occupation_until_hitting(sf, w, refr, 0.2, 1.0, 1.0);
  CHECK(r.value == doctest::Approx(closed_form_no_tax(-0.3, 1.0, 0.2, 1.0, 1.0))
                       .epsilon(1e-8));
}

TEST_CASE("transforms are monotone in q and bounded") {
  auto sf = scale(kBm);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.25), 0.0);
  double prev = 1.0;
  for (double q : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    auto w = wfs_at(q);
    const auto r = lt_occupation_until_hitting(sf, w, refr, 0.2, 1.0, q);
    CHECK(r.value >= 0.0);
    CHECK(r.value <= 1.0);
    CHECK(r.value <= prev + 1e-12);
    prev = r.value;
  }

  // 1 - E[e^{-q tau_omega}] nonincreasing in omega.
  auto w = wfs_at(1.0);
  double prev_c = 1.0;
  for (double om : {0.5, 1.0, 2.0, 4.0}) {
    const auto r = lt_bankruptcy_tax(kBm, sf, w, refr, 0.0, 1.0, om);
    const double compl_v = 1.0 - r.value;
    CHECK(compl_v <= prev_c + 1e-12);
    prev_c = compl_v;
  }
}

TEST_CASE("every transform is invariant under affine rescaling of the scale function") {
  auto sf = scale(kBm);
  ScaleFunction sf2 = sf;
  sf2.s = [s = sf.s](double z) { return 3.0 * s(z) - 1.0; };
  sf2.s_prime = [sp = sf.s_prime](double z) { return 3.0 * sp(z); };

  auto pair = std::make_shared<EigenPair>(eigenpair(kBm, 1.0));
  WFunctions w1(pair, sf);
  WFunctions w2(pair, sf2);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.4), 0.0);

  const auto a1 = lt_occupation_until_hitting(sf, w1, refr, 0.2, 1.0, 1.0);
  const auto a2 = lt_occupation_until_hitting(sf2, w2, refr, 0.2, 1.0, 1.0);
  CHECK(a1.value == doctest::Approx(a2.value).epsilon(1e-10));

  const auto b1 = lt_occupation_until_exp(kBm, sf, w1, refr, 0.1, 1.0, 2.0);
  const auto b2 = lt_occupation_until_exp(kBm, sf2, w2, refr, 0.1, 1.0, 2.0);
  CHECK(b1.value == doctest::Approx(b2.value).epsilon(1e-10));

  const auto c1 = lt_hitting_time(sf, w1, refr.h, 0.0, 1.0, 1.0);
  const auto c2 = lt_hitting_time(sf2, w2, refr.h, 0.0, 1.0, 1.0);
  CHECK(c1.value == doctest::Approx(c2.value).epsilon(1e-10));
}

TEST_CASE("preconditions are rejected") {
  auto sf = scale(kBm);
  auto w = wfs_at(1.0);
  auto refr = refraction_from_tax(TaxRate::constant_rate(0.0), 0.0);
  CHECK_THROWS_AS(lt_occupation_until_hitting(sf, w, refr, 1.0, 1.0, 1.0),
                  std::invalid_argument);  // y >= a
  CHECK_THROWS_AS(lt_occupation_until_hitting(sf, w, refr, -0.5, 1.0, 1.0),
                  std::invalid_argument);  // y < -x0
  CHECK_THROWS_AS(lt_occupation_until_exp(kBm, sf, w, refr, 0.0, 1.0, 0.0),
                  std::invalid_argument);  // p = 0
  CHECK_THROWS_AS(lt_bankruptcy_tax(kBm, sf, w, refr, 0.0, 1.0, 0.0),
                  std::invalid_argument);  // omega = 0
  auto not_tax = make_refraction(MaxFunctional::zero(), MaxFunctional::linear(0.5, 0.0), 0.0);
  CHECK_THROWS_AS(lt_bankruptcy_tax(kBm, sf, w, not_tax, 0.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(lt_occupation_bm_tax(0.5, 1.0, 1.5, 0.0, 1.0, 1.0), std::invalid_argument);
}
