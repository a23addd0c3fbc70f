#include <doctest.h>

#include <cmath>

#include "ayot/diffusion.hpp"
#include "ayot/refraction.hpp"
#include "ayot/scale.hpp"

using namespace ayot;

TEST_CASE("make_brownian computes delta and rejects bad parameters") {
  CHECK(make_brownian(0.5, 1.0, 0.0).delta() == doctest::Approx(0.5));
  CHECK(make_brownian(1.0, 1.0, 0.0).delta() == doctest::Approx(1.0));
  CHECK(make_brownian(-0.3, 2.0, 1.0).delta() == doctest::Approx(-0.075));
  CHECK_THROWS_AS(make_brownian(0.5, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_brownian(0.5, -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_brownian(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("brownian scale closed form") {
  auto sf = scale(make_brownian(0.5, 1.0, 0.0));
  CHECK(sf.s(0.0) == doctest::Approx(0.0));
  CHECK(sf.s(1.0) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-12));
  for (int i = 0; i < 50; ++i) {
    const double z = -5.0 + 0.2 * i;
    CHECK(sf.s_prime(z) > 0.0);
    CHECK(sf.s(z + 0.2) > sf.s(z));
  }
}

TEST_CASE("numeric scale matches the Brownian closed form to 1e-8") {
  auto bm = make_brownian(0.5, 1.0, 0.0);
  DiffusionSpec gen = make_custom([](double) { return 0.5; }, [](double) { return 1.0; }, 0.0,
                                  {-8.0, 8.0});
  auto exact = scale(bm);
  auto num = scale(gen);
  // The numeric scale is anchored s(x0)=0, s'(x0)=1; the closed form at
  // s(0)=0, s'(0)=2. Compare after rescaling: both anchored at x0=0.
  const double alpha = exact.s_prime(0.0) / num.s_prime(0.0);
  for (int i = 0; i <= 100; ++i) {
    const double z = -5.0 + 0.1 * i;
    CHECK(alpha * num.s(z) == doctest::Approx(exact.s(z)).epsilon(1e-8));
    CHECK(alpha * num.s_prime(z) == doctest::Approx(exact.s_prime(z)).epsilon(1e-8));
  }
}

TEST_CASE("validate estimates the growth/Lipschitz constants") {
  auto rep = validate(make_brownian(0.5, 1.0, 0.0));
  CHECK(rep.ok);
  CHECK(rep.lipschitz_estimate == doctest::Approx(0.0));
  CHECK(rep.sigma_min == doctest::Approx(1.0));

  DiffusionSpec ou = make_custom([](double z) { return -0.8 * z; },
                                 [](double) { return 0.7; }, 0.0, {-10.0, 10.0});
  auto rep2 = validate(ou);
  CHECK(rep2.ok);
  CHECK(rep2.lipschitz_estimate == doctest::Approx(0.8).epsilon(1e-6));

  DiffusionSpec flat = make_custom([](double) { return 0.0; }, [](double) { return 1.0; },
                                   0.0, {-5.0, 5.0});
  auto rep3 = validate(flat);
  bool has_zero_drift_note = false;
  for (const auto& n : rep3.notes)
    if (n.find("zero") != std::string::npos) has_zero_drift_note = true;
  CHECK(has_zero_drift_note);
}

TEST_CASE("refraction from a constant tax rate") {
  auto r = refraction_from_tax(TaxRate::constant_rate(0.25), 0.0);
  CHECK(r.g(4.0) == doctest::Approx(1.0));
  CHECK(r.g(0.0) == doctest::Approx(0.0));
  CHECK(r.h(4.0) == doctest::Approx(r.g(4.0)));
  CHECK(r.gamma_bar(4.0) == doctest::Approx(3.0));
  CHECK(r.from_tax());

  auto r0 = refraction_from_tax(TaxRate::constant_rate(0.0), 0.0);
  CHECK(r0.g(7.0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(TaxRate::constant_rate(1.0), std::invalid_argument);
  CHECK_THROWS_AS(TaxRate::constant_rate(-0.1), std::invalid_argument);
}

TEST_CASE("refraction from a state-dependent tax rate") {
  // gamma(z) = z/(1+z) on [0, inf): g(u) = u - log(1+u).
  auto r = refraction_from_tax(TaxRate::of([](double z) { return z / (1.0 + z); }), 0.0,
                               {0.0, 60.0});
  for (double u : {0.5, 1.0, 3.0, 10.0, 40.0})
    CHECK(r.g(u) == doctest::Approx(u - std::log1p(u)).epsilon(1e-9));
  // gamma_bar strictly increasing with x0 < gamma_bar(u) <= u
  double prev = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double u = i * 0.1;
    const double gb = r.gamma_bar(u);
    CHECK(gb > prev);
    CHECK(gb <= u + 1e-12);
    prev = gb;
  }
}

TEST_CASE("refraction bounds hold on a dense grid") {
  auto r = refraction_from_tax(TaxRate::of([](double z) { return 0.9 * z / (1.0 + z); }), 0.0,
                               {0.0, 60.0});
  CHECK_NOTHROW(validate_refraction(r, 50.0, true, 1000));

  auto bad = make_refraction(MaxFunctional::linear(0.5, 0.0), MaxFunctional::linear(0.2, 0.0),
                             0.0);
  CHECK_THROWS_AS(validate_refraction(bad, 10.0, true), std::invalid_argument);

  auto shifted = make_refraction(MaxFunctional::zero(), MaxFunctional::of([](double u) {
                                   return 0.5 * u + 1.0;  // g(x0) != 0
                                 }),
                                 0.0);
  CHECK_THROWS_AS(validate_refraction(shifted, 10.0, false), std::invalid_argument);
}
