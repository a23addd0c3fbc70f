#include <doctest.h>

#include <cmath>
#include <memory>

#include "ayot/eigenfunctions.hpp"
#include "ayot/wfunctions.hpp"

using namespace ayot;

namespace {
const DiffusionSpec kBm = make_brownian(0.5, 1.0, 0.0);  // delta = 0.5
}

TEST_CASE("Brownian eigenpair closed forms at q=1") {
  // gamma = sqrt(delta^2 + 2q/sigma^2) = sqrt(0.25 + 2) = 1.5
  auto p = eigenpair(kBm, 1.0);
  CHECK(p.wronskian() == doctest::Approx(1.5).epsilon(1e-14));
  for (double z : {-2.0, -0.5, 0.0, 1.3, 4.0}) {
    CHECK(p.phi_plus(z) == doctest::Approx(std::exp(z)).epsilon(1e-13));     // e^{(1.5-0.5)z}
    CHECK(p.phi_minus(z) == doctest::Approx(std::exp(-2.0 * z)).epsilon(1e-13));
    CHECK(p.psi_plus(z) == doctest::Approx(1.0));
    CHECK(p.psi_minus(z) == doctest::Approx(2.0));
  }
}

TEST_CASE("Brownian eigenpair at q=0 degenerates to gamma=|delta|") {
  auto p = eigenpair(kBm, 0.0);
  CHECK(p.wronskian() == doctest::Approx(0.5));
  auto pneg = eigenpair(make_brownian(-0.5, 1.0, 0.0), 0.0);
  CHECK(pneg.wronskian() == doctest::Approx(0.5));
  CHECK_THROWS_AS(eigenpair(kBm, -1.0), std::invalid_argument);
}

TEST_CASE("Wronskian constancy on a grid for both backends") {
  auto sf = scale(kBm);
  auto check_pair = [&](const EigenPair& p, double lo, double hi) {
    const double w0 = std::exp(p.log_phi_plus(0.0) + p.log_phi_minus(0.0)) *
                      (p.psi_plus(0.0) + p.psi_minus(0.0)) / sf.s_prime(0.0);
    for (int i = 0; i <= 64; ++i) {
      const double z = lo + (hi - lo) * i / 64.0;
      const double w = std::exp(p.log_phi_plus(z) + p.log_phi_minus(z)) *
                       (p.psi_plus(z) + p.psi_minus(z)) / sf.s_prime(z);
      CHECK(w == doctest::Approx(w0).epsilon(1e-6));
    }
  };
  check_pair(eigenpair(kBm, 1.0), -4.0, 4.0);
  check_pair(EigenPair::numeric(kBm, 1.0, [](double) { return 1.0; }, {-12.0, 12.0}), -4.0,
             4.0);
}

TEST_CASE("numeric backend reproduces the analytic psi on [-3,3]") {
  for (double q : {0.5, 1.0, 4.0}) {
    auto ana = eigenpair(kBm, q);
    auto num = EigenPair::numeric(kBm, q, [q](double) { return q; }, {-15.0, 15.0});
    CHECK(num.wronskian_residual() < 1e-6);
    for (int i = 0; i <= 120; ++i) {
      const double z = -3.0 + 0.05 * i;
      CHECK(num.psi_plus(z) == doctest::Approx(ana.psi_plus(z)).epsilon(1e-6));
      CHECK(num.psi_minus(z) == doctest::Approx(ana.psi_minus(z)).epsilon(1e-6));
    }
  }
}

TEST_CASE("numeric pair is monotone and positive") {
  auto num = EigenPair::numeric(kBm, 2.0, [](double) { return 2.0; }, {-10.0, 10.0});
  double prev_p = -kInf, prev_m = kInf;
  for (int i = 0; i <= 100; ++i) {
    const double z = -6.0 + 0.12 * i;
    const double lp = num.log_phi_plus(z), lm = num.log_phi_minus(z);
    CHECK(lp > prev_p);
    CHECK(lm < prev_m);
    prev_p = lp;
    prev_m = lm;
  }
}

TEST_CASE("weighted eigenpair: constant weights rescale the rate") {
  // b == 1 -> same as eigenpair; b == 2 -> rate 4q.
  auto p1 = eigenpair_weighted(kBm, 1.0, [](double) { return 1.0; });
  auto ref = eigenpair(kBm, 1.0);
  CHECK(p1.wronskian() == doctest::Approx(ref.wronskian()));
  CHECK(p1.psi_plus(0.7) == doctest::Approx(ref.psi_plus(0.7)));

  auto p4 = eigenpair_weighted(kBm, 1.0, [](double) { return 2.0; });
  auto ref4 = eigenpair(kBm, 4.0);
  CHECK(p4.psi_plus(-0.4) == doctest::Approx(ref4.psi_plus(-0.4)).epsilon(1e-12));
  CHECK(p4.psi_minus(1.1) == doctest::Approx(ref4.psi_minus(1.1)).epsilon(1e-12));
}

TEST_CASE("weighted eigenpair with a state-dependent weight keeps the Wronskian") {
  DiffusionSpec bm = kBm;
  bm.window = {-10.0, 10.0};
  auto p = eigenpair_weighted(bm, 1.0, [](double z) { return std::sqrt(1.0 + z * z); });
  CHECK(p.wronskian_residual() < 1e-6);
  CHECK(p.psi_plus(0.5) > 0);
  CHECK(p.psi_minus(0.5) > 0);
}

TEST_CASE("W functions: Brownian closed forms") {
  auto sf = scale(kBm);
  WFunctions w(std::make_shared<EigenPair>(eigenpair(kBm, 1.0)), sf);
  const double gamma = 1.5, delta = 0.5;

  CHECK(w.W(1.0, 1.0) == doctest::Approx(0.0));
  // W(1,0) = 2 e^{-0.5} sinh(1.5)/1.5
  CHECK(w.W(1.0, 0.0) ==
        doctest::Approx(2.0 * std::exp(-0.5) * std::sinh(1.5) / 1.5).epsilon(1e-12));
  CHECK(w.W(1.0, 0.0) == doctest::Approx(1.7219643).epsilon(1e-7));
  CHECK(w.W(0.0, 1.0) == doctest::Approx(-w.W(1.0, 0.0)));

  for (auto [x, y] : {std::pair{1.0, 0.0}, {0.4, -0.6}, {3.0, 2.9}, {5.0, -2.0}}) {
    const double expected = gamma / std::tanh(gamma * (x - y)) - delta;
    CHECK(w.ratio_W1_W(x, y) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(w.W(x, y) ==
          doctest::Approx(2.0 * std::exp(-delta * (x + y)) * std::sinh(gamma * (x - y)) / gamma)
              .epsilon(1e-12));
    CHECK(w.W1(x, y) == doctest::Approx(w.W(x, y) * expected).epsilon(1e-12));
  }
}

TEST_CASE("W2 matches central differences of W1 in y") {
  auto sf = scale(kBm);
  WFunctions w(std::make_shared<EigenPair>(eigenpair(kBm, 1.3)), sf);
  const double step = 1e-5;
  for (auto [x, y] : {std::pair{1.0, 0.2}, {-0.5, -1.4}, {2.5, 2.0}, {0.0, 1.0}}) {
    const double num = (w.W1(x, y + step) - w.W1(x, y - step)) / (2.0 * step);
    CHECK(w.W2(x, y) == doctest::Approx(num).epsilon(1e-5));
  }
}

TEST_CASE("W(z,z)=0, W1(z,z)=s'(z) for the numeric backend too") {
  auto sf = scale(kBm);
  auto num = EigenPair::numeric(kBm, 1.0, [](double) { return 1.0; }, {-12.0, 12.0});
  WFunctions w(std::make_shared<EigenPair>(num), sf);
  for (double z : {-1.0, 0.0, 0.7, 2.0}) {
    CHECK(w.W(z, z) == doctest::Approx(0.0));
    CHECK(w.W1(z, z) == doctest::Approx(sf.s_prime(z)).epsilon(1e-6));
  }
}

TEST_CASE("log-space evaluation survives arguments far past double overflow") {
  auto sf = scale(kBm);
  WFunctions w(std::make_shared<EigenPair>(eigenpair(kBm, 1.0)), sf);
  // phi+(800) = e^{800} would overflow; ratios stay finite.
  const double r = w.ratio_W1_W(800.0, 799.0);
  CHECK(std::isfinite(r));
  CHECK(r == doctest::Approx(1.5 / std::tanh(1.5) - 0.5).epsilon(1e-12));
  CHECK(std::isfinite(w.log_W(800.0, 0.0)));
}
