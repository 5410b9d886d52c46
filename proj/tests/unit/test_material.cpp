#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fhd/material.hpp"

using namespace fhd;

TEST_CASE("langevin") {
  CHECK(langevin(0.0) == 0.0);
  const double e2 = std::exp(2.0);
  CHECK(langevin(1.0) == doctest::Approx((e2 + 1.0) / (e2 - 1.0) - 1.0).epsilon(1e-15));
  CHECK(langevin(1.0) == doctest::Approx(0.31303529).epsilon(1e-8));
  const double y = 1e-8;
  CHECK(langevin(y) == doctest::Approx(y / 3.0 - y * y * y / 45.0).epsilon(1e-14));
  CHECK(langevin_over_y(0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(langevin(1e4) == doctest::Approx(1.0 - 1e-4).epsilon(1e-14));
}

TEST_CASE("langevin is smooth across the series cutoff") {
  for (double y : {0.2, 0.24, 0.249999, 0.25, 0.250001, 0.3}) {
    const double direct = 1.0 / std::tanh(y) - 1.0 / y;
    CHECK(langevin(y) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("alpha limits and values") {
  const MaterialParams p;
  CHECK(alpha(0.0, p) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(alpha(1.0, p) == doctest::Approx(1.0 + langevin(1.0)).epsilon(1e-15));
  CHECK(alpha(1.0, p) == doctest::Approx(1.31303529).epsilon(1e-8));
  const double big = alpha(1e6, p);
  CHECK(big > 1.0);
  CHECK(big - 1.0 == doctest::Approx(1e-6).epsilon(1e-6));
  CHECK(alpha_upper_bound(p) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("beta") {
  const MaterialParams p;
  CHECK(beta(0.0, p) == doctest::Approx(0.0));
  CHECK(beta(1.0, p) == doctest::Approx(std::log(std::sinh(1.0))).epsilon(1e-12));
  CHECK(beta(1.0, p) == doctest::Approx(0.16143936).epsilon(1e-7));
  const double b100 = beta(100.0, p);
  CHECK(std::isfinite(b100));
  CHECK(b100 == doctest::Approx(100.0 - std::log(2.0) - std::log(100.0)).epsilon(1e-12));
  CHECK(beta_prime(1.0, p) == doctest::Approx(langevin(1.0)));
  CHECK(log_sinhc(1e-10) == doctest::Approx(0.0));
  CHECK(std::isfinite(log_sinhc(1e5)));
}

TEST_CASE("magnetization") {
  const MaterialParams p;
  const Vec2 zero = magnetization(Vec2(0, 0), p);
  CHECK(zero.norm() == 0.0);
  const Vec2 m = magnetization(Vec2(1, 0), p);
  CHECK(m.x() == doctest::Approx(0.31303529).epsilon(1e-8));
  CHECK(m.y() == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 200; ++k) {
    const Vec2 h(u(rng), u(rng));
    const Vec2 mh = magnetization(h, p);
    CHECK(mh.norm() == doctest::Approx(p.Ms * langevin(p.gamma * h.norm())).epsilon(1e-13));
    CHECK(mh.norm() < p.Ms);
    CHECK(mh.dot(h) >= 0.0);
  }
}

TEST_CASE("non-default parameters") {
  MaterialParams p;
  p.Ms = 2.0;
  p.gamma = 3.0;
  CHECK(alpha(0.0, p) == doctest::Approx(3.0));
  CHECK(alpha(0.5, p) == doctest::Approx(1.0 + 2.0 / 0.5 * langevin(1.5)));
  CHECK(beta_prime(0.5, p) == doctest::Approx(2.0 * langevin(1.5)));
  const MaterialParams q = MaterialParams::from_susceptibility(1.0, 2.0, 3.0, 1.0, 1.0);
  CHECK(q.gamma == doctest::Approx(4.5));
  CHECK(q.chi0() == doctest::Approx(3.0));
}

TEST_CASE("parameter validation") {
  MaterialParams p;
  CHECK_NOTHROW(p.validate());
  p.eta = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.eta = 1.0;
  p.Ms = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("alpha derivative estimate is negative") {
  const MaterialParams p;
  for (double x : {0.1, 1.0, 10.0}) CHECK(alpha_prime_fd(x, p) < 0.0);
}
