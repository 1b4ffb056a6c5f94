#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qei/charfct.hpp"
#include "qei/numerics.hpp"

using qei::Complex;

namespace {

// Defining ratio for a single factor, usable with complex parameter.
Complex factor_profile(Complex b, double t) {
  Complex num = 4.0 * std::sinh(0.5 * b * t) * std::sinh(0.5 * (1.0 - b) * t) *
                    std::sinh(0.5 * t) -
                std::sinh(t);
  return num / std::sinh(t);
}

double sg_log_deriv(double b, double theta) {
  // Overflow-safe rewrite of -2 s ch / (sh^2 + s^2).
  double s = std::sin(qei::kPi * b);
  double ch = std::cosh(theta);
  double th = std::tanh(theta);
  return -2.0 * s / (ch * th * th + s * s / ch);
}

std::vector<double> test_grid() {
  std::vector<double> g;
  for (double t = 0.01; t <= 10.0; t += 0.25) g.push_back(t);
  return g;
}

}  // namespace

TEST_CASE("single-factor profile matches its defining ratio") {
  for (double b : {0.1, 0.25, 0.5, 0.9}) {
    qei::CharacteristicFunction f = qei::charfct_sinh_gordon(b);
    for (double t = 0.05; t < 12.0; t += 0.35) {
      Complex ref = factor_profile(Complex(b, 0.0), t);
      CHECK(std::abs(ref.imag()) < 1e-14);
      CHECK(f(t) == doctest::Approx(ref.real()).epsilon(1e-12));
    }
  }
}

TEST_CASE("conjugate-pair profile is the real sum of both factors") {
  Complex b(0.3, 0.4);
  qei::CharacteristicFunction f = qei::charfct_sinh_gordon_pair(b);
  for (double t = 0.05; t < 10.0; t += 0.3) {
    Complex ref = factor_profile(b, t) + factor_profile(std::conj(b), t);
    CHECK(std::abs(ref.imag()) < 1e-12);
    CHECK(f(t) == doctest::Approx(ref.real()).epsilon(1e-11));
  }
  CHECK(f.f0 == doctest::Approx(-2.0));
  CHECK(f.f1 == doctest::Approx(0.0));
}

TEST_CASE("gamma-product profiles reproduce closed fractions") {
  // The three vector-model channels collapse to elementary fractions.
  for (double nu : {2.0, 1.0, 1.0 / 3.0}) {
    auto fp = qei::charfct_gamma_product(2.0, {0.5, nu / 2}, {1.0, 0.5 + nu / 2});
    auto fm = qei::charfct_gamma_product(2.0, {0.5, 1 + nu / 2}, {1.0, 0.5 + nu / 2});
    auto f0 = qei::charfct_gamma_product(2.0, {1.5, 1 + nu / 2}, {1.0, 0.5 + nu / 2});
    for (double t = 0.01; t <= 25.0; t += 0.37) {
      double ep = std::exp(t);
      CHECK(fp(t) == doctest::Approx(-(1.0 + std::exp((1.0 - nu) * t)) / (ep + 1.0))
                         .epsilon(1e-12));
      CHECK(fm(t) == doctest::Approx((std::exp(-nu * t) - 1.0) / (ep + 1.0))
                         .epsilon(1e-12));
      CHECK(f0(t) == doctest::Approx((std::exp(-t) + std::exp(-nu * t)) / (ep + 1.0))
                         .epsilon(1e-12));
    }
    CHECK(fp.f0 == doctest::Approx(-1.0));
    CHECK(fp.f1 == doctest::Approx(nu / 2));
    CHECK(fm.f0 == doctest::Approx(0.0));
    CHECK(fm.f1 == doctest::Approx(-nu / 2));
    CHECK(f0.f0 == doctest::Approx(1.0));
    CHECK(f0.f1 == doctest::Approx(-(1.0 + nu / 2)));
  }
}

TEST_CASE("germ fields agree with one-sided difference quotients") {
  auto check_germ = [](const qei::CharacteristicFunction& f) {
    double h = 0.01;
    CHECK(f(0.0) == doctest::Approx(f.f0).epsilon(1e-10));
    double d = (-25 * f(0.0) + 48 * f(h) - 36 * f(2 * h) + 16 * f(3 * h) -
                3 * f(4 * h)) /
               (12 * h);
    CHECK(d == doctest::Approx(f.f1).epsilon(1e-6).scale(1.0));
  };
  check_germ(qei::charfct_sinh_gordon(0.3));
  check_germ(qei::charfct_sinh_gordon_pair(Complex(0.4, 0.7)));
  check_germ(qei::charfct_gamma_product(2.0, {1.5, 2.0}, {1.0, 1.5}));
  check_germ(qei::charfct_gamma_product(0.7, {0.4, 2.2, 3.0}, {0.9, 1.1, 2.8}));
}

TEST_CASE("mismatched or invalid gamma-product data is rejected") {
  CHECK_THROWS_AS(qei::charfct_gamma_product(2.0, {0.5}, {1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(qei::charfct_gamma_product(-1.0, {0.5}, {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(qei::charfct_gamma_product(2.0, {-0.5}, {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(qei::charfct_sinh_gordon(1.5), std::invalid_argument);
  auto nil = qei::charfct_gamma_product(2.0, {0.5, 1.0}, {1.0, 0.5});
  for (double t = 0.0; t < 5.0; t += 0.5) CHECK(std::abs(nil(t)) < 1e-15);
}

TEST_CASE("cosine transform matches a fine-grid oracle value") {
  // Independent composite-Simpson evaluation of the transform of
  // r(theta) = -2/cosh(theta) at one point, before trusting the fast path.
  double t = 2.5;
  auto integrand = [t](double th) {
    return -2.0 / std::cosh(th) * std::cos(th * t / qei::kPi);
  };
  double ref = oracle::simpson(integrand, 0.0, 60.0, 600000) / qei::kPi;
  CHECK(ref == doctest::Approx(-1.0 / std::cosh(0.5 * t)).epsilon(1e-10));

  std::vector<double> grid = test_grid();
  grid.push_back(t);  // sampled values are exact at grid nodes
  auto f = qei::charfct_numeric([](double th) { return -2.0 / std::cosh(th); },
                                grid);
  CHECK(f(t) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("numeric transform recovers the closed single-factor profile") {
  auto f = qei::charfct_numeric([](double th) { return sg_log_deriv(0.5, th); },
                                test_grid());
  double worst = 0.0;
  for (double t = 0.01; t <= 10.0; t += 0.25)
    worst = std::max(worst, std::abs(f(t) + 1.0 / std::cosh(0.5 * t)));
  CHECK(worst < 1e-8);
  CHECK(f.f0 == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(f.f1) < 1e-3);
}

TEST_CASE("numeric transform is additive in the log-derivative") {
  auto fa = qei::charfct_sinh_gordon(0.3);
  auto fb = qei::charfct_sinh_gordon(0.7);
  auto f = qei::charfct_numeric(
      [](double th) { return sg_log_deriv(0.3, th) + sg_log_deriv(0.7, th); },
      test_grid());
  for (double t = 0.01; t <= 10.0; t += 0.5)
    CHECK(f(t) == doctest::Approx(fa(t) + fb(t)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("sampled evaluation is even in t") {
  auto f = qei::charfct_numeric([](double th) { return sg_log_deriv(0.4, th); },
                                test_grid());
  for (double t : {0.3, 1.7, 6.2}) CHECK(f(-t) == f(t));
}

TEST_CASE("decay certificates envelope the profiles") {
  std::vector<qei::CharacteristicFunction> fs = {
      qei::charfct_sinh_gordon(0.2),
      qei::charfct_sinh_gordon_pair(Complex(0.5, 1.1)),
      qei::charfct_gamma_product(2.0, {1.5, 2.0}, {1.0, 1.5}),
  };
  for (const auto& f : fs) {
    for (double t = f.decay_from; t <= 40.0; t += 0.7) {
      CHECK(std::abs(f(t)) <= f.decay_amp * std::exp(-f.decay_rate * t) + 1e-300);
    }
  }
}

TEST_CASE("growth data reports stored or fitted germs") {
  auto closed = qei::charfct_sinh_gordon(0.35);
  auto g = qei::growth_data(closed);
  CHECK(g.f0 == closed.f0);
  CHECK(g.f1 == closed.f1);
  CHECK(g.fit_residual == 0.0);

  // Vector-model channel with nu = 2 is exactly exp(-2t): the numeric germ
  // must recover (1, -2).
  auto num = qei::charfct_numeric(
      [](double th) { return 4.0 * qei::kPi / (4.0 * qei::kPi * qei::kPi + th * th); },
      test_grid());
  auto gn = qei::growth_data(num);
  CHECK(gn.f0 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(gn.f1 == doctest::Approx(-2.0).epsilon(1e-4));
  CHECK(gn.fit_residual < 1e-6);

  qei::CharacteristicFunction bad;
  bad.eval = [](double) { return 0.0; };
  bad.closed_form = false;
  bad.fit_residual = 1e-3;
  CHECK_THROWS_AS(qei::growth_data(bad), qei::ConvergenceError);
}
