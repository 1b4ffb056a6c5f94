#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qei/minsol.hpp"
#include "qei/smodel.hpp"

using qei::Complex;
const Complex kI(0.0, 1.0);

namespace {

Complex sigma_ref(Complex z) { return -kI * std::sinh(0.5 * z); }

std::vector<double> dense_grid() {
  std::vector<double> g;
  for (double th = -5.0; th <= 5.0 + 1e-12; th += 0.25)
    if (std::abs(th) > 1e-12) g.push_back(th);
  return g;
}

qei::MinimalSolution single_factor(double b) {
  return qei::assemble_minimal(
      qei::make_scalar_product_model(1, {Complex(b, 0.0)}));
}

}  // namespace

TEST_CASE("constant eigenvalue solutions match their closed forms") {
  auto plus = qei::assemble_constant_minimal(1);
  auto minus = qei::assemble_constant_minimal(-1);
  for (Complex z : {Complex(0.4, 0.0), Complex(-2.0, 1.5), Complex(1.0, -3.0),
                    Complex(0.3, 8.0)}) {
    CHECK(std::abs(qei::eval_minimal(plus, z) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(qei::eval_minimal(minus, z) - sigma_ref(z)) < 1e-12);
  }
  CHECK_THROWS_AS(qei::assemble_constant_minimal(2), std::invalid_argument);
}

TEST_CASE("defining integral agrees with a fixed-step Simpson oracle") {
  auto m = single_factor(0.5);
  Complex zeta(0.8, 1.1);
  Complex a = (kI * qei::kPi - zeta) / (2.0 * qei::kPi);
  auto integrand = [&](double t) -> Complex {
    if (t == 0.0) return m.f.f0 * a * a;
    Complex s = std::sin(a * t);
    return m.f(t) * s * s / (t * std::sinh(t));
  };
  double re = oracle::simpson([&](double t) { return integrand(t).real(); },
                              0.0, 60.0, 200000);
  double im = oracle::simpson([&](double t) { return integrand(t).imag(); },
                              0.0, 60.0, 200000);
  Complex oracle_value = std::exp(2.0 * Complex(re, im));
  Complex got = qei::eval_F_f(m.f, zeta);
  CHECK(std::abs(got - oracle_value) < 1e-10);
}

TEST_CASE("companion factor reproduces the scattering factor up to sign") {
  auto spec = qei::make_sinh_gordon_model(Complex(0.5, 0.0));
  auto m = qei::assemble_minimal(spec);
  CHECK(std::abs(qei::eval_S_f(m.f, Complex(0, 0)) - Complex(1, 0)) < 1e-12);
  for (double th : {0.5, 2.0, -3.0}) {
    Complex sf = qei::eval_S_f(m.f, Complex(th, 0.0));
    Complex s = qei::eval_s_scalar(spec, Complex(th, 0.0));
    CHECK(std::abs(sf + s) < 1e-10);
  }
  auto zero = qei::charfct_zero();
  CHECK(std::abs(qei::eval_S_f(zero, Complex(1.3, 0.0)) - Complex(1, 0)) ==
        0.0);
}

TEST_CASE("vector-model companion factor matches the trace eigenvalue") {
  auto m = qei::assemble_minimal(qei::make_nls_model(4));
  for (double th : {0.8, 2.5}) {
    Complex sf = qei::eval_S_f(m.f, Complex(th, 0.0));
    Complex s0 = m.s_model(Complex(th, 0.0));
    CHECK(std::abs(sf + s0) < 1e-9);
  }
}

TEST_CASE("normalization at i pi for every assembled model") {
  std::vector<qei::MinimalSolution> sols = {
      single_factor(0.35),
      qei::assemble_minimal(qei::make_scalar_product_model(
          1, {Complex(0.25, 0.6), Complex(0.25, -0.6)})),
      qei::assemble_minimal(
          qei::make_scalar_product_model(-1, {Complex(0.5, 0.0)})),
      qei::assemble_minimal(qei::make_gbd_model({Complex(0.5, 0.0)})),
      qei::assemble_minimal(qei::make_nls_model(5)),
  };
  for (const auto& m : sols) {
    CHECK(std::abs(qei::eval_minimal(m, Complex(0.0, qei::kPi)) -
                   Complex(1, 0)) < 1e-9);
  }
}

TEST_CASE("watson residuals on the dense grid") {
  auto grid = dense_grid();
  for (const auto& m :
       {single_factor(0.5),
        qei::assemble_minimal(qei::make_scalar_product_model(
            -1, {Complex(0.3, 0.0), Complex(0.7, 0.0)})),
        qei::assemble_minimal(qei::make_gbd_model({Complex(0.4, 0.0)}))}) {
    auto rep = qei::watson_residual(m, grid);
    CHECK(rep.symmetry_residual < 1e-8);
    CHECK(rep.reflection_residual < 1e-8);
    CHECK(rep.normalization_residual < 1e-9);
  }
  std::vector<double> coarse;
  for (double th = -4.0; th <= 4.0 + 1e-12; th += 0.5)
    if (std::abs(th) > 1e-12) coarse.push_back(th);
  auto repv = qei::watson_residual(qei::assemble_minimal(qei::make_nls_model(4)),
                                  coarse);
  CHECK(repv.symmetry_residual < 1e-8);
  CHECK(repv.reflection_residual < 1e-8);
}

TEST_CASE("zero structure at the origin follows the sign of S(0)") {
  auto with_zero = single_factor(0.35);  // S(0) = -1
  CHECK(std::abs(qei::eval_minimal(with_zero, Complex(0, 0))) < 1e-14);
  auto no_zero = qei::assemble_minimal(
      qei::make_scalar_product_model(-1, {Complex(0.5, 0.0)}));  // S(0) = +1
  Complex v = qei::eval_minimal(no_zero, Complex(0, 0));
  CHECK(v.real() > 0.1);
  CHECK(std::abs(v.imag()) < 1e-10);
}

TEST_CASE("two-factor product law") {
  auto pair = qei::assemble_minimal(qei::make_scalar_product_model(
      1, {Complex(0.3, 0.0), Complex(0.7, 0.0)}));
  auto one = single_factor(0.3);
  auto two = single_factor(0.7);
  for (Complex z : {Complex(0.7, 0.0), Complex(2.0, 0.5), Complex(1.0, 1.57)}) {
    Complex lhs = qei::eval_minimal(pair, z);
    Complex rhs = qei::eval_minimal(one, z) * qei::eval_minimal(two, z) /
                  (sigma_ref(z) * sigma_ref(z));
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(lhs));
  }
}

TEST_CASE("conjugation symmetry on and off the native strip") {
  auto m = single_factor(0.4);
  for (Complex z : {Complex(1.2, 0.8), Complex(0.7, -5.0), Complex(-0.4, 7.0),
                    Complex(2.0, 2.9)}) {
    Complex lhs = qei::eval_minimal(m, z);
    Complex rhs = std::conj(qei::eval_minimal(m, -std::conj(z)));
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
  }
  Complex deep(0.7, -5.0);
  Complex lhs = qei::eval_minimal(m, deep);
  Complex rhs = m.s_model(deep) *
                qei::eval_minimal(m, deep + Complex(0.0, 2.0 * qei::kPi));
  CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
}

TEST_CASE("strip guards") {
  auto m = single_factor(0.5);  // decay rate 1/2, margin 0.45 pi
  CHECK_THROWS_AS(qei::eval_F_f(m.f, Complex(0.3, -qei::kPi)), qei::StripError);
  CHECK_THROWS_AS(qei::eval_S_f(m.f, Complex(0.3, 1.5)), qei::StripError);
}

TEST_CASE("factor limit constant against direct evaluation") {
  auto m = single_factor(0.5);
  double a = qei::asymptotic_constant(m);
  CHECK(a > 0.0);
  double direct = std::abs(qei::eval_minimal(m, Complex(30.0, qei::kPi)));
  CHECK(std::abs(direct - a) < 1e-8 * a);

  // Conjugate pair: band constant 4 * product of per-factor limits.
  auto pair = qei::assemble_minimal(qei::make_scalar_product_model(
      1, {Complex(0.3, 0.5), Complex(0.3, -0.5)}));
  double ap = qei::asymptotic_constant(pair);
  CHECK(ap > 0.0);
  double band = std::abs(qei::eval_minimal(pair, Complex(30.0, qei::kPi))) *
                std::exp(30.0) / 4.0;
  CHECK(std::abs(band - ap) < 1e-6 * ap);

  CHECK_THROWS_AS(
      qei::asymptotic_constant(qei::assemble_minimal(qei::make_nls_model(4))),
      qei::ConvergenceError);
}

TEST_CASE("cubic-pole preset: bounded for one factor pair and limit identity") {
  auto m = qei::assemble_minimal(qei::make_gbd_model({Complex(0.5, 0.0)}));
  auto gc = qei::classify_growth(m);
  CHECK(gc.exponent == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gc.log_power == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gc.c_high / gc.c_low < 1.5);
  CHECK(gc.band_stable);
  CHECK(gc.band_drift < 0.05);

  double a = qei::asymptotic_constant(m);
  double f16 = qei::asymptotic_constant(single_factor(1.0 / 6.0));
  double f12 = qei::asymptotic_constant(single_factor(0.5));
  double f23 = qei::asymptotic_constant(single_factor(2.0 / 3.0));
  CHECK(std::abs(a - f16 * f12 / f23) < 1e-9 * a);
  double direct = std::abs(qei::eval_minimal(m, Complex(30.0, qei::kPi)));
  CHECK(std::abs(direct - a) < 1e-6 * a);
}

TEST_CASE("growth classification of the vector-model channel") {
  auto m = qei::assemble_minimal(qei::make_nls_model(4));  // nu = 1
  auto gc = qei::classify_growth(m);
  CHECK(gc.exponent == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gc.log_power == doctest::Approx(-1.5).epsilon(1e-9));
  CHECK(gc.c_high / gc.c_low < 1.5);
  CHECK(gc.band_stable);
  CHECK(gc.band_drift < 0.05);
}

TEST_CASE("growth classification respects downstream contributions") {
  auto m = single_factor(0.5);
  auto gc = qei::classify_growth(m, 2.0, 1.0);
  CHECK(gc.exponent == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(gc.log_power == doctest::Approx(1.0).epsilon(1e-12));
  auto base = qei::classify_growth(m);
  CHECK(base.exponent == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(base.c_high / base.c_low < 1.5);
}

TEST_CASE("assembly rejects matrix models without a scalar channel") {
  CHECK_THROWS_AS(
      qei::assemble_minimal(qei::make_federbush_model(1.0, 2.0, 0.2)),
      std::invalid_argument);
}
