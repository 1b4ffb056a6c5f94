#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "qei/numerics.hpp"
#include "qei/smodel.hpp"

using qei::Complex;
const Complex kI(0.0, 1.0);

namespace {

Eigen::MatrixXcd flip_matrix(int d) {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) f(b * d + a, a * d + b) = 1.0;
  return f;
}

}  // namespace

TEST_CASE("scalar factor endpoint and inversion properties") {
  CHECK(std::abs(qei::eval_scalar_factor(Complex(0, 0), 0.5) - Complex(-1, 0)) <
        1e-15);
  CHECK(std::abs(qei::eval_scalar_factor(Complex(25, 0), 0.3) - Complex(1, 0)) <
        1e-9);
  CHECK(std::abs(qei::eval_scalar_factor(Complex(0, qei::kPi / 2), 0.5)) <
        1e-15);
  for (double b : {0.2, 0.77}) {
    for (double th : {0.3, 1.9, -2.4}) {
      Complex z(th, 0.1);
      Complex p = qei::eval_scalar_factor(z, b) * qei::eval_scalar_factor(-z, b);
      CHECK(std::abs(p - Complex(1, 0)) < 1e-13);
    }
  }
  CHECK_THROWS_AS(qei::eval_scalar_factor(Complex(0.0, -qei::kPi * 0.3), 0.3),
                  qei::PoleError);
}

TEST_CASE("conjugate-pair product equals +1 at zero") {
  auto spec = qei::make_sinh_gordon_model(Complex(0.45, 0.8));
  CHECK(std::abs(qei::eval_s_scalar(spec, Complex(0, 0)) - Complex(1, 0)) <
        1e-14);
  auto single = qei::make_sinh_gordon_model(Complex(0.45, 0.0));
  CHECK(std::abs(qei::eval_s_scalar(single, Complex(0, 0)) - Complex(-1, 0)) <
        1e-14);
}

TEST_CASE("vector model at zero rapidity is minus the identity") {
  auto spec = qei::make_nls_model(3);
  Eigen::MatrixXcd s = qei::eval_s(spec, Complex(0, 0));
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(9, 9);
  CHECK((s + eye).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("axiom residuals: vector model") {
  for (int n : {3, 4}) {
    auto rep = qei::check_axioms(qei::make_nls_model(n), 20, 7);
    CHECK(rep.worst() < 1e-8);
    CHECK(rep.strip_max_norm < 50.0);
  }
}

TEST_CASE("axiom residuals: constant models are exact") {
  auto repf = qei::check_axioms(qei::make_federbush_model(1.0, 1.7, 0.23), 10, 3);
  CHECK(repf.worst() < 1e-14);
  for (unsigned seed : {11u, 12u, 13u, 14u, 15u}) {
    qei::SFunctionSpec spec{qei::random_constant_diagonal(4, seed)};
    spec.validate();
    auto rep = qei::check_axioms(spec, 10, seed);
    CHECK(rep.worst() < 1e-13);
  }
}

TEST_CASE("axiom residuals: scalar products") {
  auto rep1 = qei::check_axioms(
      qei::make_scalar_product_model(-1, {Complex(0.3, 0.0), Complex(0.25, 0.6),
                                          Complex(0.25, -0.6)}),
      15, 5);
  CHECK(rep1.worst() < 1e-10);
  auto rep2 = qei::check_axioms(
      qei::make_gbd_model({Complex(0.4, 0.0)}), 15, 5);
  CHECK(rep2.worst() < 1e-10);
}

TEST_CASE("non-conjugate-closed parameters are rejected and break an axiom") {
  auto bad = qei::make_scalar_product_model(1, {Complex(0.3, 0.2)});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  auto rep = qei::check_axioms(bad, 15, 2);
  CHECK(rep.hermitian_analyticity > 1e-3);
}

TEST_CASE("real-line unitarity for every preset") {
  std::vector<qei::SFunctionSpec> specs = {
      qei::make_free_model(1),
      qei::make_ising_model(),
      qei::make_sinh_gordon_model(Complex(0.35, 0.0)),
      qei::make_gbd_model({Complex(0.5, 0.0), Complex(0.3, 0.45),
                           Complex(0.3, -0.45)}),
      qei::make_federbush_model(1.0, 2.0, 0.4),
      qei::make_nls_model(5),
  };
  for (const auto& spec : specs) {
    for (double th : {0.0, 0.8, -1.3, 2.9}) {
      Eigen::MatrixXcd s = qei::eval_s(spec, Complex(th, 0.0));
      Eigen::MatrixXcd r =
          s.adjoint() * s - Eigen::MatrixXcd::Identity(s.rows(), s.cols());
      CHECK(r.cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("scalar product inversion on a wide strip") {
  auto spec = qei::make_scalar_product_model(
      1, {Complex(0.4, 0.0), Complex(0.7, 0.0)});
  for (double re : {-3.0, -0.8, 0.5, 2.2}) {
    for (double im : {0.0, 0.35, -0.35, 1.5, -1.5}) {
      Complex z(re, im);
      Complex p = qei::eval_s_scalar(spec, z) * qei::eval_s_scalar(spec, -z);
      CHECK(std::abs(p - Complex(1, 0)) < 1e-10);
    }
  }
}

TEST_CASE("vector-model eigenvalues satisfy inversion and reality relations") {
  qei::NlsParams p{4, 1.0};
  for (double th : {0.4, 1.7, 3.1}) {
    auto e = qei::eval_nls_eigenvalues(p, Complex(th, 0.0));
    auto em = qei::eval_nls_eigenvalues(p, Complex(-th, 0.0));
    CHECK(std::abs(e.sym * em.sym - 1.0) < 1e-12);
    CHECK(std::abs(e.asym * em.asym - 1.0) < 1e-12);
    CHECK(std::abs(e.trace * em.trace - 1.0) < 1e-12);
    Complex zc(th, 0.3);
    auto ec = qei::eval_nls_eigenvalues(p, std::conj(zc));
    auto ez = qei::eval_nls_eigenvalues(p, zc);
    CHECK(std::abs(std::conj(ec.sym) * ez.sym - 1.0) < 1e-12);
    CHECK(std::abs(std::conj(ec.trace) * ez.trace - 1.0) < 1e-12);
  }
}

TEST_CASE("spectral decomposition reconstructs the vector model") {
  auto spec = qei::make_nls_model(3);
  auto channels = qei::eigen_decompose(spec);
  REQUIRE(channels.size() == 3);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(9, 9);
  for (const auto& ch : channels) sum += ch.projector;
  CHECK((sum - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-12);
  for (const auto& ci : channels)
    for (const auto& cj : channels) {
      Eigen::MatrixXcd prod = ci.projector * cj.projector;
      Eigen::MatrixXcd want = (&ci == &cj) ? ci.projector
                                           : Eigen::MatrixXcd::Zero(9, 9);
      CHECK((prod - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  for (Complex z : {Complex(1.0, 0.0), Complex(0.3, 0.2), Complex(-2.0, 0.0)}) {
    Eigen::MatrixXcd rec = Eigen::MatrixXcd::Zero(9, 9);
    for (const auto& ch : channels) rec += ch.value(z) * ch.projector;
    CHECK((rec - qei::eval_s(spec, z)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("trace channel drives the invariant pair vector") {
  auto spec = qei::make_nls_model(4);
  qei::LittleSpace ls = spec.space();
  Eigen::VectorXcd ip = ls.identity_pair();
  for (Complex z : {Complex(0.7, 0.0), Complex(1.4, 0.1)}) {
    Eigen::VectorXcd lhs = qei::eval_s(spec, z) * ip;
    Complex s0 = qei::eval_nls_eigenvalues(qei::NlsParams{4, 1.0}, z).trace;
    CHECK((lhs - s0 * ip).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("crossed-pair structure of the two-species model") {
  auto spec = qei::make_federbush_model(1.0, 1.5, 0.31);
  qei::LittleSpace ls = spec.space();
  Eigen::VectorXcd ip = ls.identity_pair();
  Eigen::MatrixXcd s = qei::eval_s(spec, Complex(0.9, 0.0));
  CHECK((s * ip + ip).cwiseAbs().maxCoeff() < 1e-14);

  auto channels = qei::eigen_decompose(spec);
  REQUIRE(channels.size() == 2);
  CHECK((channels[0].projector * ip).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((channels[1].projector * ip - ip).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pair-swap commutator annihilates the invariant vector") {
  std::vector<qei::SFunctionSpec> specs = {
      qei::make_federbush_model(1.0, 1.9, 0.17)};
  for (unsigned seed : {21u, 22u, 23u, 24u, 25u})
    specs.push_back({qei::random_constant_diagonal(3 + (seed % 3), seed)});
  for (const auto& spec : specs) {
    qei::LittleSpace ls = spec.space();
    Eigen::MatrixXcd s = qei::eval_s(spec, Complex(0.4, 0.0));
    Eigen::MatrixXcd f = flip_matrix(ls.dim);
    Eigen::VectorXcd ip = ls.identity_pair();
    CHECK(((s * f - f * s) * ip).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("random constant models satisfy the diagonal constraints") {
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u, 6u}) {
    auto params = qei::random_constant_diagonal(4, seed);
    qei::SFunctionSpec spec{params};
    spec.validate();
    Eigen::MatrixXcd s = qei::eval_s(spec, Complex(0.0, 0.0));
    Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(16, 16);
    CHECK((s.adjoint() - s).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((s * s - eye).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("little space validation catches structural errors") {
  qei::LittleSpace ls;
  ls.dim = 2;
  ls.masses = {1.0, 2.0};
  ls.bar = {1, 0};
  ls.conj_sign = {1.0, 1.0};
  CHECK_THROWS_AS(ls.validate(), std::invalid_argument);  // mass not J-invariant
  ls.masses = {1.0, 1.0};
  CHECK_NOTHROW(ls.validate());
  ls.bar = {1, 1};
  CHECK_THROWS_AS(ls.validate(), std::invalid_argument);  // not an involution
  ls.bar = {1, 0};
  ls.conj_sign = {1.0, -1.0};
  CHECK_THROWS_AS(ls.validate(), std::invalid_argument);  // sign not orbit-constant

  qei::LittleSpace ok;
  ok.dim = 2;
  ok.masses = {1.0, 1.0};
  ok.bar = {1, 0};
  ok.conj_sign = {-1.0, -1.0};
  ok.validate();
  Eigen::VectorXcd v(2);
  v << Complex(0.3, 0.7), Complex(-1.1, 0.2);
  CHECK((ok.apply_j(ok.apply_j(v)) - v).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("spectral decomposition rejects rapidity-dependent scalars") {
  CHECK_THROWS_AS(
      qei::eigen_decompose(qei::make_sinh_gordon_model(Complex(0.4, 0.0))),
      std::invalid_argument);
}

TEST_CASE("model validation errors") {
  CHECK_THROWS_AS(qei::make_nls_model(2).validate(), std::invalid_argument);
  CHECK_THROWS_AS(
      qei::make_scalar_product_model(1, {Complex(1.2, 0.0)}).validate(),
      std::invalid_argument);
  CHECK_THROWS_AS(qei::make_gbd_model({}).validate(), std::invalid_argument);
  CHECK_NOTHROW(qei::make_gbd_model({Complex(0.3, 0.7), Complex(0.3, -0.7)})
                    .validate());
  CHECK_THROWS_AS(qei::make_federbush_model(-1.0, 1.0, 0.2).validate(),
                  std::invalid_argument);
}
