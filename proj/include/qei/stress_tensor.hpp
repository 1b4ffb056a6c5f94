#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "qei/minsol.hpp"
#include "qei/numerics.hpp"
#include "qei/smodel.hpp"

namespace qei {

struct LightlikeError : std::domain_error {
  explicit LightlikeError(const std::string& what) : std::domain_error(what) {}
};

struct NormalizationError : std::runtime_error {
  explicit NormalizationError(const std::string& what)
      : std::runtime_error(what) {}
};

struct SymmetryViolationError : std::invalid_argument {
  explicit SymmetryViolationError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Rational function of u = ch zeta with real coefficients (ascending order).
// Channels entering the normalization point must satisfy q(-1) = 1.
struct RationalPrefactor {
  std::vector<double> numerator = {1.0};
  std::vector<double> denominator = {1.0};

  Complex operator()(Complex u) const;
  // Degree as a rational function: deg numerator - deg denominator.
  int degree() const;
  double leading_coefficient() const;
  bool is_identically_one() const;
  bool is_identically_zero() const;
  void validate(bool require_normalized = true) const;
};

// Energy density datum: S-model, per-channel rational prefactors, declared
// first-order poles inside the open strip (0, pi), and the parity flag.
// Channel keys: "q" for scalar-type, vector and constant models;
// "q1_s", "q2_s", "q1_as", "q2_as" for the two-species model, where the
// antisymmetric channels default to zero and must vanish when
// parity_covariant is set.
struct StressTensorSpec {
  SFunctionSpec model;
  std::map<std::string, RationalPrefactor> q_factors;
  std::vector<Complex> poles;
  bool parity_covariant = true;

  RationalPrefactor channel(const std::string& key) const;
  void validate() const;
};

// Canonical choice: every prefactor trivial, the cubic-pole preset declares
// its bound-state pole at 2 pi i / 3, parity covariance everywhere.
StressTensorSpec canonical_stress_tensor(const SFunctionSpec& model);

// Matrix on K defined by (u, hat(A) v) = (u (x) Jv, A):
// hat(A)[a][b] = conj_sign[b] * A[pair_index(a, bar[b])].
Eigen::MatrixXcd hat_matrix(const LittleSpace& space,
                            const Eigen::VectorXcd& pair_vector);

// The rapidity-difference part F of the two-particle form factor together
// with the little-space data needed to contract it.
struct FormFactorF {
  LittleSpace space;
  std::function<Eigen::VectorXcd(Complex)> value;  // pair basis a*dim + b

  Eigen::VectorXcd operator()(Complex zeta) const { return value(zeta); }
  Eigen::MatrixXcd hat(Complex zeta) const;
};

// Assembles F for the given spec and verifies F(i pi) = I_(x)2 to 1e-9.
FormFactorF build_F(const StressTensorSpec& spec);

// Transverse projector (-p^mu p^nu + g^munu p^2)/p^2; requires p^2 != 0.
Eigen::Matrix2cd L_tensor(const Eigen::Vector2cd& p);

// Crossed-kinematics limit of the transverse tensor times masses/2pi:
// (m^2/2pi) [[ch^2, sh ch], [sh ch, sh^2]](zeta).  Off-diagonal sign fixed
// by the continuity contraction; see tests.
Eigen::Matrix2cd G_free(double mass, Complex zeta);

// Spacetime tensor of pair-basis vectors.
struct SpacetimeTensor {
  std::array<std::array<Eigen::VectorXcd, 2>, 2> comp;
  const Eigen::VectorXcd& operator()(int mu, int nu) const {
    return comp[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
  }
};

// Crossed kinematics (theta, eta + i pi): per mass sector
// G_free^munu(m_a; (theta+eta)/2) e^{i(p(theta)-p(eta)).x} F(eta-theta+ipi).
SpacetimeTensor f2_tensor_crossed(const FormFactorF& f, double theta,
                                  double eta, std::array<double, 2> x = {0, 0});

// General kinematics via the transverse projector at the total
// energy-momentum p(zeta1; m_a) + p(zeta2; m_b) per component.
SpacetimeTensor f2_tensor_general(const FormFactorF& f, Complex zeta1,
                                  Complex zeta2,
                                  std::array<double, 2> x = {0, 0});

// Single spacetime component of the crossed-kinematics tensor.
Eigen::VectorXcd F2_component(const FormFactorF& f, int mu, int nu,
                              double theta, double eta,
                              std::array<double, 2> x = {0, 0});

// Residuals of the defining properties, each relative to the sampled scale.
// Keys: t1_poles, t2_regularity, t3_s_symmetry, t4_s_periodicity,
// t5_hermiticity, t6_index_symmetry, t7_covariance, t8_cpt, t9_continuity,
// t10_normalization, t11_invariance, t12_parity.
struct TPropertyReport {
  std::map<std::string, double> residual;
  bool parity_covariant_declared = true;
  bool parity_flagged = false;  // t12 residual above threshold

  // Largest residual; t12 is excluded when parity covariance was not
  // declared (its violation is then expected, not an error).
  double worst() const;
};

TPropertyReport check_T_properties(const StressTensorSpec& spec,
                                   int n_samples = 20, unsigned seed = 1);

// One-particle tensor e^{ip(zeta;m).x} [[sh^2, sh ch],[sh ch, ch^2]](zeta)
// applied to f1_at_zero, which must satisfy J f1 = f1 and V(g) f1 = f1.
struct OneParticleTensor {
  std::array<std::array<Eigen::VectorXcd, 2>, 2> comp;
  const Eigen::VectorXcd& operator()(int mu, int nu) const {
    return comp[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
  }
};

OneParticleTensor F1_form(const LittleSpace& space,
                          const Eigen::VectorXcd& f1_at_zero, Complex zeta,
                          std::array<double, 2> x = {0, 0});

}  // namespace qei
