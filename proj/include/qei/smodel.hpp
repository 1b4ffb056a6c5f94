#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "qei/numerics.hpp"

namespace qei {

enum class SymmetryTag { Trivial, Z2, U1U1, On };

// One-particle little space: per-index masses, the antilinear involution
// J e_a = eps_a e_{bar(a)} (with eps_{bar(a)} = eps_a so J^2 = 1), and the
// internal symmetry group used by the invariance check.
struct LittleSpace {
  int dim = 1;
  std::vector<double> masses = {1.0};
  std::vector<int> bar = {0};
  std::vector<double> conj_sign = {1.0};
  SymmetryTag symmetry = SymmetryTag::Trivial;

  void validate() const;
  Eigen::VectorXcd apply_j(const Eigen::VectorXcd& v) const;
  // Tensor-square basis index (a,b) -> a*dim + b.
  int pair_index(int a, int b) const { return a * dim + b; }
  // The J-invariant pair vector sum_a eps_a e_a (x) e_{bar(a)}.
  Eigen::VectorXcd identity_pair() const;
};

// Product of scalar factors (sh z - i sin pi b)/(sh z + i sin pi b) times a
// constant sign; conjugate-closed parameter list with Re b in (0,1).
struct ScalarFactorList {
  int epsilon = 1;
  std::vector<Complex> b;
  double mass = 1.0;
};

// Bullough-Dodd-type product: the parameter-(-2/3) factor times the pairs
// (b_k/3, (2-b_k)/3); always has a pole at 2 pi i/3 in the physical strip.
struct GbdParams {
  std::vector<Complex> b;
  double mass = 1.0;
};

// Two species of mass m1, m2 with charge-conjugate partners; constant
// off-diagonal phase exp(2 pi i lambda).
struct FederbushParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double lambda = 0.2;
};

// O(n)-invariant vector model, n >= 3.
struct NlsParams {
  int n = 3;
  double mass = 1.0;
};

// Generic constant diagonal-in-pairs model: S(e_a (x) e_b) =
// coeff(b,a) e_b (x) e_a.
struct ConstantMatrixParams {
  LittleSpace space;
  Eigen::MatrixXcd coeff;
};

using SModelVariant = std::variant<ScalarFactorList, GbdParams,
                                   FederbushParams, NlsParams,
                                   ConstantMatrixParams>;

struct SFunctionSpec {
  SModelVariant model;

  LittleSpace space() const;
  std::string name() const;
  void validate() const;  // throws std::invalid_argument with a reason
};

// Single scalar factor; throws PoleError within 1e-9 of a pole.
Complex eval_scalar_factor(Complex zeta, Complex b);

// Scalar models only: the full scalar value (sign times factor product).
Complex eval_s_scalar(const SFunctionSpec& spec, Complex zeta);

// Full matrix on K (x) K in the pair basis (a,b) -> a*dim + b.
Eigen::MatrixXcd eval_s(const SFunctionSpec& spec, Complex zeta);

// Eigenvalue functions of the O(n) model at zeta: {sym, asym, trace}.
struct NlsEigenvalues {
  Complex sym, asym, trace;
};
NlsEigenvalues eval_nls_eigenvalues(const NlsParams& p, Complex zeta);

struct EigenChannel {
  std::string label;
  std::function<Complex(Complex)> value;
  Eigen::MatrixXcd projector;
};

// Spectral decomposition S(zeta) = sum_i value_i(zeta) projector_i with
// zeta-independent projectors; available for constant models and the
// O(n) model.
std::vector<EigenChannel> eigen_decompose(const SFunctionSpec& spec);

// Residuals of the exchange-function axioms, sampled on the real line and
// on a strip around it.  All entries are relative scales; `worst` is the
// largest residual.  strip_max_norm records the boundedness scan.
struct AxiomReport {
  double hermitian_analyticity = 0;  // S(conj z)^dagger S(z) - 1
  double unitarity = 0;              // S(z) S(-z) - 1
  double cpt = 0;
  double yang_baxter = 0;
  double crossing = 0;
  double translation = 0;
  double symmetry_invariance = 0;
  double strip_max_norm = 0;
  double strip_half_width = 0;
  double worst() const;
};

AxiomReport check_axioms(const SFunctionSpec& spec, int n_samples = 20,
                         unsigned seed = 1);

// Seeded sample of unitaries V(g) representing the internal symmetry group
// of the little space (empty for the trivial group).
std::vector<Eigen::MatrixXcd> sample_symmetry_group(const LittleSpace& ls,
                                                    unsigned seed);

// Seeded generator of a valid random constant diagonal model (random
// involution, compatible masses, orbit-consistent phases).
ConstantMatrixParams random_constant_diagonal(int dim, unsigned seed);

// Preset builders.
SFunctionSpec make_free_model(int epsilon, double mass = 1.0);
SFunctionSpec make_sinh_gordon_model(Complex b, double mass = 1.0);
SFunctionSpec make_scalar_product_model(int epsilon, std::vector<Complex> b,
                                        double mass = 1.0);
SFunctionSpec make_gbd_model(std::vector<Complex> b, double mass = 1.0);
SFunctionSpec make_federbush_model(double m1, double m2, double lambda);
SFunctionSpec make_nls_model(int n, double mass = 1.0);
SFunctionSpec make_ising_model(double mass = 1.0);

}  // namespace qei
