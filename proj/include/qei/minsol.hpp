#pragma once

#include <functional>
#include <string>

#include "qei/charfct.hpp"
#include "qei/numerics.hpp"
#include "qei/smodel.hpp"

namespace qei {

// Minimal solution of the one-particle form factor equations
//   F(zeta) = S(zeta) F(-zeta),   F(i pi + zeta) = F(i pi - zeta),
// normalized to F(i pi) = 1, represented as
//   F(zeta) = (-i sh(zeta/2))^p * F_f(zeta)
// with p = 1 exactly when S(0) = -1 and F_f the integral-representation
// factor for the summed characteristic function f.
struct MinimalSolution {
  CharacteristicFunction f;
  int sinh_zero_power = 0;  // p, 0 or 1
  std::string source;
  // The scalar eigenvalue S this solves for; used by the strip recursion
  // and the Watson self-check.  Meromorphic on all of C.
  std::function<Complex(Complex)> s_model;

  // Evaluation strip half-margin around Im zeta in [0, 2pi].
  double strip_margin() const;
};

// Companion factor S_f(zeta) = exp(-2i Int_0^inf f(t) sin(zeta t/pi) dt/t),
// defined for |Im zeta| < pi * decay_rate(f).
Complex eval_S_f(const CharacteristicFunction& f, Complex zeta,
                 const QuadratureConfig& cfg = {});

// F_f(zeta) = exp(2 Int_0^inf f(t) sin^2((i pi - zeta) t / 2pi) dt/(t sh t)),
// defined for Im zeta in (-margin, 2pi + margin).
Complex eval_F_f(const CharacteristicFunction& f, Complex zeta,
                 const QuadratureConfig& cfg = {});

// Full minimal solution; outside the native strip the Watson relations
// F(zeta) = S(zeta) F(zeta + 2i pi) and F(zeta) = S(2i pi - zeta) F(zeta - 2i pi)
// map the argument back into it.
Complex eval_minimal(const MinimalSolution& m, Complex zeta,
                     const QuadratureConfig& cfg = {});

// Assembles the minimal solution for a scalar-type model (factor products,
// the cubic-pole preset) or the invariant-pair eigenvalue of the vector
// model.  Throws std::invalid_argument for models without a distinguished
// scalar eigenvalue (constant matrix variants).
MinimalSolution assemble_minimal(const SFunctionSpec& spec);

// Minimal solution for a constant eigenvalue S = +1 (F = 1) or S = -1
// (F = -i sh(zeta/2)).
MinimalSolution assemble_constant_minimal(int sign);

struct WatsonReport {
  double symmetry_residual = 0.0;    // max |F(z) - S(z)F(-z)| / |F(z)|
  double reflection_residual = 0.0;  // max |F(ip+z) - F(ip-z)| / |F(ip+z)|
  double normalization_residual = 0.0;  // |F(i pi) - 1|
};

WatsonReport watson_residual(const MinimalSolution& m,
                             const std::vector<double>& theta_grid,
                             const QuadratureConfig& cfg = {});

// Product of the per-factor limits F^inf = exp Int_0^inf (t sh t)^{-1}(n_f + f(t)) dt
// with n_f = -f0.  Finite only when the linear germ coefficient vanishes;
// throws ConvergenceError otherwise.
double asymptotic_constant(const MinimalSolution& m,
                           const QuadratureConfig& cfg = {});

// Large-|Re zeta| behaviour |F(theta + i pi)| ~ c * theta^log_power *
// exp(exponent * theta) on the shifted line.
struct GrowthClass {
  double exponent = 0.0;
  double log_power = 0.0;
  double c_low = 0.0;
  double c_high = 0.0;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  bool band_stable = true;   // c_high/c_low <= 2 within the window
  double band_drift = 0.0;   // relative drift when resampled at Im = pi +- 0.05
};

// exponent = f0/2 + p/2 + extra_exponent, log_power = f1 + extra_log_power;
// the band is measured on samples of |F| itself (extras excluded, they are
// exact monomials accounted for downstream).
GrowthClass classify_growth(const MinimalSolution& m, double extra_exponent = 0.0,
                            double extra_log_power = 0.0,
                            const QuadratureConfig& cfg = {});

}  // namespace qei
