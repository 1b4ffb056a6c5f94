#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace qei {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338328;

// Closed vertical strip lo <= Im(zeta) <= hi in the rapidity plane.
struct Strip {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(Complex zeta, double margin = 0.0) const {
    return zeta.imag() >= lo - margin && zeta.imag() <= hi + margin;
  }
};

struct PoleError : std::domain_error {
  explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

struct StripError : std::domain_error {
  explicit StripError(const std::string& what) : std::domain_error(what) {}
};

struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Gamma(z) for complex z; throws PoleError within 1e-9 of a nonpositive integer.
Complex complex_gamma(Complex z);

// Digamma psi(z) = Gamma'(z)/Gamma(z); same pole locations as 1/Gamma's zeros of Gamma.
Complex complex_digamma(Complex z);

struct QuadratureConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  int max_depth = 24;
  // Semi-infinite truncation control: the tail scan doubles T until the
  // integrand magnitude stays below tail_threshold, capped at t_max.
  double tail_threshold = 1e-15;
  double t_max = 1e7;
  // Optional oscillation frequency (rad per unit t); panels are pre-split
  // so that no initial panel spans more than ~half a period.
  double osc_freq_hint = 0.0;
};

struct QuadratureOutcome {
  Complex value;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  double truncation = 0.0;  // upper limit actually used (semi-infinite case)
};

// Adaptive Gauss-Kronrod on [a, b].
QuadratureOutcome integrate_interval(const std::function<Complex(double)>& f,
                                     double a, double b,
                                     const QuadratureConfig& cfg = {});

// Integral over [0, infinity) of a decaying integrand; truncation point found
// by scanning, then adaptive Gauss-Kronrod with a double-exponential fallback.
QuadratureOutcome integrate_semi_infinite(const std::function<Complex(double)>& f,
                                          const QuadratureConfig& cfg = {});

// Real smearing function g(t) = amplitude * exp(-t^2 / (2 tau^2)).
struct GaussianTestFunction {
  double tau = 1.0;
  double amplitude = 1.0;
};

// Fourier transforms with the convention h~(p) = Int dt h(t) exp(i p t),
// evaluated in closed form; entire in p.
Complex g_tilde(const GaussianTestFunction& g, Complex p);
Complex g2_tilde(const GaussianTestFunction& g, Complex p);

}  // namespace qei
