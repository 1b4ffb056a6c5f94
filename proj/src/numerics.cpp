#include "qei/numerics.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace qei {

namespace {

// Stirling coefficients B_2k / (2k (2k-1)).
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,   -1.0 / 360.0,       1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0, -691.0 / 360360.0,  1.0 / 156.0,  -3617.0 / 122400.0};

Complex gamma_right_half(Complex z) {
  // Expects Re(z) >= 0.5: recurrence out to |z| >= 24, then the asymptotic
  // series, whose truncation error is far below double precision there.
  Complex scale = 1.0;
  while (std::abs(z) < 24.0) {
    scale *= z;
    z += 1.0;
  }
  Complex inv = 1.0 / z;
  Complex inv2 = inv * inv;
  Complex series = 0.0;
  Complex p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  Complex lg = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
  return std::exp(lg) / scale;
}

double distance_to_nonpositive_integer(Complex z) {
  if (z.real() > 0.5) return 1.0;
  double nearest = std::round(z.real());
  if (nearest > 0.0) return 1.0;
  return std::hypot(z.real() - nearest, z.imag());
}

// pi * cot(pi z), stable for large |Im z|.
Complex pi_cot_pi(Complex z) {
  Complex w = kPi * z;
  if (z.imag() >= 0.0) {
    Complex q = std::exp(Complex(0, 2) * w);  // |q| <= 1
    return kPi * Complex(0, 1) * (q + 1.0) / (q - 1.0);
  }
  Complex q = std::exp(Complex(0, -2) * w);
  return kPi * Complex(0, 1) * (1.0 + q) / (1.0 - q);
}

// Bernoulli-number tail coefficients B_2k / 2k for the digamma asymptotic.
constexpr std::array<double, 7> kDigammaTail = {
    1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
    1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0};

Complex digamma_asymptotic(Complex z) {
  // Valid for large |z| with Re(z) > 0.
  Complex inv = 1.0 / z;
  Complex inv2 = inv * inv;
  Complex sum = std::log(z) - 0.5 * inv;
  Complex p = inv2;
  for (double c : kDigammaTail) {
    sum -= c * p;
    p *= inv2;
  }
  return sum;
}

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kKronrodNode = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr std::array<double, 8> kKronrodWeight = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kGaussWeight = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelResult {
  Complex kronrod;
  double error;
};

PanelResult gk15(const std::function<Complex(double)>& f, double a, double b,
                 std::size_t& evals) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  Complex k = kKronrodWeight[7] * f(c);
  Complex g = kGaussWeight[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    Complex lo = f(c - h * kKronrodNode[i]);
    Complex hi = f(c + h * kKronrodNode[i]);
    k += kKronrodWeight[i] * (lo + hi);
    if (i % 2 == 1) g += kGaussWeight[i / 2] * (lo + hi);
  }
  evals += 15;
  PanelResult r;
  r.kronrod = h * k;
  double diff = std::abs(h * k - h * g);
  r.error = diff;
  return r;
}

void adapt(const std::function<Complex(double)>& f, double a, double b,
           double tol, int depth, const QuadratureConfig& cfg,
           Complex& total, double& err_total, std::size_t& evals) {
  PanelResult r = gk15(f, a, b, evals);
  if (r.error <= tol || depth >= cfg.max_depth) {
    if (depth >= cfg.max_depth && r.error > 64.0 * tol) {
      throw ConvergenceError(
          "adaptive quadrature: refinement limit reached on [" +
          std::to_string(a) + ", " + std::to_string(b) +
          "], panel error " + std::to_string(r.error));
    }
    total += r.kronrod;
    err_total += r.error;
    return;
  }
  double c = 0.5 * (a + b);
  adapt(f, a, c, 0.6 * tol, depth + 1, cfg, total, err_total, evals);
  adapt(f, c, b, 0.6 * tol, depth + 1, cfg, total, err_total, evals);
}

}  // namespace

Complex complex_gamma(Complex z) {
  if (distance_to_nonpositive_integer(z) < 1e-9) {
    throw PoleError("complex_gamma: pole at z = " + std::to_string(z.real()) +
                    " + " + std::to_string(z.imag()) + "i");
  }
  if (z.real() >= 0.5) return gamma_right_half(z);
  // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
  return kPi / (std::sin(kPi * z) * gamma_right_half(1.0 - z));
}

Complex complex_digamma(Complex z) {
  if (distance_to_nonpositive_integer(z) < 1e-9) {
    throw PoleError("complex_digamma: pole at z = " + std::to_string(z.real()) +
                    " + " + std::to_string(z.imag()) + "i");
  }
  if (z.real() < 0.5) {
    return complex_digamma(1.0 - z) - pi_cot_pi(z);
  }
  Complex shift = 0.0;
  while (std::abs(z) < 16.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  return digamma_asymptotic(z) + shift;
}

QuadratureOutcome integrate_interval(const std::function<Complex(double)>& f,
                                     double a, double b,
                                     const QuadratureConfig& cfg) {
  QuadratureOutcome out;
  if (a == b) return out;
  std::size_t evals = 0;

  std::vector<double> cuts;
  cuts.push_back(a);
  if (cfg.osc_freq_hint > 0.0) {
    double panel = kPi / cfg.osc_freq_hint;
    int n = int(std::ceil((b - a) / panel));
    for (int i = 1; i < n; ++i) cuts.push_back(a + (b - a) * double(i) / n);
  }
  cuts.push_back(b);

  Complex rough = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    rough += gk15(f, cuts[i], cuts[i + 1], evals).kronrod;
  double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(rough));

  Complex total = 0.0;
  double err = 0.0;
  double n_panels = double(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    adapt(f, cuts[i], cuts[i + 1], tol / n_panels, 0, cfg, total, err, evals);

  out.value = total;
  out.error_estimate = err;
  out.evaluations = evals;
  out.truncation = b;
  return out;
}

QuadratureOutcome integrate_semi_infinite(const std::function<Complex(double)>& f,
                                          const QuadratureConfig& cfg) {
  // Find a truncation point behind which the integrand stays negligible.
  double T = 16.0;
  auto tail_small = [&](double t0) {
    for (double s : {1.0, 1.13, 1.31, 1.57, 1.93}) {
      if (std::abs(f(t0 * s)) > cfg.tail_threshold) return false;
    }
    return true;
  };
  while (!tail_small(T)) {
    T *= 2.0;
    if (T > cfg.t_max) {
      throw ConvergenceError(
          "integrate_semi_infinite: no decay detected up to t = " +
          std::to_string(cfg.t_max));
    }
  }
  QuadratureOutcome out = integrate_interval(f, 0.0, T, cfg);
  out.truncation = T;
  out.error_estimate += cfg.tail_threshold * T;
  return out;
}

Complex g_tilde(const GaussianTestFunction& g, Complex p) {
  double c = g.amplitude * g.tau * std::sqrt(2.0 * kPi);
  return c * std::exp(-0.5 * g.tau * g.tau * p * p);
}

Complex g2_tilde(const GaussianTestFunction& g, Complex p) {
  double c = g.amplitude * g.amplitude * g.tau * std::sqrt(kPi);
  return c * std::exp(-0.25 * g.tau * g.tau * p * p);
}

}  // namespace qei
