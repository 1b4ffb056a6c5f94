#include "qei/minsol.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qei {

namespace {

const Complex kI(0.0, 1.0);
const Complex kTwoPiI(0.0, 2.0 * kPi);

Complex sigma(Complex zeta) { return -kI * std::sinh(0.5 * zeta); }

double decay_rate_of(const CharacteristicFunction& f) {
  return f.decay_rate > 0 ? f.decay_rate : 1.0;
}

// Integrand of log F_f: f(t) sin^2((i pi - zeta) t / 2pi) / (t sh t).
// Rewritten for t > 30 so that every exponential stays bounded inside the
// native strip: sin^2 w = (1 - cos 2w)/2 combined with 1/sh t = 2e^{-t}/(1-e^{-2t}).
class FIntegrand {
 public:
  FIntegrand(const CharacteristicFunction& f, Complex zeta)
      : f_(f),
        a_((kI * kPi - zeta) / (2.0 * kPi)),  // sin argument is a_*t
        re2_(2.0 * a_.real()),
        im2_(2.0 * a_.imag()),
        limit_(f.f0 * a_ * a_) {}

  Complex operator()(double t) const {
    if (t == 0.0) return limit_;
    double ft = f_(t);
    if (t <= 30.0) {
      Complex s = std::sin(a_ * t);
      return ft * s * s / (t * std::sinh(t));
    }
    double c = std::cos(re2_ * t), s = std::sin(re2_ * t);
    double ep = std::exp(im2_ * t - t), em = std::exp(-im2_ * t - t);
    Complex one_minus_cos =
        std::exp(-t) - Complex(0.5 * c * (ep + em), -0.5 * s * (ep - em));
    return ft * one_minus_cos / (t * (1.0 - std::exp(-2.0 * t)));
  }

 private:
  const CharacteristicFunction& f_;
  Complex a_;
  double re2_, im2_;
  Complex limit_;
};

}  // namespace

double MinimalSolution::strip_margin() const {
  return 0.9 * decay_rate_of(f) * kPi;
}

Complex eval_S_f(const CharacteristicFunction& f, Complex zeta,
                 const QuadratureConfig& cfg) {
  double rate = decay_rate_of(f);
  if (std::abs(zeta.imag()) >= 0.9 * kPi * rate)
    throw StripError("S_f argument outside |Im zeta| < 0.9 pi decay_rate");
  if (!f.eval) return Complex(1.0, 0.0);
  Complex w = zeta / kPi;
  auto integrand = [&f, w](double t) -> Complex {
    if (t == 0.0) return f.f0 * w;
    return f(t) * std::sin(w * t) / t;
  };
  QuadratureConfig c2 = cfg;
  c2.t_max = std::min(c2.t_max, 420.0 / rate);
  c2.osc_freq_hint = std::abs(zeta.real()) / kPi;
  QuadratureOutcome out = integrate_semi_infinite(integrand, c2);
  return std::exp(-2.0 * kI * out.value);
}

Complex eval_F_f(const CharacteristicFunction& f, Complex zeta,
                 const QuadratureConfig& cfg) {
  double rate = decay_rate_of(f);
  double margin = 0.9 * rate * kPi;
  if (zeta.imag() <= -margin || zeta.imag() >= 2.0 * kPi + margin)
    throw StripError("F_f argument outside Im zeta in (-margin, 2 pi + margin)");
  if (!f.eval) return Complex(1.0, 0.0);
  FIntegrand integrand(f, zeta);
  QuadratureConfig c2 = cfg;
  c2.t_max = std::min(c2.t_max, 420.0 / rate);
  c2.osc_freq_hint = std::abs(zeta.real()) / kPi;
  QuadratureOutcome out =
      integrate_semi_infinite([&integrand](double t) { return integrand(t); }, c2);
  return std::exp(2.0 * out.value);
}

Complex eval_minimal(const MinimalSolution& m, Complex zeta,
                     const QuadratureConfig& cfg) {
  double margin = m.strip_margin();
  if (zeta.imag() <= -margin)
    return m.s_model(zeta) * eval_minimal(m, zeta + kTwoPiI, cfg);
  if (zeta.imag() >= 2.0 * kPi + margin)
    return m.s_model(kTwoPiI - zeta) * eval_minimal(m, zeta - kTwoPiI, cfg);
  Complex core = eval_F_f(m.f, zeta, cfg);
  return m.sinh_zero_power ? sigma(zeta) * core : core;
}

namespace {

// Sums sinh-Gordon-type characteristic functions over a parameter list,
// consuming complex-conjugate pairs jointly so the sum is manifestly real.
CharacteristicFunction sum_factor_charfcts(std::vector<Complex> params) {
  CharacteristicFunction total = charfct_zero();
  std::vector<bool> used(params.size(), false);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (std::abs(params[i].imag()) < 1e-14) {
      total = charfct_sum(total, charfct_sinh_gordon(params[i].real()));
      continue;
    }
    bool paired = false;
    for (std::size_t j = i + 1; j < params.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(params[j] - std::conj(params[i])) < 1e-12) {
        used[j] = true;
        paired = true;
        break;
      }
    }
    if (!paired)
      throw std::invalid_argument(
          "factor parameters are not closed under complex conjugation");
    total = charfct_sum(total, charfct_sinh_gordon_pair(params[i]));
  }
  return total;
}

}  // namespace

MinimalSolution assemble_minimal(const SFunctionSpec& spec) {
  MinimalSolution m;
  if (const auto* sc = std::get_if<ScalarFactorList>(&spec.model)) {
    m.f = sum_factor_charfcts(sc->b);
    int s0 = sc->epsilon * (sc->b.size() % 2 ? -1 : 1);
    m.sinh_zero_power = s0 < 0 ? 1 : 0;
    m.source = "scalar factor product";
    SFunctionSpec copy = spec;
    m.s_model = [copy](Complex z) { return eval_s_scalar(copy, z); };
    return m;
  }
  if (const auto* g = std::get_if<GbdParams>(&spec.model)) {
    std::vector<Complex> positive;
    for (Complex b : g->b) {
      positive.push_back(b / 3.0);
      positive.push_back((2.0 - b) / 3.0);
    }
    m.f = charfct_sum(charfct_negate(charfct_sinh_gordon(2.0 / 3.0)),
                      sum_factor_charfcts(positive));
    m.sinh_zero_power = 1;  // S(0) = -1: odd number of factors
    m.source = "bullough_dodd product";
    SFunctionSpec copy = spec;
    m.s_model = [copy](Complex z) { return eval_s_scalar(copy, z); };
    return m;
  }
  if (const auto* p = std::get_if<NlsParams>(&spec.model)) {
    double nu = 2.0 / (p->n - 2);
    m.f = charfct_gamma_product(2.0, {1.5, 1.0 + 0.5 * nu},
                                {1.0, 0.5 + 0.5 * nu});
    m.sinh_zero_power = 1;  // trace eigenvalue has S_0(0) = -1
    m.source = "on_vector trace channel";
    NlsParams np = *p;
    m.s_model = [np](Complex z) { return eval_nls_eigenvalues(np, z).trace; };
    return m;
  }
  throw std::invalid_argument(
      "model has no distinguished scalar eigenvalue; assemble per channel");
}

MinimalSolution assemble_constant_minimal(int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("constant eigenvalue must be +1 or -1");
  MinimalSolution m;
  m.f = charfct_zero();
  m.sinh_zero_power = sign < 0 ? 1 : 0;
  m.source = sign < 0 ? "constant eigenvalue -1" : "constant eigenvalue +1";
  double s = sign;
  m.s_model = [s](Complex) { return Complex(s, 0.0); };
  return m;
}

WatsonReport watson_residual(const MinimalSolution& m,
                             const std::vector<double>& theta_grid,
                             const QuadratureConfig& cfg) {
  WatsonReport rep;
  for (double th : theta_grid) {
    Complex z(th, 0.0);
    Complex lhs = eval_minimal(m, z, cfg);
    Complex rhs = m.s_model(z) * eval_minimal(m, -z, cfg);
    double scale = std::max(std::abs(lhs), 1e-300);
    rep.symmetry_residual =
        std::max(rep.symmetry_residual, std::abs(lhs - rhs) / scale);
    Complex up = eval_minimal(m, Complex(th, kPi), cfg);
    Complex down = eval_minimal(m, Complex(-th, kPi), cfg);
    double scale2 = std::max(std::abs(up), 1e-300);
    rep.reflection_residual =
        std::max(rep.reflection_residual, std::abs(up - down) / scale2);
  }
  rep.normalization_residual =
      std::abs(eval_minimal(m, Complex(0.0, kPi), cfg) - Complex(1.0, 0.0));
  return rep;
}

double asymptotic_constant(const MinimalSolution& m,
                           const QuadratureConfig& cfg) {
  if (std::abs(m.f.f1) > 1e-9)
    throw ConvergenceError(
        "per-factor limit diverges: linear germ coefficient is nonzero");
  if (!m.f.eval) return 1.0;
  double mf = -m.f.f0;
  // Quadratic coefficient of mf + f near 0, Richardson-extrapolated; used
  // below the cancellation-dominated threshold.
  double t0 = 1e-3;
  auto g = [&](double t) { return (mf + m.f(t)) / (t * t); };
  double c2 = (4.0 * g(0.5 * t0) - g(t0)) / 3.0;
  auto integrand = [&](double t) -> Complex {
    if (t < t0) return t == 0.0 ? c2 : c2 * t / std::sinh(t);
    return (mf + m.f(t)) / (t * std::sinh(t));
  };
  QuadratureOutcome out = integrate_semi_infinite(integrand, cfg);
  return std::exp(out.value.real());
}

GrowthClass classify_growth(const MinimalSolution& m, double extra_exponent,
                            double extra_log_power,
                            const QuadratureConfig& cfg) {
  GrowthClass gc;
  double e0 = 0.5 * m.f.f0 + 0.5 * m.sinh_zero_power;
  gc.exponent = e0 + extra_exponent;
  gc.log_power = m.f.f1 + extra_log_power;
  gc.fit_lo = 10.0;
  gc.fit_hi = 30.0;
  auto normalized = [&](double th, double im) {
    double v = std::abs(eval_minimal(m, Complex(th, im), cfg));
    return v / (std::pow(th, m.f.f1) * std::exp(e0 * th));
  };
  gc.c_low = gc.c_high = normalized(10.0, kPi);
  for (double th : {15.0, 20.0, 25.0, 30.0}) {
    double v = normalized(th, kPi);
    gc.c_low = std::min(gc.c_low, v);
    gc.c_high = std::max(gc.c_high, v);
  }
  gc.band_stable = gc.c_high <= 2.0 * gc.c_low;
  for (double th : {10.0, 20.0, 30.0}) {
    double mid = normalized(th, kPi);
    for (double im : {kPi - 0.05, kPi + 0.05}) {
      double v = normalized(th, im);
      gc.band_drift = std::max(gc.band_drift, std::abs(v / mid - 1.0));
    }
  }
  return gc;
}

}  // namespace qei
