#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qei/numerics.hpp"

namespace qei {

// Real-valued even profile t >= 0 -> f(t) governing a minimal solution.
// Carries the germ (f0 = f(0), f1 = f'(0)) that controls large-rapidity
// growth, and a decay certificate |f(t)| <= decay_amp * exp(-decay_rate*t)
// valid for t >= decay_from.
struct CharacteristicFunction {
  std::function<double(double)> eval;
  double f0 = 0.0;
  double f1 = 0.0;
  double decay_rate = 1.0;
  double decay_amp = 0.0;
  double decay_from = 0.0;
  bool closed_form = true;
  double fit_residual = 0.0;  // only meaningful for sampled data
  std::string tag = "zero";

  double operator()(double t) const { return eval ? eval(std::abs(t)) : 0.0; }
};

CharacteristicFunction charfct_zero();

// Pointwise sum; decay certificate is the weaker of the two.
CharacteristicFunction charfct_sum(const CharacteristicFunction& a,
                                   const CharacteristicFunction& b);
CharacteristicFunction charfct_negate(const CharacteristicFunction& a);

// Profile of a single factor (sh z - i sin pi b)/(sh z + i sin pi b) with
// real parameter b in (0,1):  f(t;b) = -ch((2b-1)t/2)/ch(t/2).
CharacteristicFunction charfct_sinh_gordon(double b);

// Joint profile of a conjugate pair of factors with complex parameter b;
// real-valued by construction.
CharacteristicFunction charfct_sinh_gordon_pair(Complex b);

// Profile for a unimodular function built from gamma-function ratios with
// index sets A+ and A-:  f(t) = (sum_{A-} - sum_{A+}) e^{-lambda x t} /
// (1 - e^{-lambda t}).  Requires |A+| == |A-|.
CharacteristicFunction charfct_gamma_product(double lambda,
                                             const std::vector<double>& a_plus,
                                             const std::vector<double>& a_minus);

// Numerical profile from the log-derivative r(theta) = i S'(theta)/S(theta)
// (real-valued and even for unimodular S) via the cosine transform
//   f(t) = (1/pi) Int_0^inf r(theta) cos(theta t / pi) dtheta.
// The slowly decaying part of r is removed by a fitted rational tail whose
// transform is known in closed form.  Result is a sampled representation on
// `grid` (augmented with points near 0 for the germ fit).
CharacteristicFunction charfct_numeric(const std::function<double(double)>& r,
                                       std::vector<double> grid);

struct GrowthData {
  double f0 = 0.0;
  double f1 = 0.0;
  double fit_residual = 0.0;
};

// Germ of f at 0; stored values for closed forms, fitted for sampled data.
// Throws ConvergenceError when the fit residual exceeds 1e-6.
GrowthData growth_data(const CharacteristicFunction& f);

}  // namespace qei
