#include "qei/charfct.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>

namespace qei {
namespace {

// 10-point Gauss-Legendre rule on [-1, 1], positive-node half.
constexpr double kGlNode[5] = {0.1488743389816312, 0.4333953941292472,
                              0.6794095682990244, 0.8650633666889845,
                              0.9739065285171717};
constexpr double kGlWeight[5] = {0.2955242247147529, 0.2692667193099963,
                                0.2190863625159820, 0.1494513491505806,
                                0.0666713443086881};

// Composite transform table: r sampled once on fixed nodes, reused for
// every t.  The rational tail c2/(1+th^2) + c4/(1+th^2)^2 is subtracted
// from the samples and restored through its closed-form cosine transform.
struct TransformTable {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> values;  // r(node) - tail(node)
  double c2 = 0.0;
  double c4 = 0.0;

  double transform(double t) const {
    double acc = 0.0;
    double w = t / kPi;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      acc += weights[i] * values[i] * std::cos(nodes[i] * w);
    acc /= kPi;
    double e = std::exp(-w);
    acc += 0.5 * c2 * e + 0.25 * c4 * (1.0 + w) * e;
    return acc;
  }
};

TransformTable build_table(const std::function<double(double)>& r) {
  TransformTable tab;
  const double theta_max = 600.0;
  const double panel = 0.25;
  const int n_panels = static_cast<int>(theta_max / panel);
  tab.nodes.reserve(10 * n_panels);
  tab.weights.reserve(10 * n_panels);
  for (int p = 0; p < n_panels; ++p) {
    double mid = (p + 0.5) * panel;
    double half = 0.5 * panel;
    for (int k = 0; k < 5; ++k) {
      tab.nodes.push_back(mid - half * kGlNode[k]);
      tab.weights.push_back(half * kGlWeight[k]);
      tab.nodes.push_back(mid + half * kGlNode[k]);
      tab.weights.push_back(half * kGlWeight[k]);
    }
  }

  // Fit the two-term rational tail at two far samples.  Even unimodular
  // factors have r(theta) = c2/theta^2 + c4/theta^4 + O(theta^-6) there,
  // so the residual integrand beyond theta_max is O(theta^-6).
  double th1 = 1200.0, th2 = 2400.0;
  double r1 = r(th1), r2 = r(th2);
  double a1 = 1.0 / (1.0 + th1 * th1), a2 = 1.0 / (1.0 + th2 * th2);
  double det = a1 * a2 * (a2 - a1);
  tab.c2 = (r1 * a2 * a2 - r2 * a1 * a1) / det;
  tab.c4 = (r2 * a1 - r1 * a2) / det;

  tab.values.resize(tab.nodes.size());
  for (std::size_t i = 0; i < tab.nodes.size(); ++i) {
    double th = tab.nodes[i];
    double u = 1.0 / (1.0 + th * th);
    tab.values[i] = r(th) - (tab.c2 + tab.c4 * u) * u;
  }
  return tab;
}

struct SampledData {
  std::vector<double> ts;
  std::vector<double> fs;

  double interpolate(double t) const {
    if (ts.empty()) return 0.0;
    if (t <= ts.front()) return fs.front();
    if (t >= ts.back()) return fs.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    std::size_t lo = hi - 1;
    // 4-point Lagrange around the bracketing interval.
    std::size_t a = lo == 0 ? 0 : lo - 1;
    std::size_t b = std::min(a + 3, ts.size() - 1);
    a = b - 3;
    double out = 0.0;
    for (std::size_t i = a; i <= b; ++i) {
      double li = 1.0;
      for (std::size_t j = a; j <= b; ++j)
        if (j != i) li *= (t - ts[j]) / (ts[i] - ts[j]);
      out += li * fs[i];
    }
    return out;
  }
};

struct GermFit {
  double f0, f1, residual;
};

// Cubic least-squares germ over samples in [0, window]; the cubic term
// keeps the residual well below the fit-stability threshold.
GermFit fit_germ(const std::vector<double>& ts, const std::vector<double>& fs) {
  Eigen::MatrixXd a(ts.size(), 4);
  Eigen::VectorXd y(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double t = ts[i];
    a(i, 0) = 1.0;
    a(i, 1) = t;
    a(i, 2) = t * t;
    a(i, 3) = t * t * t;
    y(i) = fs[i];
  }
  Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  double rss = (a * coef - y).norm() / std::sqrt(static_cast<double>(ts.size()));
  return {coef(0), coef(1), rss};
}

}  // namespace

CharacteristicFunction charfct_zero() {
  CharacteristicFunction f;
  f.eval = [](double) { return 0.0; };
  return f;
}

CharacteristicFunction charfct_sum(const CharacteristicFunction& a,
                                   const CharacteristicFunction& b) {
  CharacteristicFunction out;
  auto ae = a.eval, be = b.eval;
  out.eval = [ae, be](double t) { return ae(t) + be(t); };
  out.f0 = a.f0 + b.f0;
  out.f1 = a.f1 + b.f1;
  out.decay_rate = std::min(a.decay_rate, b.decay_rate);
  out.decay_amp = a.decay_amp + b.decay_amp;
  out.decay_from = std::max(a.decay_from, b.decay_from);
  out.closed_form = a.closed_form && b.closed_form;
  out.fit_residual = std::max(a.fit_residual, b.fit_residual);
  out.tag = a.tag + "+" + b.tag;
  return out;
}

CharacteristicFunction charfct_negate(const CharacteristicFunction& a) {
  CharacteristicFunction out = a;
  auto ae = a.eval;
  out.eval = [ae](double t) { return -ae(t); };
  out.f0 = -a.f0;
  out.f1 = -a.f1;
  out.tag = "-(" + a.tag + ")";
  return out;
}

CharacteristicFunction charfct_sinh_gordon(double b) {
  if (!(b > 0.0 && b < 1.0))
    throw std::invalid_argument("sinh-Gordon parameter must lie in (0,1)");
  CharacteristicFunction f;
  double c = 2.0 * b - 1.0;
  f.eval = [c](double t) {
    return -std::cosh(0.5 * c * t) / std::cosh(0.5 * t);
  };
  f.f0 = -1.0;
  f.f1 = 0.0;
  f.decay_rate = std::min(b, 1.0 - b);
  f.decay_amp = 4.0;
  f.decay_from = 1.0;
  f.tag = "sg(" + std::to_string(b) + ")";
  return f;
}

CharacteristicFunction charfct_sinh_gordon_pair(Complex b) {
  double br = b.real();
  if (!(br > 0.0 && br < 1.0))
    throw std::invalid_argument("sinh-Gordon parameter must have real part in (0,1)");
  if (b.imag() == 0.0) {
    CharacteristicFunction single = charfct_sinh_gordon(br);
    return charfct_sum(single, single);
  }
  CharacteristicFunction f;
  Complex c = 2.0 * b - 1.0;
  f.eval = [c](double t) {
    return -2.0 * std::real(std::cosh(0.5 * c * t)) / std::cosh(0.5 * t);
  };
  f.f0 = -2.0;
  f.f1 = 0.0;
  f.decay_rate = std::min(br, 1.0 - br);
  f.decay_amp = 8.0;
  f.decay_from = 1.0;
  f.tag = "sgpair";
  return f;
}

CharacteristicFunction charfct_gamma_product(double lambda,
                                             const std::vector<double>& a_plus,
                                             const std::vector<double>& a_minus) {
  if (a_plus.size() != a_minus.size())
    throw std::invalid_argument("gamma-product index sets must have equal size");
  if (!(lambda > 0.0))
    throw std::invalid_argument("gamma-product scale must be positive");
  // Power sums D_k = sum_{A-} x^k - sum_{A+} x^k drive the germ and the
  // small-t series.
  double d[6] = {0, 0, 0, 0, 0, 0};
  double x_min = 1e300;
  for (double x : a_minus) {
    double p = 1.0;
    for (int k = 1; k <= 5; ++k) { p *= x; d[k] += p; }
    x_min = std::min(x_min, x);
  }
  for (double x : a_plus) {
    double p = 1.0;
    for (int k = 1; k <= 5; ++k) { p *= x; d[k] -= p; }
    x_min = std::min(x_min, x);
  }
  if (!(x_min > 0.0))
    throw std::invalid_argument("gamma-product indices must be positive");

  // Taylor coefficients of f in u = lambda t, from the product of the
  // exponential sums with u/(1-e^{-u}).
  double c0 = -d[1];
  double c1 = d[2] / 2 - d[1] / 2;
  double c2 = -d[3] / 6 + d[2] / 4 - d[1] / 12;
  double c3 = d[4] / 24 - d[3] / 12 + d[2] / 24;
  double c4 = -d[5] / 120 + d[4] / 48 - d[3] / 72 + d[1] / 720;

  std::vector<double> ap = a_plus, am = a_minus;
  CharacteristicFunction f;
  f.eval = [lambda, ap, am, c0, c1, c2, c3, c4](double t) {
    double u = lambda * t;
    if (u < 1e-3) {
      return c0 + u * (c1 + u * (c2 + u * (c3 + u * c4)));
    }
    double num = 0.0;
    for (double x : am) num += std::exp(-x * u);
    for (double x : ap) num -= std::exp(-x * u);
    return num / (1.0 - std::exp(-u));
  };
  f.f0 = c0;
  f.f1 = lambda * c1;
  f.decay_rate = lambda * x_min;
  f.decay_amp = 2.0 * static_cast<double>(a_plus.size() + a_minus.size());
  f.decay_from = 2.0 / lambda;
  f.tag = "gammaprod";
  return f;
}

CharacteristicFunction charfct_numeric(const std::function<double(double)>& r,
                                       std::vector<double> grid) {
  TransformTable tab = build_table(r);

  // Augment with germ-window points, sort, dedupe.
  for (int i = 0; i <= 20; ++i) grid.push_back(0.005 * i);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             grid.end());
  if (grid.front() < 0.0)
    throw std::invalid_argument("sample grid must be nonnegative");

  auto data = std::make_shared<SampledData>();
  data->ts = grid;
  data->fs.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    data->fs[i] = tab.transform(grid[i]);

  std::vector<double> germ_t, germ_f;
  for (std::size_t i = 0; i < grid.size() && grid[i] <= 0.1 + 1e-12; ++i) {
    germ_t.push_back(grid[i]);
    germ_f.push_back(data->fs[i]);
  }
  GermFit germ = fit_germ(germ_t, germ_f);

  // Tail decay estimate from the last decade of samples.
  double rate = 1.0, amp = 1.0;
  {
    std::vector<double> lt, lf;
    double t_hi = grid.back(), t_lo = 0.5 * t_hi;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double a = std::abs(data->fs[i]);
      if (grid[i] >= t_lo && a > 1e-300) {
        lt.push_back(grid[i]);
        lf.push_back(std::log(a));
      }
    }
    if (lt.size() >= 2) {
      double n = static_cast<double>(lt.size());
      double st = 0, sf = 0, stt = 0, stf = 0;
      for (std::size_t i = 0; i < lt.size(); ++i) {
        st += lt[i]; sf += lf[i]; stt += lt[i] * lt[i]; stf += lt[i] * lf[i];
      }
      double slope = (n * stf - st * sf) / (n * stt - st * st);
      double inter = (sf - slope * st) / n;
      if (slope < 0) { rate = -slope; amp = 2.0 * std::exp(inter); }
    }
  }

  CharacteristicFunction f;
  f.eval = [data](double t) { return data->interpolate(t); };
  f.f0 = germ.f0;
  f.f1 = germ.f1;
  f.fit_residual = germ.residual;
  f.decay_rate = rate;
  f.decay_amp = amp;
  f.decay_from = 0.5 * grid.back();
  f.closed_form = false;
  f.tag = "numeric";
  return f;
}

GrowthData growth_data(const CharacteristicFunction& f) {
  if (f.closed_form) return {f.f0, f.f1, 0.0};
  if (f.fit_residual > 1e-6)
    throw ConvergenceError("germ fit residual exceeds stability threshold");
  return {f.f0, f.f1, f.fit_residual};
}

}  // namespace qei
