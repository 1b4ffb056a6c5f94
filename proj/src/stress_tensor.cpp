#include "qei/stress_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace qei {

namespace {

constexpr Complex kI{0.0, 1.0};

int trimmed_degree(const std::vector<double>& c) {
  double scale = 0.0;
  for (double x : c) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return -1;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (std::abs(c[i]) > 1e-14 * scale) return i;
  return -1;
}

Complex poly_eval(const std::vector<double>& c, Complex u) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
  return acc;
}

Eigen::Vector2cd momentum(Complex zeta, double mass) {
  return Eigen::Vector2cd(mass * std::cosh(zeta), mass * std::sinh(zeta));
}

Complex minkowski_phase(const Eigen::Vector2cd& p, std::array<double, 2> x) {
  return std::exp(kI * (p(0) * x[0] - p(1) * x[1]));
}

// (V (x) V) acting on a pair-basis vector.
Eigen::VectorXcd tensor_square_apply(const Eigen::MatrixXcd& v,
                                     const Eigen::VectorXcd& w) {
  const int d = static_cast<int>(v.rows());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Complex acc = 0.0;
      for (int ap = 0; ap < d; ++ap)
        for (int bp = 0; bp < d; ++bp)
          acc += v(a, ap) * v(b, bp) * w(ap * d + bp);
      out(a * d + b) = acc;
    }
  return out;
}

Eigen::VectorXcd flip_pairs(const LittleSpace& ls, const Eigen::VectorXcd& w) {
  Eigen::VectorXcd out(ls.dim * ls.dim);
  for (int a = 0; a < ls.dim; ++a)
    for (int b = 0; b < ls.dim; ++b)
      out(ls.pair_index(a, b)) = w(ls.pair_index(b, a));
  return out;
}

Eigen::VectorXcd j_square_apply(const LittleSpace& ls,
                                const Eigen::VectorXcd& w) {
  Eigen::VectorXcd out(ls.dim * ls.dim);
  for (int c = 0; c < ls.dim; ++c)
    for (int d = 0; d < ls.dim; ++d)
      out(ls.pair_index(c, d)) =
          ls.conj_sign[c] * ls.conj_sign[d] *
          std::conj(w(ls.pair_index(ls.bar[c], ls.bar[d])));
  return out;
}

Eigen::Matrix2d lorentz_boost(double lambda) {
  Eigen::Matrix2d b;
  b << std::cosh(lambda), std::sinh(lambda), std::sinh(lambda),
      std::cosh(lambda);
  return b;
}

const char* kFederbushKeys[] = {"q1_s", "q2_s", "q1_as", "q2_as"};

bool is_federbush(const SFunctionSpec& spec) {
  return std::holds_alternative<FederbushParams>(spec.model);
}

bool is_gbd(const SFunctionSpec& spec) {
  return std::holds_alternative<GbdParams>(spec.model);
}

// Assembly without the normalization gate; used by the property report to
// quantify deliberate violations.
FormFactorF assemble_form_factor(const StressTensorSpec& spec) {
  spec.model.validate();
  FormFactorF out;
  out.space = spec.model.space();

  if (std::holds_alternative<FederbushParams>(spec.model.model)) {
    const LittleSpace ls = out.space;
    std::array<RationalPrefactor, 2> qs = {spec.channel("q1_s"),
                                           spec.channel("q2_s")};
    std::array<RationalPrefactor, 2> qas = {spec.channel("q1_as"),
                                            spec.channel("q2_as")};
    out.value = [ls, qs, qas](Complex zeta) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(ls.dim * ls.dim);
      const Complex u = std::cosh(zeta);
      const Complex sym = -kI * std::sinh(0.5 * zeta);
      const Complex asym = std::cosh(0.5 * zeta);
      for (int j = 0; j < 2; ++j) {
        const int up = 2 * j, dn = 2 * j + 1;
        const Complex s = sym * qs[j](u);
        const Complex a = asym * qas[j](u);
        // overall sign fixed by F(i pi) = I_(x)2 with conj_sign = -1
        v(ls.pair_index(up, dn)) += -(s + a);
        v(ls.pair_index(dn, up)) += -(s - a);
      }
      return v;
    };
    return out;
  }

  const RationalPrefactor q = spec.channel("q");

  if (const auto* cm = std::get_if<ConstantMatrixParams>(&spec.model.model)) {
    const LittleSpace ls = out.space;
    const Eigen::MatrixXcd s = eval_s(spec.model, 0.0);
    const Eigen::VectorXcd ip = ls.identity_pair();
    const Eigen::VectorXcd p_plus = 0.5 * (ip + s * ip);
    const Eigen::VectorXcd p_minus = 0.5 * (ip - s * ip);
    (void)cm;
    out.value = [q, p_plus, p_minus](Complex zeta) {
      Eigen::VectorXcd v =
          p_plus - kI * std::sinh(0.5 * zeta) * p_minus;
      return Eigen::VectorXcd(q(std::cosh(zeta)) * v);
    };
    return out;
  }

  // Scalar-type and vector models share the shape q(ch) * (poles) * F_min.
  const MinimalSolution msol = assemble_minimal(spec.model);
  const bool with_pole = is_gbd(spec.model) && !spec.poles.empty();
  const Eigen::VectorXcd ip = out.space.identity_pair();
  out.value = [q, msol, with_pole, ip](Complex zeta) {
    Complex scalar = q(std::cosh(zeta)) * eval_minimal(msol, zeta);
    if (with_pole) scalar /= -2.0 * std::cosh(zeta) - 1.0;
    return Eigen::VectorXcd(scalar * ip);
  };
  return out;
}

}  // namespace

Complex RationalPrefactor::operator()(Complex u) const {
  return poly_eval(numerator, u) / poly_eval(denominator, u);
}

int RationalPrefactor::degree() const {
  const int dn = trimmed_degree(numerator);
  const int dd = trimmed_degree(denominator);
  if (dn < 0 || dd < 0)
    throw std::domain_error("degree of a vanishing rational prefactor");
  return dn - dd;
}

double RationalPrefactor::leading_coefficient() const {
  const int dn = trimmed_degree(numerator);
  const int dd = trimmed_degree(denominator);
  if (dn < 0 || dd < 0)
    throw std::domain_error("leading coefficient of a vanishing prefactor");
  return numerator[static_cast<std::size_t>(dn)] /
         denominator[static_cast<std::size_t>(dd)];
}

bool RationalPrefactor::is_identically_zero() const {
  return trimmed_degree(numerator) < 0;
}

bool RationalPrefactor::is_identically_one() const {
  const int dn = trimmed_degree(numerator);
  const int dd = trimmed_degree(denominator);
  if (dn != dd || dn < 0) return false;
  double scale = 0.0;
  for (int i = 0; i <= dn; ++i)
    scale = std::max({scale, std::abs(numerator[static_cast<std::size_t>(i)]),
                      std::abs(denominator[static_cast<std::size_t>(i)])});
  for (int i = 0; i <= dn; ++i)
    if (std::abs(numerator[static_cast<std::size_t>(i)] -
                 denominator[static_cast<std::size_t>(i)]) > 1e-12 * scale)
      return false;
  return true;
}

void RationalPrefactor::validate(bool require_normalized) const {
  if (numerator.empty() || denominator.empty())
    throw std::invalid_argument("prefactor coefficient lists must be nonempty");
  if (trimmed_degree(denominator) < 0)
    throw std::invalid_argument("prefactor denominator vanishes identically");
  const Complex den = poly_eval(denominator, -1.0);
  double dscale = 0.0;
  for (double c : denominator) dscale = std::max(dscale, std::abs(c));
  if (std::abs(den) <= 1e-12 * dscale)
    throw std::invalid_argument("prefactor denominator vanishes at ch = -1");
  if (require_normalized) {
    if (is_identically_zero())
      throw std::invalid_argument("normalized prefactor cannot vanish");
    if (std::abs((*this)(-1.0) - 1.0) > 1e-9)
      throw std::invalid_argument("prefactor must equal 1 at ch = -1");
  }
}

RationalPrefactor StressTensorSpec::channel(const std::string& key) const {
  auto it = q_factors.find(key);
  if (it != q_factors.end()) return it->second;
  RationalPrefactor def;
  if (key.size() > 3 && key.substr(key.size() - 3) == "_as")
    def.numerator = {0.0};
  return def;
}

void StressTensorSpec::validate() const {
  model.validate();
  const bool fed = is_federbush(model);
  for (const auto& [key, pref] : q_factors) {
    bool known = fed ? std::count(std::begin(kFederbushKeys),
                                  std::end(kFederbushKeys), key) > 0
                     : key == "q";
    if (!known)
      throw std::invalid_argument("unknown prefactor channel '" + key +
                                  "' for model " + model.name());
    pref.validate(/*require_normalized=*/false);
  }
  if (is_gbd(model)) {
    const Complex bound_state(0.0, 2.0 * kPi / 3.0);
    if (poles.size() > 1)
      throw std::invalid_argument("at most one declared pole is supported");
    for (Complex p : poles)
      if (std::abs(p - bound_state) > 1e-9)
        throw std::invalid_argument(
            "declared pole must sit at 2 pi i / 3 for this model");
  } else if (!poles.empty()) {
    throw std::invalid_argument("model " + model.name() +
                                " admits no declared poles");
  }
  if (fed && parity_covariant) {
    if (!channel("q1_as").is_identically_zero() ||
        !channel("q2_as").is_identically_zero())
      throw std::invalid_argument(
          "parity covariance requires vanishing antisymmetric channels");
  }
}

StressTensorSpec canonical_stress_tensor(const SFunctionSpec& model) {
  StressTensorSpec out;
  out.model = model;
  RationalPrefactor one;
  if (is_federbush(model)) {
    RationalPrefactor zero;
    zero.numerator = {0.0};
    out.q_factors = {{"q1_s", one}, {"q2_s", one}, {"q1_as", zero},
                     {"q2_as", zero}};
  } else {
    out.q_factors = {{"q", one}};
  }
  if (is_gbd(model)) out.poles = {Complex(0.0, 2.0 * kPi / 3.0)};
  out.parity_covariant = true;
  return out;
}

Eigen::MatrixXcd hat_matrix(const LittleSpace& space,
                            const Eigen::VectorXcd& pair_vector) {
  Eigen::MatrixXcd m(space.dim, space.dim);
  for (int a = 0; a < space.dim; ++a)
    for (int b = 0; b < space.dim; ++b)
      m(a, b) = space.conj_sign[static_cast<std::size_t>(b)] *
                pair_vector(
                    space.pair_index(a, space.bar[static_cast<std::size_t>(b)]));
  return m;
}

Eigen::MatrixXcd FormFactorF::hat(Complex zeta) const {
  return hat_matrix(space, value(zeta));
}

FormFactorF build_F(const StressTensorSpec& spec) {
  spec.validate();
  FormFactorF f = assemble_form_factor(spec);
  const Eigen::VectorXcd at_pi = f.value(Complex(0.0, kPi));
  const Eigen::VectorXcd ip = f.space.identity_pair();
  const double rel = (at_pi - ip).norm() / ip.norm();
  if (!(rel <= 1e-9)) {
    std::ostringstream msg;
    msg << "assembled form factor violates F(i pi) = I: relative residual "
        << rel;
    throw NormalizationError(msg.str());
  }
  return f;
}

Eigen::Matrix2cd L_tensor(const Eigen::Vector2cd& p) {
  const Complex p2 = p(0) * p(0) - p(1) * p(1);
  const double scale = std::norm(p(0)) + std::norm(p(1));
  if (std::abs(p2) <= 1e-12 * scale)
    throw LightlikeError("transverse tensor undefined at lightlike momentum");
  Eigen::Matrix2cd out;
  const Complex g[2] = {1.0, -1.0};
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu)
      out(mu, nu) =
          (-p(mu) * p(nu) + (mu == nu ? g[mu] : Complex(0.0)) * p2) / p2;
  return out;
}

Eigen::Matrix2cd G_free(double mass, Complex zeta) {
  const Complex ch = std::cosh(zeta), sh = std::sinh(zeta);
  const double pref = mass * mass / (2.0 * kPi);
  Eigen::Matrix2cd out;
  out << ch * ch, sh * ch, sh * ch, sh * sh;
  return pref * out;
}

SpacetimeTensor f2_tensor_crossed(const FormFactorF& f, double theta,
                                  double eta, std::array<double, 2> x) {
  const LittleSpace& ls = f.space;
  const Complex delta(eta - theta, kPi);
  const Eigen::VectorXcd fval = f.value(delta);
  const double sigma = 0.5 * (theta + eta);
  SpacetimeTensor out;
  for (auto& row : out.comp)
    for (auto& c : row) c = Eigen::VectorXcd::Zero(ls.dim * ls.dim);
  for (int a = 0; a < ls.dim; ++a) {
    const double m = ls.masses[static_cast<std::size_t>(a)];
    const Eigen::Matrix2cd g = G_free(m, sigma);
    const Eigen::Vector2cd p_tot =
        momentum(theta, m) - momentum(eta, m);
    const Complex phase = minkowski_phase(p_tot, x);
    for (int b = 0; b < ls.dim; ++b) {
      const int idx = ls.pair_index(a, b);
      for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
          out.comp[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)](
              idx) = g(mu, nu) * phase * fval(idx);
    }
  }
  return out;
}

SpacetimeTensor f2_tensor_general(const FormFactorF& f, Complex zeta1,
                                  Complex zeta2, std::array<double, 2> x) {
  const LittleSpace& ls = f.space;
  const Eigen::VectorXcd fval = f.value(zeta2 - zeta1);
  SpacetimeTensor out;
  for (auto& row : out.comp)
    for (auto& c : row) c = Eigen::VectorXcd::Zero(ls.dim * ls.dim);
  for (int a = 0; a < ls.dim; ++a)
    for (int b = 0; b < ls.dim; ++b) {
      const int idx = ls.pair_index(a, b);
      const double ma = ls.masses[static_cast<std::size_t>(a)];
      const double mb = ls.masses[static_cast<std::size_t>(b)];
      const Eigen::Vector2cd p_tot = momentum(zeta1, ma) + momentum(zeta2, mb);
      const Eigen::Matrix2cd l = L_tensor(p_tot);
      const Complex phase = minkowski_phase(p_tot, x);
      const double pref = ma * mb / (2.0 * kPi);
      for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
          out.comp[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)](
              idx) = pref * l(mu, nu) * phase * fval(idx);
    }
  return out;
}

Eigen::VectorXcd F2_component(const FormFactorF& f, int mu, int nu,
                              double theta, double eta,
                              std::array<double, 2> x) {
  if (mu < 0 || mu > 1 || nu < 0 || nu > 1)
    throw std::invalid_argument("spacetime indices must be 0 or 1");
  return f2_tensor_crossed(f, theta, eta, x)(mu, nu);
}

double TPropertyReport::worst() const {
  double w = 0.0;
  for (const auto& [key, r] : residual) {
    if (key == "t12_parity" && !parity_covariant_declared) continue;
    w = std::max(w, r);
  }
  return w;
}

TPropertyReport check_T_properties(const StressTensorSpec& spec,
                                   int n_samples, unsigned seed) {
  const FormFactorF f = assemble_form_factor(spec);
  const LittleSpace& ls = f.space;
  const Complex ipi(0.0, kPi);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uth(-3.0, 3.0);

  TPropertyReport rep;
  rep.parity_covariant_declared = spec.parity_covariant;

  double fscale = 0.0;
  for (double th : {-3.0, -1.0, 0.0, 1.0, 3.0})
    fscale = std::max(fscale, f.value(th + ipi).norm());
  fscale = std::max(fscale, 1e-12);

  const Eigen::VectorXcd ipair = ls.identity_pair();
  rep.residual["t10_normalization"] =
      (f.value(ipi) - ipair).norm() / ipair.norm();

  // Declared poles: first-order limits from two approach directions,
  // each computed by polynomial extrapolation of t*F(p0+t*dir) to t=0.
  double t1 = 0.0;
  for (Complex p0 : spec.poles) {
    std::vector<Eigen::VectorXcd> limits;
    for (double phi : {0.4, 2.3}) {
      const Complex dir = std::exp(kI * phi);
      std::vector<double> ts;
      std::vector<Eigen::VectorXcd> gs;
      double d = 1e-3;
      for (int k = 0; k < 4; ++k, d *= 0.5) {
        ts.push_back(d);
        gs.push_back(ts.back() * dir * f.value(p0 + ts.back() * dir));
      }
      for (std::size_t lvl = 1; lvl < ts.size(); ++lvl)
        for (std::size_t i = 0; i + lvl < ts.size(); ++i)
          gs[i] = (ts[i] * gs[i + 1] - ts[i + lvl] * gs[i]) /
                  (ts[i] - ts[i + lvl]);
      limits.push_back(gs[0]);
    }
    const double base = limits[0].norm();
    if (base < 1e-8 * fscale)
      t1 = 1.0;  // declared pole absent or higher order
    else
      t1 = std::max(t1, (limits[0] - limits[1]).norm() / base);
  }
  rep.residual["t1_poles"] = t1;

  // Finiteness scan over the closed strip, avoiding declared poles.
  double t2 = 0.0;
  for (double im : {0.3, 1.0, 0.5 * kPi, 2.6})
    for (double re : {-6.0, -4.0, 0.0, 4.0, 6.0}) {
      const Complex z(re, im);
      bool near_pole = false;
      for (Complex p0 : spec.poles)
        if (std::abs(z - p0) < 0.35) near_pole = true;
      if (near_pole) continue;
      if (!f.value(z).allFinite()) t2 = 1.0;
    }
  rep.residual["t2_regularity"] = t2;

  double t3 = 0.0;
  for (int k = -8; k <= 8; ++k) {
    const double th = 0.5 * k;
    const Eigen::MatrixXcd s = eval_s(spec.model, th);
    t3 = std::max(t3, (f.value(th) - s * f.value(-th)).norm() / fscale);
  }
  rep.residual["t3_s_symmetry"] = t3;

  double t4 = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const double th = 0.5 * k;
    t4 = std::max(t4, (f.value(th + ipi) -
                       flip_pairs(ls, f.value(-th + ipi))).norm() / fscale);
  }
  rep.residual["t4_s_periodicity"] = t4;

  double t5 = 0.0;
  std::uniform_real_distribution<double> uim(-0.5, 0.5);
  for (int k = 0; k < 8; ++k) {
    const Complex z(uth(rng), uim(rng));
    t5 = std::max(t5, (f.value(z + ipi) -
                       j_square_apply(ls, f.value(std::conj(z) + ipi)))
                              .norm() /
                          fscale);
  }
  rep.residual["t5_hermiticity"] = t5;

  // Tensor-level checks on crossed kinematics.
  double t6 = 0.0, t7 = 0.0, t8 = 0.0, t9 = 0.0, t12 = 0.0;
  const int n_pairs = std::max(4, n_samples);
  for (int k = 0; k < n_pairs; ++k) {
    const double th = uth(rng), et = uth(rng);
    const SpacetimeTensor t = f2_tensor_crossed(f, th, et);
    double tscale = 1e-12;
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu)
        tscale = std::max(tscale, t(mu, nu).norm());

    t6 = std::max(t6, (t(0, 1) - t(1, 0)).norm() / tscale);

    for (int nu = 0; nu < 2; ++nu)
      for (int a = 0; a < ls.dim; ++a) {
        const double m = ls.masses[static_cast<std::size_t>(a)];
        const Eigen::Vector2cd p_tot = momentum(th, m) - momentum(et, m);
        const double pscale = std::abs(p_tot(0)) + std::abs(p_tot(1)) + 1e-12;
        for (int b = 0; b < ls.dim; ++b) {
          const int idx = ls.pair_index(a, b);
          const Complex contr =
              p_tot(0) * t(0, nu)(idx) - p_tot(1) * t(1, nu)(idx);
          t9 = std::max(t9, std::abs(contr) / (pscale * tscale));
        }
      }

    // parity: compare against reflected rapidities and reflected x^1
    const std::array<double, 2> xp = {0.4, 0.8};
    const SpacetimeTensor tp = f2_tensor_crossed(f, th, et, xp);
    const SpacetimeTensor tr =
        f2_tensor_crossed(f, -th, -et, {xp[0], -xp[1]});
    const double ps[2] = {1.0, -1.0};
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu)
        t12 = std::max(t12, (tp(mu, nu) - ps[mu] * ps[nu] * tr(mu, nu)).norm() /
                                tscale);
  }

  // boost part of covariance at two rapidities, plus a translation check
  for (double lb : {0.7, -0.4}) {
    const Eigen::Matrix2d boost = lorentz_boost(lb);
    for (int k = 0; k < 3; ++k) {
      const double th = uth(rng), et = uth(rng);
      const SpacetimeTensor t0 = f2_tensor_crossed(f, th, et);
      const SpacetimeTensor t1b = f2_tensor_crossed(f, th + lb, et + lb);
      double tscale = 1e-12;
      for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
          tscale = std::max(tscale, t1b(mu, nu).norm());
      for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu) {
          Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(ls.dim * ls.dim);
          for (int al = 0; al < 2; ++al)
            for (int be = 0; be < 2; ++be)
              acc += boost(mu, al) * boost(nu, be) * t0(al, be);
          t7 = std::max(t7, (acc - t1b(mu, nu)).norm() / tscale);
        }
    }
  }
  {
    const double th = uth(rng), et = uth(rng);
    const std::array<double, 2> a = {0.3, -0.2};
    const SpacetimeTensor ta = f2_tensor_crossed(f, th, et, a);
    const SpacetimeTensor t0 = f2_tensor_crossed(f, th, et);
    double tscale = 1e-12;
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu)
        tscale = std::max(tscale, t0(mu, nu).norm());
    for (int aa = 0; aa < ls.dim; ++aa) {
      const double m = ls.masses[static_cast<std::size_t>(aa)];
      const Complex phase =
          minkowski_phase(momentum(th, m) - momentum(et, m), a);
      for (int b = 0; b < ls.dim; ++b) {
        const int idx = ls.pair_index(aa, b);
        for (int mu = 0; mu < 2; ++mu)
          for (int nu = 0; nu < 2; ++nu)
            t7 = std::max(t7, std::abs(ta(mu, nu)(idx) -
                                       phase * t0(mu, nu)(idx)) /
                                   tscale);
      }
    }
  }

  // CPT on general kinematics: reversed conjugated rapidities, reflected x.
  for (int k = 0; k < 4; ++k) {
    const double th = uth(rng), et = uth(rng);
    const std::array<double, 2> xc = {0.25, -0.15};
    const SpacetimeTensor t = f2_tensor_general(f, th, Complex(et, kPi), xc);
    const SpacetimeTensor u = f2_tensor_general(f, Complex(et, -kPi), th,
                                                {-xc[0], -xc[1]});
    double tscale = 1e-12;
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu)
        tscale = std::max(tscale, t(mu, nu).norm());
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu)
        t8 = std::max(
            t8, (t(mu, nu) - flip_pairs(ls, j_square_apply(ls, u(mu, nu))))
                        .norm() /
                    tscale);
  }

  rep.residual["t6_index_symmetry"] = t6;
  rep.residual["t7_covariance"] = t7;
  rep.residual["t8_cpt"] = t8;
  rep.residual["t9_continuity"] = t9;
  rep.residual["t12_parity"] = t12;

  double t11 = 0.0;
  for (const Eigen::MatrixXcd& v : sample_symmetry_group(ls, seed + 7)) {
    for (Complex z : {Complex(0.7, kPi), Complex(-1.3, 0.5 * kPi)}) {
      const Eigen::VectorXcd w = f.value(z);
      t11 = std::max(t11, (tensor_square_apply(v, w) - w).norm() / fscale);
    }
  }
  rep.residual["t11_invariance"] = t11;

  rep.parity_flagged = rep.residual["t12_parity"] > 1e-6;
  return rep;
}

OneParticleTensor F1_form(const LittleSpace& space,
                          const Eigen::VectorXcd& f1_at_zero, Complex zeta,
                          std::array<double, 2> x) {
  space.validate();
  if (f1_at_zero.size() != space.dim)
    throw std::invalid_argument("one-particle datum has wrong dimension");
  const double scale = f1_at_zero.norm() + 1e-300;
  if ((space.apply_j(f1_at_zero) - f1_at_zero).norm() > 1e-9 * scale)
    throw SymmetryViolationError(
        "one-particle datum must be invariant under conjugation");
  for (const Eigen::MatrixXcd& v : sample_symmetry_group(space, 3))
    if ((v * f1_at_zero - f1_at_zero).norm() > 1e-9 * scale)
      throw SymmetryViolationError(
          "one-particle datum must be invariant under the symmetry group");

  const Complex ch = std::cosh(zeta), sh = std::sinh(zeta);
  Eigen::Matrix2cd m;
  m << sh * sh, sh * ch, sh * ch, ch * ch;
  OneParticleTensor out;
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu) {
      Eigen::VectorXcd c(space.dim);
      for (int a = 0; a < space.dim; ++a) {
        const Complex phase = minkowski_phase(
            momentum(zeta, space.masses[static_cast<std::size_t>(a)]), x);
        c(a) = m(mu, nu) * phase * f1_at_zero(a);
      }
      out.comp[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] = c;
    }
  return out;
}

}  // namespace qei
