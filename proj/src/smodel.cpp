#include "qei/smodel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qei {
namespace {

const Complex kI(0.0, 1.0);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Complex nls_ratio(double nu, Complex z) {
  return complex_gamma(0.5 * nu + z) * complex_gamma(0.5 + z) /
         (complex_gamma(0.5 * (1.0 + nu) + z) * complex_gamma(1.0 + z));
}

struct NlsBcd {
  Complex b, c, d;
};

// Pole-free evaluation: the bare gamma ratio has 1/Gamma(z) zeros written
// as z/Gamma(1+z), which also cancels the 1/zeta poles of c and d.
NlsBcd eval_nls_bcd(const NlsParams& p, Complex zeta) {
  double nu = 2.0 / (p.n - 2);
  Complex z = zeta / (2.0 * kPi * kI);
  Complex zp = 0.5 - z;
  Complex t = nls_ratio(nu, z);
  Complex tp = nls_ratio(nu, zp);
  NlsBcd out;
  out.b = z * t * zp * tp;
  out.c = -(0.5 * nu) * t * zp * tp;
  out.d = -(0.5 * nu) * z * t * tp;
  return out;
}

Eigen::MatrixXcd federbush_coeff(double lambda) {
  Complex a = std::exp(2.0 * kPi * kI * lambda);
  Complex ab = std::conj(a);
  Eigen::MatrixXcd c(4, 4);
  c << 1, 1, a, ab,
      1, 1, ab, a,
      ab, a, 1, 1,
      a, ab, 1, 1;
  return -c;
}

// Diagonal-in-pairs action S(e_a (x) e_b) = coeff(b,a) e_b (x) e_a.
Eigen::MatrixXcd diagonal_pair_matrix(const Eigen::MatrixXcd& coeff) {
  int d = static_cast<int>(coeff.rows());
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s(b * d + a, a * d + b) = coeff(b, a);
  return s;
}

// Distance from the real line to the nearest pole of a scalar factor with
// parameter b: pole imaginary parts are pi(-Re b + 2k) and pi(1 + Re b + 2k).
double factor_pole_distance(Complex b) {
  auto wrap = [](double v) {
    double m = std::fmod(std::abs(v), 2.0);
    return std::min(m, 2.0 - m);
  };
  return kPi * std::min(wrap(b.real()), wrap(1.0 + b.real()));
}

std::vector<Complex> gbd_factor_parameters(const GbdParams& p) {
  std::vector<Complex> out;
  out.push_back(Complex(-2.0 / 3.0, 0.0));
  for (Complex b : p.b) {
    out.push_back(b / 3.0);
    out.push_back((2.0 - b) / 3.0);
  }
  return out;
}

double strip_half_width_impl(const SFunctionSpec& spec) {
  double d = kPi;
  if (const auto* sc = std::get_if<ScalarFactorList>(&spec.model)) {
    for (Complex b : sc->b) d = std::min(d, factor_pole_distance(b));
  } else if (const auto* g = std::get_if<GbdParams>(&spec.model)) {
    for (Complex b : gbd_factor_parameters(*g))
      d = std::min(d, factor_pole_distance(b));
  } else if (const auto* n = std::get_if<NlsParams>(&spec.model)) {
    double nu = 2.0 / (n->n - 2);
    d = std::min(d, std::min(kPi * nu, kPi));
  }
  return std::min(0.5, 0.8 * d);
}

void require_conjugate_closed(const std::vector<Complex>& bs) {
  std::vector<bool> used(bs.size(), false);
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (used[i] || std::abs(bs[i].imag()) < 1e-12) continue;
    bool found = false;
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (j == i || used[j]) continue;
      if (std::abs(bs[j] - std::conj(bs[i])) < 1e-12) {
        used[i] = used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) {
      std::ostringstream msg;
      msg << "parameter list not closed under conjugation: entry " << i
          << " = " << bs[i].real() << (bs[i].imag() < 0 ? "-" : "+")
          << std::abs(bs[i].imag()) << "i has no conjugate partner";
      throw std::invalid_argument(msg.str());
    }
  }
}

void require_unit_interval(const std::vector<Complex>& bs) {
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (!(bs[i].real() > 0.0 && bs[i].real() < 1.0)) {
      std::ostringstream msg;
      msg << "parameter " << i << " has real part " << bs[i].real()
          << " outside (0,1)";
      throw std::invalid_argument(msg.str());
    }
  }
}

LittleSpace scalar_space(double mass) {
  LittleSpace ls;
  ls.dim = 1;
  ls.masses = {mass};
  ls.bar = {0};
  ls.conj_sign = {1.0};
  ls.symmetry = SymmetryTag::Trivial;
  return ls;
}

std::vector<Eigen::MatrixXcd> symmetry_generators(const LittleSpace& ls,
                                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> out;
  switch (ls.symmetry) {
    case SymmetryTag::Trivial:
      break;
    case SymmetryTag::Z2:
      out.push_back(-Eigen::MatrixXcd::Identity(ls.dim, ls.dim));
      break;
    case SymmetryTag::U1U1:
      for (int k = 0; k < 8; ++k) {
        Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(ls.dim, ls.dim);
        for (int j = 0; 2 * j + 1 < ls.dim; ++j) {
          Complex ph = std::exp(2.0 * kPi * kI * uni(rng));
          v(2 * j, 2 * j) = ph;
          v(2 * j + 1, 2 * j + 1) = std::conj(ph);
        }
        out.push_back(v);
      }
      break;
    case SymmetryTag::On: {
      for (int a = 0; a < ls.dim; ++a) {
        int b = (a + 1) % ls.dim;
        double ang = 2.0 * kPi * uni(rng);
        Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(ls.dim, ls.dim);
        r(a, a) = std::cos(ang);
        r(b, b) = std::cos(ang);
        r(a, b) = -std::sin(ang);
        r(b, a) = std::sin(ang);
        out.push_back(r);
      }
      Eigen::MatrixXcd refl = Eigen::MatrixXcd::Identity(ls.dim, ls.dim);
      refl(0, 0) = -1.0;
      out.push_back(refl);
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<Eigen::MatrixXcd> sample_symmetry_group(const LittleSpace& ls,
                                                    unsigned seed) {
  std::mt19937_64 rng(seed);
  return symmetry_generators(ls, rng);
}

void LittleSpace::validate() const {
  if (dim < 1) throw std::invalid_argument("little space dimension must be >= 1");
  if (static_cast<int>(masses.size()) != dim ||
      static_cast<int>(bar.size()) != dim ||
      static_cast<int>(conj_sign.size()) != dim)
    throw std::invalid_argument("little space field sizes must equal dim");
  for (int a = 0; a < dim; ++a) {
    if (!(masses[a] > 0.0))
      throw std::invalid_argument("masses must be strictly positive");
    if (bar[a] < 0 || bar[a] >= dim || bar[bar[a]] != a)
      throw std::invalid_argument("conjugation must be an involution");
    if (masses[bar[a]] != masses[a])
      throw std::invalid_argument("conjugation must preserve the mass");
    if (std::abs(conj_sign[a]) != 1.0)
      throw std::invalid_argument("conjugation signs must be +1 or -1");
    if (conj_sign[bar[a]] != conj_sign[a])
      throw std::invalid_argument("conjugation signs must be constant on orbits");
  }
}

Eigen::VectorXcd LittleSpace::apply_j(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out(dim);
  for (int a = 0; a < dim; ++a) out(bar[a]) = conj_sign[a] * std::conj(v(a));
  return out;
}

Eigen::VectorXcd LittleSpace::identity_pair() const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim * dim);
  for (int a = 0; a < dim; ++a) out(pair_index(a, bar[a])) = conj_sign[a];
  return out;
}

LittleSpace SFunctionSpec::space() const {
  if (const auto* sc = std::get_if<ScalarFactorList>(&model))
    return scalar_space(sc->mass);
  if (const auto* g = std::get_if<GbdParams>(&model)) return scalar_space(g->mass);
  if (const auto* f = std::get_if<FederbushParams>(&model)) {
    LittleSpace ls;
    ls.dim = 4;
    ls.masses = {f->m1, f->m1, f->m2, f->m2};
    ls.bar = {1, 0, 3, 2};
    ls.conj_sign = {-1.0, -1.0, -1.0, -1.0};
    ls.symmetry = SymmetryTag::U1U1;
    return ls;
  }
  if (const auto* n = std::get_if<NlsParams>(&model)) {
    LittleSpace ls;
    ls.dim = n->n;
    ls.masses.assign(n->n, n->mass);
    ls.bar.resize(n->n);
    for (int a = 0; a < n->n; ++a) ls.bar[a] = a;
    ls.conj_sign.assign(n->n, 1.0);
    ls.symmetry = SymmetryTag::On;
    return ls;
  }
  return std::get<ConstantMatrixParams>(model).space;
}

std::string SFunctionSpec::name() const {
  if (const auto* sc = std::get_if<ScalarFactorList>(&model)) {
    if (sc->b.empty()) return sc->epsilon > 0 ? "free_boson" : "free_fermion";
    return "scalar_product";
  }
  if (std::holds_alternative<GbdParams>(model)) return "bullough_dodd";
  if (std::holds_alternative<FederbushParams>(model)) return "federbush";
  if (std::holds_alternative<NlsParams>(model)) return "on_vector";
  return "constant";
}

void SFunctionSpec::validate() const {
  if (const auto* sc = std::get_if<ScalarFactorList>(&model)) {
    if (sc->epsilon != 1 && sc->epsilon != -1)
      throw std::invalid_argument("sign factor must be +1 or -1");
    if (!(sc->mass > 0.0)) throw std::invalid_argument("mass must be positive");
    require_unit_interval(sc->b);
    require_conjugate_closed(sc->b);
    return;
  }
  if (const auto* g = std::get_if<GbdParams>(&model)) {
    if (g->b.empty())
      throw std::invalid_argument("factor parameter list must be nonempty");
    if (!(g->mass > 0.0)) throw std::invalid_argument("mass must be positive");
    require_unit_interval(g->b);
    require_conjugate_closed(g->b);
    return;
  }
  if (const auto* f = std::get_if<FederbushParams>(&model)) {
    if (!(f->m1 > 0.0 && f->m2 > 0.0))
      throw std::invalid_argument("masses must be positive");
    return;
  }
  if (const auto* n = std::get_if<NlsParams>(&model)) {
    if (n->n < 3) throw std::invalid_argument("vector model needs n >= 3");
    if (!(n->mass > 0.0)) throw std::invalid_argument("mass must be positive");
    return;
  }
  const auto& c = std::get<ConstantMatrixParams>(model);
  c.space.validate();
  int d = c.space.dim;
  if (c.coeff.rows() != d || c.coeff.cols() != d)
    throw std::invalid_argument("coefficient matrix must be dim x dim");
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Complex v = c.coeff(a, b);
      if (std::abs(std::abs(v) - 1.0) > 1e-10)
        throw std::invalid_argument("coefficients must be unimodular");
      if (std::abs(v - std::conj(c.coeff(b, a))) > 1e-10)
        throw std::invalid_argument("coefficients must invert under index swap");
      if (std::abs(v - c.coeff(c.space.bar[a], c.space.bar[b])) > 1e-10)
        throw std::invalid_argument("coefficients must be conjugation covariant");
      if (b == c.space.bar[a] && std::abs(v.imag()) > 1e-10)
        throw std::invalid_argument("crossed-pair coefficients must be real");
    }
}

Complex eval_scalar_factor(Complex zeta, Complex b) {
  Complex sp = std::sin(kPi * b);
  Complex sh = std::sinh(zeta);
  Complex den = sh + kI * sp;
  if (std::abs(den) < 1e-9 * std::max(1.0, std::abs(sh)))
    throw PoleError("scalar factor evaluated at a pole");
  return (sh - kI * sp) / den;
}

Complex eval_s_scalar(const SFunctionSpec& spec, Complex zeta) {
  if (const auto* sc = std::get_if<ScalarFactorList>(&spec.model)) {
    Complex out(static_cast<double>(sc->epsilon), 0.0);
    for (Complex b : sc->b) out *= eval_scalar_factor(zeta, b);
    return out;
  }
  if (const auto* g = std::get_if<GbdParams>(&spec.model)) {
    Complex out(1.0, 0.0);
    for (Complex b : gbd_factor_parameters(*g))
      out *= eval_scalar_factor(zeta, b);
    return out;
  }
  throw std::invalid_argument("model has no scalar exchange function");
}

Eigen::MatrixXcd eval_s(const SFunctionSpec& spec, Complex zeta) {
  if (std::holds_alternative<ScalarFactorList>(spec.model) ||
      std::holds_alternative<GbdParams>(spec.model)) {
    Eigen::MatrixXcd s(1, 1);
    s(0, 0) = eval_s_scalar(spec, zeta);
    return s;
  }
  if (const auto* f = std::get_if<FederbushParams>(&spec.model))
    return diagonal_pair_matrix(federbush_coeff(f->lambda));
  if (const auto* c = std::get_if<ConstantMatrixParams>(&spec.model))
    return diagonal_pair_matrix(c->coeff);
  const auto& p = std::get<NlsParams>(spec.model);
  NlsBcd v = eval_nls_bcd(p, zeta);
  int d = p.n;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      s(b * d + a, a * d + b) += v.b;
      s(a * d + b, a * d + b) += v.c;
      if (a == b)
        for (int g = 0; g < d; ++g) s(g * d + g, a * d + a) += v.d;
    }
  return s;
}

NlsEigenvalues eval_nls_eigenvalues(const NlsParams& p, Complex zeta) {
  NlsBcd v = eval_nls_bcd(p, zeta);
  return {v.b + v.c, v.c - v.b, v.b + v.c + static_cast<double>(p.n) * v.d};
}

std::vector<EigenChannel> eigen_decompose(const SFunctionSpec& spec) {
  if (const auto* p = std::get_if<NlsParams>(&spec.model)) {
    int d = p->n;
    Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(d * d, d * d);
    Eigen::MatrixXcd flip = Eigen::MatrixXcd::Zero(d * d, d * d);
    Eigen::MatrixXcd trace = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        flip(b * d + a, a * d + b) = 1.0;
        trace(a * d + a, b * d + b) = 1.0;
      }
    NlsParams pc = *p;
    std::vector<EigenChannel> out;
    out.push_back({"sym",
                   [pc](Complex z) { return eval_nls_eigenvalues(pc, z).sym; },
                   0.5 * (one + flip) - trace / d});
    out.push_back({"asym",
                   [pc](Complex z) { return eval_nls_eigenvalues(pc, z).asym; },
                   0.5 * (one - flip)});
    out.push_back({"trace",
                   [pc](Complex z) { return eval_nls_eigenvalues(pc, z).trace; },
                   trace / d});
    return out;
  }
  if (std::holds_alternative<FederbushParams>(spec.model) ||
      std::holds_alternative<ConstantMatrixParams>(spec.model)) {
    Eigen::MatrixXcd s = eval_s(spec, Complex(0.0, 0.0));
    Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
    std::vector<EigenChannel> out;
    out.push_back({"plus", [](Complex) { return Complex(1.0, 0.0); },
                   0.5 * (one + s)});
    out.push_back({"minus", [](Complex) { return Complex(-1.0, 0.0); },
                   0.5 * (one - s)});
    return out;
  }
  throw std::invalid_argument(
      "spectral decomposition requires constant projectors");
}

double AxiomReport::worst() const {
  return std::max({hermitian_analyticity, unitarity, cpt, yang_baxter, crossing,
                   translation, symmetry_invariance});
}

AxiomReport check_axioms(const SFunctionSpec& spec, int n_samples,
                         unsigned seed) {
  LittleSpace ls = spec.space();
  int d = ls.dim, d2 = d * d;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  AxiomReport rep;
  double kappa = strip_half_width_impl(spec);
  rep.strip_half_width = kappa;

  std::vector<Complex> pts;
  for (int i = 0; i < n_samples; ++i)
    pts.push_back(Complex(4.0 * uni(rng), 0.95 * kappa * uni(rng)));
  pts.push_back(Complex(0.7, 0.0));
  pts.push_back(Complex(-2.3, 0.0));

  Eigen::MatrixXd cpt_map = Eigen::MatrixXd::Zero(d2, d2);
  for (int g = 0; g < d; ++g)
    for (int dd = 0; dd < d; ++dd)
      cpt_map(ls.pair_index(ls.bar[dd], ls.bar[g]), ls.pair_index(g, dd)) =
          ls.conj_sign[g] * ls.conj_sign[dd];

  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(d2, d2);
  for (Complex z : pts) {
    Eigen::MatrixXcd s = eval_s(spec, z);
    Eigen::MatrixXcd sm = eval_s(spec, -z);
    Eigen::MatrixXcd sc = eval_s(spec, std::conj(z));
    rep.hermitian_analyticity =
        std::max(rep.hermitian_analyticity, max_abs(sc.adjoint() * s - eye));
    rep.unitarity = std::max(rep.unitarity, max_abs(s * sm - eye));
    rep.cpt = std::max(
        rep.cpt, max_abs(cpt_map * s.conjugate() * cpt_map - s.adjoint()));
  }

  // Factorization on three particles, sampled at random real rapidity pairs.
  Eigen::MatrixXcd idd = Eigen::MatrixXcd::Identity(d, d);
  for (int k = 0; k < 10; ++k) {
    Complex z1(0.1 + 2.9 * std::abs(uni(rng)), 0.0);
    Complex z2(0.1 + 2.9 * std::abs(uni(rng)), 0.0);
    Eigen::MatrixXcd s1 = eval_s(spec, z1);
    Eigen::MatrixXcd s2 = eval_s(spec, z2);
    Eigen::MatrixXcd s12 = eval_s(spec, z1 + z2);
    Eigen::MatrixXcd lhs =
        kron(s1, idd) * kron(idd, s12) * kron(s2, idd);
    Eigen::MatrixXcd rhs =
        kron(idd, s2) * kron(s12, idd) * kron(idd, s1);
    rep.yang_baxter = std::max(rep.yang_baxter, max_abs(lhs - rhs));
  }

  // Crossing on all basis quadruples at 5 sample points.
  for (int k = 0; k < 5; ++k) {
    Complex z(0.2 + 0.6 * k, 0.07 * uni(rng));
    Eigen::MatrixXcd s = eval_s(spec, z);
    Eigen::MatrixXcd scr = eval_s(spec, kPi * kI - z);
    for (int a1 = 0; a1 < d; ++a1)
      for (int a2 = 0; a2 < d; ++a2)
        for (int b1 = 0; b1 < d; ++b1)
          for (int b2 = 0; b2 < d; ++b2) {
            Complex lhs = scr(ls.pair_index(a1, a2), ls.pair_index(b1, b2));
            Complex rhs = ls.conj_sign[b1] * ls.conj_sign[a2] *
                          s(ls.pair_index(ls.bar[b1], a1),
                            ls.pair_index(b2, ls.bar[a2]));
            rep.crossing = std::max(rep.crossing, std::abs(lhs - rhs));
          }
  }

  // Mass-projector exchange.
  std::vector<double> distinct;
  for (double m : ls.masses)
    if (std::find(distinct.begin(), distinct.end(), m) == distinct.end())
      distinct.push_back(m);
  if (distinct.size() > 1) {
    auto proj = [&](double m) {
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(d, d);
      for (int a = 0; a < d; ++a)
        if (ls.masses[a] == m) e(a, a) = 1.0;
      return e;
    };
    for (Complex z : {Complex(0.9, 0.0), Complex(-1.4, 0.1)}) {
      Eigen::MatrixXcd s = eval_s(spec, z);
      for (double m : distinct)
        for (double mp : distinct) {
          Eigen::MatrixXcd lhs = kron(proj(m), proj(mp)) * s;
          Eigen::MatrixXcd rhs = s * kron(proj(mp), proj(m));
          rep.translation = std::max(rep.translation, max_abs(lhs - rhs));
        }
    }
  }

  // Invariance under the symmetry generators.
  for (const Eigen::MatrixXcd& v : symmetry_generators(ls, rng)) {
    Eigen::MatrixXcd vv = kron(v, v);
    for (Complex z : {Complex(0.5, 0.0), Complex(1.9, 0.0)}) {
      Eigen::MatrixXcd s = eval_s(spec, z);
      rep.symmetry_invariance =
          std::max(rep.symmetry_invariance, max_abs(vv * s - s * vv));
    }
  }

  // Boundedness scan on the strip.
  for (int i = 0; i <= 10; ++i)
    for (int j = -2; j <= 2; ++j) {
      Complex z(-5.0 + i, 0.45 * kappa * j);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval_s(spec, z));
      rep.strip_max_norm =
          std::max(rep.strip_max_norm, svd.singularValues()(0));
    }
  return rep;
}

ConstantMatrixParams random_constant_diagonal(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  LittleSpace ls;
  ls.dim = dim;
  ls.bar.assign(dim, -1);
  std::vector<int> order(dim);
  for (int i = 0; i < dim; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < dim; ++i) {
    int a = order[i];
    if (ls.bar[a] >= 0) continue;
    int partner = a;
    if (uni(rng) < 0.6) {
      for (int j = i + 1; j < dim; ++j)
        if (ls.bar[order[j]] < 0) {
          partner = order[j];
          break;
        }
    }
    ls.bar[a] = partner;
    ls.bar[partner] = a;
  }
  ls.masses.assign(dim, 0.0);
  ls.conj_sign.assign(dim, 1.0);
  for (int a = 0; a < dim; ++a) {
    if (ls.masses[a] > 0.0) continue;
    double m = 0.5 + 2.0 * uni(rng);
    double sg = uni(rng) < 0.5 ? 1.0 : -1.0;
    ls.masses[a] = ls.masses[ls.bar[a]] = m;
    ls.conj_sign[a] = ls.conj_sign[ls.bar[a]] = sg;
  }
  ls.symmetry = SymmetryTag::Trivial;

  // Coefficient orbits of the constraint maps (a,b) -> (bar b, a) and
  // (a,b) -> (bar a, bar b) carrying the same value, with the transpose
  // carrying the conjugate.  An orbit meeting its own transpose forces a
  // real value, which must then be a sign; otherwise a free phase.
  Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<std::vector<int>> parity(dim, std::vector<int>(dim, -1));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      if (parity[a][b] >= 0) continue;
      std::vector<std::pair<int, int>> queue = {{a, b}};
      std::vector<std::pair<int, int>> plus, minus;
      parity[a][b] = 0;
      bool forced_real = false;
      while (!queue.empty()) {
        auto [x, y] = queue.back();
        queue.pop_back();
        int p = parity[x][y];
        (p == 0 ? plus : minus).push_back({x, y});
        std::pair<int, int> next[3] = {
            {ls.bar[y], x}, {ls.bar[x], ls.bar[y]}, {y, x}};
        for (int k = 0; k < 3; ++k) {
          auto [nx, ny] = next[k];
          int np = (k == 2) ? 1 - p : p;
          if (parity[nx][ny] < 0) {
            parity[nx][ny] = np;
            queue.push_back({nx, ny});
          } else if (parity[nx][ny] != np) {
            forced_real = true;
          }
        }
      }
      Complex v = forced_real ? Complex(uni(rng) < 0.5 ? 1.0 : -1.0)
                              : std::exp(2.0 * kPi * kI * uni(rng));
      for (auto [x, y] : plus) coeff(x, y) = v;
      for (auto [x, y] : minus) coeff(x, y) = std::conj(v);
    }

  ConstantMatrixParams out;
  out.space = ls;
  out.coeff = coeff;
  return out;
}

SFunctionSpec make_free_model(int epsilon, double mass) {
  return {ScalarFactorList{epsilon, {}, mass}};
}

SFunctionSpec make_sinh_gordon_model(Complex b, double mass) {
  if (std::abs(b.imag()) < 1e-12)
    return {ScalarFactorList{1, {Complex(b.real(), 0.0)}, mass}};
  return {ScalarFactorList{1, {b, std::conj(b)}, mass}};
}

SFunctionSpec make_scalar_product_model(int epsilon, std::vector<Complex> b,
                                        double mass) {
  return {ScalarFactorList{epsilon, std::move(b), mass}};
}

SFunctionSpec make_gbd_model(std::vector<Complex> b, double mass) {
  return {GbdParams{std::move(b), mass}};
}

SFunctionSpec make_federbush_model(double m1, double m2, double lambda) {
  return {FederbushParams{m1, m2, lambda}};
}

SFunctionSpec make_nls_model(int n, double mass) {
  return {NlsParams{n, mass}};
}

SFunctionSpec make_ising_model(double mass) {
  return {ScalarFactorList{-1, {}, mass}};
}

}  // namespace qei
