#include "manin/periods.hpp"

#include "manin/invariants.hpp"

#include <cmath>
#include <numbers>

namespace manin {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

long double to_ld(const Integer& x) { return static_cast<long double>(x.get_d()); }

long double agm(long double a, long double b) {
  for (int i = 0; i < 200; ++i) {
    if (std::fabs(a - b) <= 1e-18L * std::fabs(a)) return (a + b) / 2;
    const long double an = (a + b) / 2, bn = std::sqrt(a * b);
    a = an;
    b = bn;
  }
  throw PrecisionError("agm: no convergence within the iteration cap");
}

// Real roots of 4x^3 + b2 x^2 + 2 b4 x + b6, refined by Newton's method.
std::vector<long double> real_roots(long double b2, long double b4, long double b6) {
  auto f = [&](long double x) { return ((4 * x + b2) * x + 2 * b4) * x + b6; };
  auto df = [&](long double x) { return (12 * x + 2 * b2) * x + 2 * b4; };
  // Depressed cubic t^3 + p t + q with x = t - b2/12.
  const long double a = b2 / 4, b = b4 / 2, c = b6 / 4;
  const long double p = b - a * a / 3, q = 2 * a * a * a / 27 - a * b / 3 + c;
  const long double disc = q * q / 4 + p * p * p / 27;
  std::vector<long double> roots;
  if (disc > 0) {
    const long double s = std::sqrt(disc);
    roots.push_back(std::cbrt(-q / 2 + s) + std::cbrt(-q / 2 - s) - a / 3);
  } else {
    const long double r = std::sqrt(-p / 3);
    const long double phi = std::acos(std::clamp(-q / (2 * r * r * r), -1.0L, 1.0L));
    for (int k = 0; k < 3; ++k) roots.push_back(2 * r * std::cos((phi - 2 * kPi * k) / 3) - a / 3);
  }
  for (auto& x : roots)
    for (int i = 0; i < 50; ++i) {
      const long double d = df(x);
      if (d == 0) break;
      const long double step = f(x) / d;
      x -= step;
      if (std::fabs(step) <= 1e-19L * std::max(1.0L, std::fabs(x))) break;
    }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

Complex series(const std::vector<long double>& coeff, Complex tau) {
  // sum_{n >= 1} coeff[n] q^n
  const Complex q = std::exp(Complex(0, 2 * kPi) * tau);
  Complex acc = 0, qn = 1;
  for (std::size_t n = 1; n < coeff.size(); ++n) {
    qn *= q;
    acc += coeff[n] * qn;
  }
  return acc;
}

}  // namespace

PeriodLattice normalize_lattice(Complex w1, Complex w2, long double precision) {
  // Gauss reduction.
  auto norm = [](Complex z) { return std::norm(z); };
  for (int i = 0; i < 100; ++i) {
    if (norm(w1) > norm(w2)) std::swap(w1, w2);
    const long double mu = std::round((w2 * std::conj(w1)).real() / norm(w1));
    if (mu == 0) break;
    w2 -= mu * w1;
  }
  const long double covol = std::abs(w1.real() * w2.imag() - w1.imag() * w2.real());
  const long double scale = std::sqrt(covol);
  // Smallest positive real element among short combinations.
  long double omega = 0;
  for (int m = -4; m <= 4; ++m)
    for (int n = -4; n <= 4; ++n) {
      const Complex z = static_cast<long double>(m) * w1 + static_cast<long double>(n) * w2;
      if (z.real() > 1e-6L * scale && std::fabs(z.imag()) < 1e-6L * scale && (omega == 0 || z.real() < omega))
        omega = z.real();
    }
  if (omega == 0) throw InconsistencyError("normalize_lattice: lattice is not stable under complex conjugation");
  const long double height = covol / omega;  // imaginary part of a generator over the real line
  PeriodLattice out;
  out.omega1 = omega;
  out.precision = precision;
  // Rectangular iff i*height is a lattice vector.
  bool rect = false;
  for (int m = -4; m <= 4 && !rect; ++m)
    for (int n = -4; n <= 4 && !rect; ++n) {
      const Complex z = static_cast<long double>(m) * w1 + static_cast<long double>(n) * w2;
      if (std::fabs(z.real()) < 1e-6L * scale && std::fabs(std::fabs(z.imag()) - height) < 1e-6L * scale) rect = true;
    }
  out.rectangular = rect;
  out.omega2 = rect ? Complex(0, height) : Complex(omega / 2, height);
  return out;
}

std::pair<Complex, Complex> lattice_invariants(const PeriodLattice& l) {
  const Complex tau = l.omega2 / l.omega1;
  const Complex q = std::exp(Complex(0, 2 * kPi) * tau);
  Complex e4 = 1, e6 = 1, qn = 1;
  for (int n = 1; n < 400; ++n) {
    qn *= q;
    long double s3 = 0, s5 = 0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) {
        s3 += std::pow(static_cast<long double>(d), 3);
        s5 += std::pow(static_cast<long double>(d), 5);
      }
    e4 += 240 * s3 * qn;
    e6 -= 504 * s5 * qn;
    if (std::abs(qn) * std::pow(static_cast<long double>(n), 6) < 1e-30L) break;
  }
  const Complex w = 2 * kPi / l.omega1;
  return {w * w * w * w * e4 / 12.0L, w * w * w * w * w * w * e6 / 216.0L};
}

PeriodLattice elliptic_period_lattice(const MinimalModel& m, long double tol) {
  if (!(tol > 0)) throw std::invalid_argument("elliptic_period_lattice: tol must be positive");
  const long double b2 = to_ld(m.b2()), b4 = to_ld(m.b4()), b6 = to_ld(m.b6());
  const auto roots = real_roots(b2, b4, b6);
  Complex w1, w2;
  if (m.delta > 0) {
    if (roots.size() != 3) throw PrecisionError("elliptic_period_lattice: expected three real roots");
    const long double e1 = roots[0], e2 = roots[1], e3 = roots[2];
    w1 = kPi / agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2));
    w2 = Complex(0, kPi / agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3)));
  } else {
    const long double e1 = roots[0];
    const long double beta = std::sqrt(3 * e1 * e1 + b2 * e1 / 2 + b4 / 2);
    const long double alpha = 3 * e1 + b2 / 4;
    const long double r = 2 * kPi / agm(2 * std::sqrt(beta), std::sqrt(2 * beta + alpha));
    w1 = r;
    w2 = Complex(-r / 2, kPi / agm(2 * std::sqrt(beta), std::sqrt(2 * beta - alpha)));
  }
  return normalize_lattice(w1, w2, tol);
}

NewformPeriods newform_period_lattice(const ModSymSpace& s, const RationalNewform& f, const EigenData& e, long double tol,
                                      double terms_scale, std::int64_t term_cap) {
  if (!(tol > 0)) throw std::invalid_argument("newform_period_lattice: tol must be positive");
  const std::int64_t n = s.level();
  // Classes {0, gamma(0)} for gamma in Gamma0(N), by increasing lower-left entry,
  // until their images generate L / L_perp = Z^2.
  const IntMatrix restricted = s.cuspidal_lattice().basis() * e.functionals;
  const Lattice k = saturate_rows(IntMatrix(restricted.transpose()), restricted.rows());
  struct Path {
    Mat2 g;
    IntRow image;
  };
  std::vector<Path> paths;
  IntMatrix images(0, 2);
  bool done = false;
  for (std::int64_t c = n; !done && c <= 64 * n; c += n) {
    for (std::int64_t d = 1; d < c && !done; ++d) {
      if (gcd64(c, d) != 1) continue;
      std::int64_t x = 0, y = 0;
      xgcd64(d, c, x, y);  // x d + y c = 1 -> a = x, b = -y
      const Mat2 g{x, -y, c, d};
      const IntRow sym = s.modular_symbol(Cusp::make(0, 1), Cusp::make(g.b, g.d));
      const auto coords = s.cuspidal_lattice().coordinates(sym);
      if (!coords) throw std::logic_error("newform_period_lattice: {0, g0} is not a cycle");
      const IntRow q = *coords * k.basis().transpose();
      if (q.isZero()) continue;
      paths.push_back({g, q});
      images.conservativeResize(images.rows() + 1, 2);
      images.row(images.rows() - 1) = q;
      const IntMatrix h = hnf(images);
      done = h.rows() == 2 && h(0, 0) == 1 && h(1, 1) == 1;
    }
  }
  if (!done) throw std::logic_error("newform_period_lattice: could not generate L / L_perp");

  std::int64_t cmax = 0;
  for (const auto& p : paths) cmax = std::max(cmax, p.g.c);
  const long double r = std::exp(-2 * kPi / static_cast<long double>(cmax));
  // Tail of sum |a_n / n| r^n with |a_n| <= 2 sqrt(n) d(n)/2 <= 2n: bound 2 r^(M+1) / (1 - r) per evaluation.
  const long double target = tol / 8;
  auto needed = static_cast<std::int64_t>(std::ceil(std::log(target * (1 - r) / 4) / std::log(r)));
  needed = static_cast<std::int64_t>(std::ceil(static_cast<double>(needed) * terms_scale));
  if (needed > term_cap)
    throw PrecisionError("newform_period_lattice: " + std::to_string(needed) + " terms needed, cap is " +
                         std::to_string(term_cap));

  RationalNewform full = f;
  extend_ap(s, e, full, needed);
  const auto a = an_list(full, needed);
  std::vector<long double> coeff(a.size(), 0);
  for (std::size_t i = 1; i < a.size(); ++i) coeff[i] = static_cast<long double>(a[i].get_d()) / static_cast<long double>(i);

  std::vector<Complex> period(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Mat2& g = paths[i].g;
    const Complex z(-static_cast<long double>(g.d) / g.c, 1.0L / g.c);
    const Complex gz = (static_cast<long double>(g.a) * z + static_cast<long double>(g.b)) /
                       (static_cast<long double>(g.c) * z + static_cast<long double>(g.d));
    period[i] = series(coeff, gz) - series(coeff, z);
  }
  const HnfTransform ht = hnf_with_transform(images);
  Complex w[2];
  for (int j = 0; j < 2; ++j) {
    w[j] = 0;
    for (std::size_t i = 0; i < paths.size(); ++i)
      w[j] += static_cast<long double>(ht.u(j, static_cast<Eigen::Index>(i)).get_d()) * period[i];
  }
  NewformPeriods out;
  out.lattice = normalize_lattice(w[0], w[1], tol);
  out.terms = needed;
  out.min_imag = 1.0L / static_cast<long double>(cmax);
  return out;
}

NewformPeriods newform_period_lattice(const ModSymSpace& s, const RationalNewform& f, long double tol) {
  return newform_period_lattice(s, f, eigen_data(s, f), tol);
}

ManinConstantNumeric manin_constant_numeric(const PeriodLattice& e, const PeriodLattice& f, long double tol) {
  if (!(tol > 0)) throw std::invalid_argument("manin_constant_numeric: tol must be positive");
  ManinConstantNumeric out;
  out.ratio = std::sqrt(e.covolume() / f.covolume());
  const long double nearest = std::round(out.ratio);
  out.residual = std::fabs(out.ratio - nearest);
  if (nearest >= 1) {
    // c f-basis expressed in the E-basis must be an integral unimodular matrix.
    const long double det = e.omega1.real() * e.omega2.imag() - e.omega1.imag() * e.omega2.real();
    for (const Complex& v : {f.omega1, f.omega2}) {
      const Complex cv = nearest * v;
      const long double x = (cv.real() * e.omega2.imag() - cv.imag() * e.omega2.real()) / det;
      const long double y = (e.omega1.real() * cv.imag() - e.omega1.imag() * cv.real()) / det;
      out.residual = std::max({out.residual, std::fabs(x - std::round(x)), std::fabs(y - std::round(y))});
    }
  }
  if (nearest < 1 || out.residual >= tol)
    throw InconsistencyError("manin_constant_numeric: ratio " + std::to_string(static_cast<double>(out.ratio)) +
                             " is not within tolerance of a nonzero integer");
  out.value = static_cast<long>(nearest);
  return out;
}

}  // namespace manin
