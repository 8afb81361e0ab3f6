#include "jspec/qhyper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jspec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log (a;q)_inf summed factor by factor; the factor with index `skip` is left
// out. A vanishing factor gives real part -inf.
Complex log_qpoch(Complex a, double q, long skip = -1) {
  Complex s = 0.0;
  double qi = 1.0;
  for (long i = 0; i < 100000; ++i) {
    const Complex t = a * qi;
    if (std::abs(t) < 1e-17) return s;
    if (i != skip) {
      const Complex f = 1.0 - t;
      if (f == Complex(0.0)) return {kNegInf, 0.0};
      s += std::log(f);
    }
    qi *= q;
  }
  throw NoConvergence("q-Pochhammer product did not terminate");
}

bool is_zero_log(Complex l) { return std::isinf(l.real()) && l.real() < 0.0; }

// log 2phi1(A, B; C; q, z) by Heine's transformation
//   2phi1 = (C/B;q)_inf / ((C;q)_inf (z;q)_inf)
//           sum_n (ABz/C;q)_n (B;q)_n / (q;q)_n (Bzq^n;q)_inf (C/B)^n,
// which converges for every z once |C/B| < 1.
Complex log_heine(Complex A, Complex B, Complex C, double q, Complex z) {
  if (std::abs(C / A) < std::abs(C / B)) std::swap(A, B);
  const Complex ratio = C / B;
  const Complex lc = log_qpoch(C, q);
  if (is_zero_log(lc)) throw PoleError("2phi1: lower parameter in q^{-N}");
  const Complex lz = log_qpoch(z, q);
  if (is_zero_log(lz)) throw PoleError("2phi1: Heine form singular at z in q^{-N}");
  const Complex bz = B * z;
  // When Bz lies in q^{-N} the products (Bzq^n;q)_inf vanish for n <= N and
  // the sum starts at the first non-vanishing one. Bz within rounding of
  // q^{-N} is taken to be on the lattice, and the factors 1 - Bz q^{n-1} are
  // then formed from exact powers of q.
  const double lq = std::log(q);
  long lattice = 1;  // N with Bz = q^N, or 1 when Bz is off the lattice
  if (bz.real() > 0.0 && std::abs(bz.imag()) <= 1e-14 * bz.real()) {
    const double m = std::log(bz.real()) / lq;
    const double mr = std::round(m);
    if (mr <= 0.0 && std::abs(m - mr) <= 1e-10 * std::max(1.0, std::abs(mr))) {
      lattice = static_cast<long>(mr);
    }
  }
  long n0 = 0;
  Complex lref;
  if (lattice <= 0) {
    n0 = 1 - lattice;
    lref = log_qpoch(q, q);
  } else {
    lref = log_qpoch(bz, q);
    while (is_zero_log(lref)) {
      if (++n0 > 10000) throw PoleError("2phi1: degenerate Heine form");
      lref = log_qpoch(bz * std::pow(q, static_cast<double>(n0)), q);
    }
  }
  const Complex abzc = A * B * z / C;

  Complex sum = 0.0;
  Complex t = 1.0;  // (ABz/C;q)_n (B;q)_n / (q;q)_n (C/B)^n
  Complex pr = 1.0;  // (Bzq^n;q)_inf / (Bzq^{n0};q)_inf
  double qn = 1.0;  // q^n
  int small = 0;
  for (long n = 0; n < 20000; ++n) {
    if (n >= n0) {
      if (n > n0) {
        pr /= lattice <= 0 ? Complex(-std::expm1(static_cast<double>(lattice + n - 1) * lq))
                           : 1.0 - bz * (qn / q);
      }
      const Complex term = t * pr;
      sum += term;
      if (n > n0 && std::abs(term) <= 1e-17 * std::abs(sum)) {
        if (++small >= 2) return log_qpoch(ratio, q) - lc - lz + lref + std::log(sum);
      } else {
        small = 0;
      }
    }
    t *= (1.0 - abzc * qn) * (1.0 - B * qn) / (1.0 - qn * q) * ratio;
    qn *= q;
  }
  throw NoConvergence("2phi1: Heine series did not converge");
}

// log 2phi1 by whichever of the direct series and Heine's form has the
// smaller argument.
Complex log_phi21_any(Complex A, Complex B, Complex C, double q, Complex z) {
  const double heine_arg = std::min(std::abs(C / A), std::abs(C / B));
  if (std::abs(z) < std::min(heine_arg, 0.98)) return std::log(phi21(A, B, C, q, z));
  if (heine_arg < 0.98) return log_heine(A, B, C, q, z);
  if (std::abs(z) < 1.0) return std::log(phi21(A, B, C, q, z));
  throw DomainError("2phi1: argument outside the reach of the implemented series");
}

// 1 - q^e without cancellation for q near 1.
double one_minus_qpow(double q, double e) { return -std::expm1(e * std::log(q)); }

double coeff_a(const QParams& p, long k) {
  const double lq = std::log(p.q);
  const double e = -static_cast<double>(k);
  // q^{-k}/r and c q^{-k}/(d^2 r), with r < 0
  const double t1 = 1.0 + std::exp(e * lq - std::log(-p.r));
  const double t2 = 1.0 + std::exp(e * lq + std::log(p.c) - 2.0 * std::log(std::abs(p.d)) -
                                   std::log(-p.r));
  return 0.5 * std::sqrt(t1 * t2);
}

double coeff_b(const QParams& p, long k) {
  return std::exp(-static_cast<double>(k) * std::log(p.q)) * (p.c + p.q) / (2.0 * p.d * p.r);
}

// Ratios of the unweighted recurrence
//   alpha_k f_{k+1} + (b_k - mu) f_k + gamma_k f_{k-1} = 0.
double alpha(const QParams& p, long k) {
  return coeff_a(p, k) * weight_w(p, k + 1) / weight_w(p, k);
}

double gamma_coef(const QParams& p, long k) {
  return coeff_a(p, k - 1) * weight_w(p, k - 1) / weight_w(p, k);
}

Complex log_f(const QParams& p, Complex y, long k) {
  const Complex z = p.r * std::pow(p.q, static_cast<double>(k));
  return log_phi21_any(p.d * y, p.d / y, p.c, p.q, z);
}

Complex log_g(const QParams& p, Complex y, long k) {
  const double qc = p.q / p.c;
  const Complex z = p.r * std::pow(p.q, static_cast<double>(k));
  return log_phi21_any(qc * p.d * y, qc * p.d / y, p.q * qc, p.q, z) +
         static_cast<double>(k) * std::log(qc);
}

Complex log_F(const QParams& p, Complex y, long k) {
  const Complex z = std::pow(p.q, 1.0 - static_cast<double>(k)) * p.c / (p.d * p.d * p.r);
  const Complex dy = p.d * y;
  return log_phi21_any(dy, p.q * dy / p.c, p.q * y * y, p.q, z) -
         static_cast<double>(k) * std::log(dy);
}

bool direct_ok_f(const QParams& p, Complex y, long k) {
  const Complex dy = p.d * y;
  if (std::min(std::abs(p.c / dy), std::abs(p.c * y / p.d)) < 0.98) return true;
  return std::abs(p.r * std::pow(p.q, static_cast<double>(k))) < 0.5;
}

bool direct_ok_F(const QParams& p, Complex y, long k) {
  if (std::min(std::abs(p.q * y / p.d), std::abs(p.c * y / p.d)) < 0.98) return true;
  return std::abs(std::pow(p.q, 1.0 - static_cast<double>(k)) * p.c / (p.d * p.d * p.r)) < 0.5;
}

bool on_lattice(Complex y, Complex base, double q) {
  // y = base q^m for an integer m
  const Complex t = y / base;
  if (!(t.real() > 0.0) || std::abs(t.imag()) > 1e-12 * std::abs(t)) return false;
  const double m = std::log(t.real()) / std::log(q);
  return std::abs(m - std::round(m)) < 1e-10;
}

Complex log_c_skip(const QParams& p, Complex y, int which, long index) {
  const Complex dry = p.d * p.r * y;
  Complex num = log_qpoch(p.c / (p.d * y), p.q) + log_qpoch(p.d / y, p.q) +
                log_qpoch(dry, p.q, which == 1 ? index : -1) +
                log_qpoch(p.q / dry, p.q, which == 2 ? index : -1);
  const Complex den = log_qpoch(1.0 / (y * y), p.q) + log_qpoch(p.c, p.q) +
                      log_qpoch(p.r, p.q) + log_qpoch(p.q / p.r, p.q);
  if (is_zero_log(den)) throw PoleError("c_function: y^2 in q^Z");
  return num - den;
}

}  // namespace

void QParams::validate() const {
  if (!(std::isfinite(q) && std::isfinite(r) && std::isfinite(c) && std::isfinite(d))) {
    throw DomainError("qhyper: parameters must be finite");
  }
  if (!(q > 0.0 && q < 1.0)) throw DomainError("qhyper: need 0 < q < 1");
  if (!(r < 0.0)) throw DomainError("qhyper: need r < 0");
  if (!(c > 0.0)) throw DomainError("qhyper: need c > 0");
  if (d == 0.0) throw DomainError("qhyper: need d != 0");
}

bool QParams::theorem_regime() const { return std::abs(d) < 1.0 && std::abs(c / d) < 1.0; }

bool QParams::extension_regime() const { return c > q * q && c < 1.0; }

Complex mu(Complex y) { return 0.5 * (y + 1.0 / y); }

JacobiCoefficients q_coefficients(const QParams& p) {
  p.validate();
  return JacobiCoefficients([p](long k) { return coeff_a(p, k); },
                            [p](long k) { return coeff_b(p, k); }, IndexSet::FullLine, "qhyper");
}

double log_weight_w_sq(const QParams& p, long k) {
  p.validate();
  const double e = 1.0 - static_cast<double>(k);
  const double qe = std::pow(p.q, e);
  const double num = log_qpochhammer_inf_real(p.c * qe / (p.d * p.d * p.r), p.q);
  const double den = log_qpochhammer_inf_real(qe / p.r, p.q);
  return 2.0 * static_cast<double>(k) * std::log(std::abs(p.d)) + num - den;
}

double weight_w(const QParams& p, long k) {
  const double w = std::exp(0.5 * log_weight_w_sq(p, k));
  return (p.d < 0.0 && (k % 2 != 0)) ? -w : w;
}

Complex solution_f(const QParams& p, Complex y, long k) {
  p.validate();
  if (direct_ok_f(p, y, k)) return std::exp(log_f(p, y, k));
  // f is dominant towards -inf: recur downwards from where the series converges.
  long k0 = k;
  while (!direct_ok_f(p, y, k0)) ++k0;
  const Complex m = mu(y);
  Complex hi = std::exp(log_f(p, y, k0 + 1));
  Complex cur = std::exp(log_f(p, y, k0));
  for (long j = k0; j > k; --j) {
    const Complex lo = -(alpha(p, j) * hi + (coeff_b(p, j) - m) * cur) / gamma_coef(p, j);
    hi = cur;
    cur = lo;
  }
  return cur;
}

Complex solution_g(const QParams& p, Complex y, long k) {
  p.validate();
  return std::exp(log_g(p, y, k));
}

Complex solution_F(const QParams& p, Complex y, long k) {
  p.validate();
  if (direct_ok_F(p, y, k)) return std::exp(log_F(p, y, k));
  // F is dominant towards +inf for |y| < 1: recur upwards.
  long k0 = k;
  while (!direct_ok_F(p, y, k0)) --k0;
  const Complex m = mu(y);
  Complex lo = std::exp(log_F(p, y, k0 - 1));
  Complex cur = std::exp(log_F(p, y, k0));
  for (long j = k0; j < k; ++j) {
    const Complex hi = -((coeff_b(p, j) - m) * cur + gamma_coef(p, j) * lo) / alpha(p, j);
    lo = cur;
    cur = hi;
  }
  return cur;
}

SolutionVector weighted_f(const QParams& p, Complex y) {
  return SolutionVector([p, y](long k) { return weight_w(p, k) * solution_f(p, y, k); }, mu(y),
                        SummableEnd::Plus);
}

SolutionVector weighted_g(const QParams& p, Complex y) {
  return SolutionVector([p, y](long k) { return weight_w(p, k) * solution_g(p, y, k); }, mu(y),
                        SummableEnd::Neither);
}

SolutionVector weighted_F(const QParams& p, Complex y) {
  return SolutionVector([p, y](long k) { return weight_w(p, k) * solution_F(p, y, k); }, mu(y),
                        std::abs(y) < 1.0 ? SummableEnd::Minus : SummableEnd::Neither);
}

Complex log_c_function(const QParams& p, Complex y) {
  p.validate();
  if (y == Complex(0.0)) throw DomainError("c_function: y = 0");
  const Complex y2 = y * y;
  if (on_lattice(y2, 1.0, p.q)) throw PoleError("c_function: y^2 in q^Z");
  return log_c_skip(p, y, 0, -1);
}

Complex c_function(const QParams& p, Complex y) {
  const Complex l = log_c_function(p, y);
  if (is_zero_log(l)) return 0.0;
  return std::exp(l);
}

QWronskians q_wronskians(const QParams& p, Complex y) {
  if (std::abs(y - 1.0) < 1e-14 || std::abs(y + 1.0) < 1e-14) {
    throw DegenerateWronskian("q_wronskians: y = +-1");
  }
  const Complex s = 1.0 / y - y;
  return {0.5 * s, -0.5 * c_function(p, 1.0 / y) * s};
}

double continuous_density_chi(const QParams& p, double chi) {
  const Complex l = log_c_function(p, std::polar(1.0, chi));
  return std::exp(-2.0 * l.real()) / (2.0 * kPi);
}

long q_atom_p_max(const QParams& p) {
  p.validate();
  // |q^p/(dr)| > 1  <=>  p < log|dr| / log q
  const double bound = std::log(std::abs(p.d * p.r)) / std::log(p.q);
  return static_cast<long>(std::ceil(bound)) - 1;
}

QAtom q_atom(const QParams& p, long index, const QSpectralOptions& opts) {
  p.validate();
  if (index < 0) throw IndexError("q_atom: negative index");
  const long pp = q_atom_p_max(p) - index;
  const double yp = std::pow(p.q, static_cast<double>(pp)) / (p.d * p.r);

  // A double zero of c, or a zero shared by c(y) and c(1/y), breaks the
  // residue formula.
  const Complex y(yp, 0.0);
  const bool bad = on_lattice(y, p.d, p.q) || on_lattice(y, p.c / p.d, p.q) ||
                   on_lattice(y, p.d * p.r, p.q) || on_lattice(y, 1.0 / p.d, p.q) ||
                   on_lattice(y, p.d / p.c, p.q);
  if (bad) throw RegularityError("spectral_measure: coinciding zeros of the c-function");

  const double rho = opts.contour_radius * std::abs(yp);
  Complex res = 0.0;
  for (int j = 0; j < opts.contour_nodes; ++j) {
    const Complex dz = std::polar(rho, 2.0 * kPi * j / opts.contour_nodes);
    const Complex yy = y + dz;
    const Complex l = -log_c_function(p, 1.0 / yy) - log_c_function(p, yy) - std::log(yy);
    res += std::exp(l) * dz;
  }
  res /= static_cast<double>(opts.contour_nodes);

  const Complex linv = log_c_function(p, 1.0 / y);
  if (is_zero_log(linv)) throw RegularityError("spectral_measure: c(1/y) vanishes at an atom");
  const int which = pp <= 0 ? 1 : 2;
  const long fi = pp <= 0 ? -pp : pp - 1;
  const Complex lrem = log_c_skip(p, y, which, fi);
  const double sgn = pp <= 0 ? -1.0 : 1.0;
  const Complex check = sgn * std::exp(-linv - lrem);

  QAtom a{pp, y, mu(y).real(), res.real(), check.real()};
  const double tol = 1e-6 * std::abs(check);
  if (!(std::abs(res - check) <= tol) || !(a.mass > 0.0)) {
    throw RegularityError("spectral_measure: residue at q^" + std::to_string(pp) +
                          "/dr is not a simple positive pole");
  }
  return a;
}

QSpectralResult spectral_measure(const QParams& p, const QSpectralOptions& opts) {
  p.validate();
  if (!p.theorem_regime()) {
    throw DomainError("spectral_measure: needs |d| < 1 and |c/d| < 1");
  }
  QSpectralResult out;
  out.extension_dependent = p.extension_regime();

  const double w0sq = std::exp(log_weight_w_sq(p, 0));
  const QuadratureRule gl = gauss_legendre(opts.quad_nodes);
  double cont = 0.0;
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double chi = 0.5 * kPi * (gl.nodes[j] + 1.0);
    const double f0 = solution_f(p, std::polar(1.0, chi), 0).real();
    cont += 0.5 * kPi * gl.weights[j] * continuous_density_chi(p, chi) * f0 * f0;
  }
  out.continuous_mass = w0sq * cont;

  double total = out.continuous_mass;
  for (long i = 0; i < opts.atom_cap; ++i) {
    const QAtom a = q_atom(p, i, opts);
    const double f0 = solution_f(p, a.y, 0).real();
    const double m = w0sq * a.mass * f0 * f0;
    out.atoms.push_back(a);
    out.measure.atoms.push_back({a.location, m});
    total += m;
    if (m < 1e-14 * total) break;
  }
  out.measure.continuous = ContinuousPart{
      -1.0, 1.0, [p, w0sq](double x) {
        if (!(x > -1.0 && x < 1.0)) return 0.0;
        const double chi = std::acos(x);
        const double f0 = solution_f(p, std::polar(1.0, chi), 0).real();
        return w0sq * continuous_density_chi(p, chi) * f0 * f0 / std::sin(chi);
      }};
  out.measure.total_mass_estimate = total;
  out.measure.note = "spectral measure of e_0";
  if (out.extension_dependent) {
    out.measure.note += "; extension-dependent regime q^2 < c < 1";
  }
  return out;
}

QOrthogonalityResult verify_q_orthogonality(const QParams& p, long k, long l, int quad_nodes,
                                            long atom_cap) {
  p.validate();
  if (!p.theorem_regime()) {
    throw DomainError("verify_q_orthogonality: needs |d| < 1 and |c/d| < 1");
  }
  const QuadratureRule gl = gauss_legendre(quad_nodes);
  double cont = 0.0;
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double chi = 0.5 * kPi * (gl.nodes[j] + 1.0);
    const Complex y = std::polar(1.0, chi);
    const double fk = solution_f(p, y, k).real();
    const double fl = k == l ? fk : solution_f(p, y, l).real();
    cont += 0.5 * kPi * gl.weights[j] * continuous_density_chi(p, chi) * fk * fl;
  }

  const double wk = weight_w(p, k);
  const double wl = weight_w(p, l);
  const double scale0 = 1.0 / std::abs(wk * wl);
  double disc = 0.0;
  double mag = std::abs(cont);
  long used = 0;
  int small = 0;
  bool settled = false;
  for (long i = 0; i < atom_cap; ++i) {
    const QAtom a = q_atom(p, i);
    const Complex lk = log_f(p, a.y, k);
    const Complex ll = log_f(p, a.y, l);
    const Complex t = std::exp(std::log(a.mass) + lk + ll);
    disc += t.real();
    mag += std::abs(t.real());
    ++used;
    if (std::abs(t.real()) < 1e-16 * std::max(mag, scale0)) {
      if (++small >= 3) {
        settled = true;
        break;
      }
    } else {
      small = 0;
    }
  }
  if (!settled) {
    throw NoConvergence("verify_q_orthogonality: atom sum not settled within atom_cap atoms");
  }
  const double target = k == l ? std::exp(-log_weight_w_sq(p, k)) : 0.0;
  return {cont + disc, target, cont, disc, used};
}

ABValues ab_expansion(const QParams& p, Complex y) {
  p.validate();
  const double q = p.q, c = p.c, d = p.d, r = p.r;
  auto P = [q](Complex a) { return qpochhammer_inf(a, q); };
  const Complex common = P(q * y * y) * P(q * c / (d * d * r)) * P(d * d * r / c);
  const Complex den_a = common * P(q / c);
  const Complex den_b = common * P(c / q);
  if (std::abs(den_a) == 0.0 || std::abs(den_b) == 0.0) {
    throw PoleError("ab_expansion: denominator vanishes");
  }
  const Complex a = P(q * d * y / c) * P(q * y / d) * P(q * c * y / (d * r)) *
                    P(d * r / (c * y)) / den_a;
  const Complex b = P(d * y) * P(c * y / d) * P(q * q * y / (d * r)) * P(d * r / (y * q)) / den_b;
  return {a, b};
}

double limit_wronskian_fg(const QParams& p) {
  p.validate();
  const double q = p.q;
  auto theta = [q](double x) {
    return log_qpochhammer_inf_real(x, q) + log_qpochhammer_inf_real(q / x, q);
  };
  const double x = p.c * q / (p.d * p.d * p.r);
  const double ratio = std::exp(theta(x) - theta(q / p.r));
  const double sgn = p.d < 0.0 ? -1.0 : 1.0;
  return 0.5 * sgn * std::abs(p.c / (p.d * p.r)) * (1.0 - q / p.c) * ratio;
}

Complex limit_wronskian_fF(const QParams& p, Complex y) {
  return ab_expansion(p, y).b * limit_wronskian_fg(p);
}

JacobiCoefficients limit_coefficients(double s, double eps, double lambda, double q) {
  if (!(s > 1.0) || !std::isfinite(s)) {
    throw DomainError("limit: needs s > 1 (s + 1/s > 2); other regimes are not implemented");
  }
  if (!(q > 0.0 && q < 1.0)) throw DomainError("limit: needs 0 < q < 1");
  if (!(std::isfinite(eps) && std::isfinite(lambda))) {
    throw DomainError("limit: eps and lambda must be finite");
  }
  const double scale = 1.0 - q;
  auto a = [=](long k) {
    const double t1 = one_minus_qpow(q, k + 1.0 + eps + lambda);
    const double t2 = one_minus_qpow(q, k + eps - lambda);
    return std::sqrt(t1 * t2) / scale;
  };
  auto b = [=](long k) { return -(s + 1.0 / s) * one_minus_qpow(q, k + eps) / scale; };
  return JacobiCoefficients(a, b, IndexSet::FullLine, "qhyper-limit");
}

std::vector<LimitPoint> limit_scan(double s, double eps, double lambda,
                                   const std::vector<double>& q_list, long p, long window) {
  if (window < 1) throw DomainError("limit_scan: window must be positive");
  const double predicted = (p + eps - 1.0) * (1.0 / s - s);
  std::vector<LimitPoint> out;
  for (double q : q_list) {
    const JacobiCoefficients L = limit_coefficients(s, eps, lambda, q);
    const std::vector<EigenPair> eig = eigen(truncate_doubly(L, window, window));
    double best = eig.front().value;
    for (const EigenPair& e : eig) {
      if (std::abs(e.value - predicted) < std::abs(best - predicted)) best = e.value;
    }
    const double e1 = p - 1.0 + eps;
    const double exact =
        (s * std::expm1(e1 * std::log(q)) + std::expm1(-e1 * std::log(q)) / s) / (1.0 - q);
    out.push_back({q, best, predicted, exact, std::abs(best - predicted)});
  }
  return out;
}

}  // namespace jspec
