#include "jspec/specialfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace jspec {

namespace {

// Lanczos coefficients for g = 607/128, 15 terms.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,
    .15808870322491248884e-3,   -.21026444172410488319e-3,
    .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,
    .36899182659531622704e-5};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * kPi);

Complex log_gamma_right(Complex z) {
  z -= 1.0;
  Complex x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    x += kLanczos[i] / (z + static_cast<double>(i));
  }
  const Complex t = z + kLanczosG + 0.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z) for Im z >= 0, on the branch that is analytic in the upper
// half plane and real on (0, 1).
Complex log_sin_pi_upper(Complex z) {
  const Complex i(0.0, 1.0);
  const Complex e = std::exp(2.0 * kPi * i * z);
  return -kPi * i * z + std::log(0.5 * i) + std::log(1.0 - e);
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Snap c to the nearest non-positive integer when it is within rounding of it.
bool near_nonpositive_integer(Complex c, int& m) {
  const double r = std::round(c.real());
  if (r > 0.0) return false;
  const double tol = 1e-13 * std::max(1.0, std::abs(r));
  if (std::abs(c.real() - r) <= tol && std::abs(c.imag()) <= tol) {
    m = static_cast<int>(-r);
    return true;
  }
  return false;
}

// Direct 2F1 series; c must not be a non-positive integer.
Complex hyp2f1_series(Complex a, Complex b, Complex c, Complex x,
                      const SeriesControl& ctl) {
  Complex sum = 1.0;
  Complex term = 1.0;
  int small_run = 0;
  for (int n = 0; n < ctl.max_terms; ++n) {
    const double dn = static_cast<double>(n);
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * x;
    sum += term;
    if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
      if (++small_run >= 2) return sum;
    } else {
      small_run = 0;
    }
  }
  throw NoConvergence("hyp2f1: series did not converge within max_terms");
}

// log of the regularized series F(a,b;c;x)/Gamma(c) at |x| < 1.
Complex log_hyp2f1_regularized_direct(Complex a, Complex b, Complex c,
                                      Complex x, const SeriesControl& ctl) {
  int m = 0;
  if (near_nonpositive_integer(c, m)) {
    // F/Gamma(c) at c = -m starts at the (m+1)-th term.
    Complex log_pre = (m + 1.0) * std::log(x) - std::lgamma(m + 2.0);
    for (int j = 0; j <= m; ++j) {
      log_pre += std::log(a + static_cast<double>(j)) +
                 std::log(b + static_cast<double>(j));
    }
    if (!finite(log_pre)) return Complex(-std::numeric_limits<double>::infinity(), 0.0);
    const double shift = m + 1.0;
    return log_pre + std::log(hyp2f1_series(a + shift, b + shift, Complex(m + 2.0, 0.0), x, ctl));
  }
  return std::log(hyp2f1_series(a, b, c, x, ctl)) - log_gamma(c);
}

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("SeriesControl: rel_tol must be positive");
  if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be at least 1");
}

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

Complex log_gamma(Complex z) {
  if (!finite(z)) throw DomainError("log_gamma: non-finite argument");
  if (is_nonpositive_integer(z)) {
    throw PoleError("log_gamma: pole at non-positive integer " + std::to_string(z.real()));
  }
  if (z.real() >= 0.5) return log_gamma_right(z);
  if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
  // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
  return std::log(kPi) - log_sin_pi_upper(z) - log_gamma_right(1.0 - z);
}

Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

Complex rgamma(Complex z) {
  if (is_nonpositive_integer(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

Complex cpow(Complex w, Complex s) {
  if (w == Complex(0.0, 0.0)) {
    if (s.real() > 0.0) return 0.0;
    if (s == Complex(0.0, 0.0)) return 1.0;
    throw DomainError("cpow: zero base with non-positive exponent");
  }
  return std::exp(s * std::log(w));
}

Complex pochhammer(Complex a, int k) {
  if (k < 0) throw DomainError("pochhammer: k must be non-negative");
  constexpr int kProductLimit = 64;
  const bool hits_zero = is_nonpositive_integer(a) && -a.real() < k;
  if (k <= kProductLimit || hits_zero || is_nonpositive_integer(a)) {
    Complex p = 1.0;
    for (int i = 0; i < k; ++i) {
      p *= a + static_cast<double>(i);
      if (p == Complex(0.0, 0.0)) return p;
    }
    return p;
  }
  return std::exp(log_gamma(a + static_cast<double>(k)) - log_gamma(a));
}

Complex hyp2f1(Complex a, Complex b, Complex c, Complex x, const SeriesControl& ctl) {
  ctl.validate();
  if (is_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a non-positive integer");
  if (!(std::abs(x) < 1.0)) throw DomainError("hyp2f1: direct series needs |x| < 1");
  if (x == Complex(0.0, 0.0)) return 1.0;
  return hyp2f1_series(a, b, c, x, ctl);
}

Complex hyp2f1_euler(Complex a, Complex b, Complex c, Complex x, const SeriesControl& ctl) {
  return cpow(1.0 - x, c - a - b) * hyp2f1(c - a, c - b, c, x, ctl);
}

Complex hyp2f1_pfaff(Complex a, Complex b, Complex c, Complex x, const SeriesControl& ctl) {
  if (x.imag() == 0.0 && x.real() >= 1.0) throw DomainError("hyp2f1_pfaff: x on the cut");
  return cpow(1.0 - x, -a) * hyp2f1(a, c - b, c, x / (x - 1.0), ctl);
}

Complex log_hyp2f1_regularized(Complex a, Complex b, Complex c, Complex x,
                               const SeriesControl& ctl) {
  ctl.validate();
  if (x.imag() == 0.0 && x.real() >= 1.0) {
    throw DomainError("hyp2f1_regularized: argument on the cut [1, inf)");
  }
  if (x == Complex(0.0, 0.0)) {
    return is_nonpositive_integer(c) ? Complex(-std::numeric_limits<double>::infinity(), 0.0)
                                     : -log_gamma(c);
  }
  const Complex xp = x / (x - 1.0);
  if (std::abs(x) <= std::abs(xp)) {
    if (!(std::abs(x) < 1.0)) throw DomainError("hyp2f1_regularized: no convergent form");
    return log_hyp2f1_regularized_direct(a, b, c, x, ctl);
  }
  if (!(std::abs(xp) < 1.0)) throw DomainError("hyp2f1_regularized: no convergent form");
  return -a * std::log(1.0 - x) + log_hyp2f1_regularized_direct(a, c - b, c, xp, ctl);
}

Complex hyp2f1_regularized(Complex a, Complex b, Complex c, Complex x,
                           const SeriesControl& ctl) {
  return std::exp(log_hyp2f1_regularized(a, b, c, x, ctl));
}

Complex log_hyp2f1_reflected_regularized(Complex a, Complex b, Complex g, Complex x,
                                         const SeriesControl& ctl) {
  // 2F1(a,b;g;1-x)/Gamma(g)
  //   = pi/sin(pi c) [ F~(a,b;c;x)/(Gamma(g-a)Gamma(g-b))
  //                    - x^{1-c}(1-x)^{c-a-b} F~(1-a,1-b;2-c;x)/(Gamma(a)Gamma(b)) ]
  // with c = a + b + 1 - g.
  const Complex c = a + b + 1.0 - g;
  const double rc = std::round(c.real());
  if (c.imag() == 0.0 && c.real() == rc) {
    throw PoleError("hyp2f1_reflected: a + b - g is an integer");
  }
  const Complex log_pre = std::log(kPi) - std::log(std::sin(kPi * c));
  const auto log_rgamma = [](Complex z) {
    return is_nonpositive_integer(z) ? Complex(-std::numeric_limits<double>::infinity(), 0.0)
                                     : -log_gamma(z);
  };
  const Complex l1 = log_hyp2f1_regularized(a, b, c, x, ctl) + log_rgamma(g - a) +
                     log_rgamma(g - b);
  const Complex l2 = (1.0 - c) * std::log(x) + (c - a - b) * std::log(1.0 - x) +
                     log_hyp2f1_regularized(1.0 - a, 1.0 - b, 2.0 - c, x, ctl) +
                     log_rgamma(a) + log_rgamma(b);
  const double scale = std::max(l1.real(), l2.real());
  if (!std::isfinite(scale)) return Complex(-std::numeric_limits<double>::infinity(), 0.0);
  const Complex diff = std::exp(l1 - scale) - std::exp(l2 - scale);
  return log_pre + scale + std::log(diff);
}

Complex hyp2f1_reflected_regularized(Complex a, Complex b, Complex g, Complex x,
                                     const SeriesControl& ctl) {
  return std::exp(log_hyp2f1_reflected_regularized(a, b, g, x, ctl));
}

Complex qpochhammer(Complex a, double q, int k) {
  if (k < 0) throw DomainError("qpochhammer: k must be non-negative");
  if (k == kInfinity) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("qpochhammer: infinite product needs 0 < q < 1");
    constexpr int kCap = 10'000;
    constexpr double kTail = 1e-17;
    Complex p = 1.0;
    double qi = 1.0;
    const double mod = std::abs(a);
    for (int i = 0; i < kCap && mod * qi >= kTail; ++i) {
      p *= 1.0 - a * qi;
      qi *= q;
    }
    return p;
  }
  Complex p = 1.0;
  double qi = 1.0;
  for (int i = 0; i < k; ++i) {
    p *= 1.0 - a * qi;
    qi *= q;
  }
  return p;
}

Complex qpochhammer_inf(Complex a, double q) { return qpochhammer(a, q, kInfinity); }

double log_qpochhammer_inf_real(double a, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("qpochhammer: infinite product needs 0 < q < 1");
  double s = 0.0;
  double qi = 1.0;
  for (int i = 0; i < 10'000 && std::abs(a) * qi >= 1e-17; ++i) {
    const double f = 1.0 - a * qi;
    if (!(f > 0.0)) throw DomainError("log_qpochhammer_inf_real: non-positive factor");
    s += std::log1p(-a * qi);
    qi *= q;
  }
  return s;
}

Complex phi21(Complex a, Complex b, Complex c, double q, Complex x, const SeriesControl& ctl) {
  ctl.validate();
  if (!(q > 0.0 && q < 1.0)) throw DomainError("phi21: needs 0 < q < 1");
  if (!(std::abs(x) < 1.0)) throw DomainError("phi21: direct series needs |x| < 1");
  if (c.imag() == 0.0 && c.real() > 0.0) {
    const double e = std::log(c.real()) / std::log(q);
    if (e <= 1e-12 && std::abs(e - std::round(e)) < 1e-12) {
      throw PoleError("phi21: c lies in q^{-Z>=0}");
    }
  }
  Complex sum = 1.0;
  Complex term = 1.0;
  double qn = 1.0;
  int small_run = 0;
  for (int n = 0; n < ctl.max_terms; ++n) {
    const Complex den = (1.0 - qn * q) * (1.0 - c * qn);
    if (den == Complex(0.0, 0.0)) throw PoleError("phi21: vanishing denominator");
    term *= (1.0 - a * qn) * (1.0 - b * qn) / den * x;
    sum += term;
    qn *= q;
    if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
      if (++small_run >= 2) return sum;
    } else {
      small_run = 0;
    }
  }
  throw NoConvergence("phi21: series did not converge within max_terms");
}

}  // namespace jspec
