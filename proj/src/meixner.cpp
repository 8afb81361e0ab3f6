#include "jspec/meixner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace jspec {

namespace {

constexpr double kParamTol = 1e-14;

bool is_conjugate_pair(Complex lambda) { return lambda.imag() != 0.0; }

// a_k^2 = (lambda + k + eps + 1)(k + eps - lambda), real for admissible lambda.
double a_squared(Complex lambda, double eps, long k) {
  const double kk = static_cast<double>(k) + eps;
  if (is_conjugate_pair(lambda)) {
    const double t = kk + 0.5;
    return t * t + lambda.imag() * lambda.imag();
  }
  return (lambda.real() + kk + 1.0) * (kk - lambda.real());
}

void validate_lambda_eps(Complex lambda, double eps, const char* who) {
  const std::string w(who);
  if (!std::isfinite(eps) || !std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
    throw DomainError(w + ": non-finite parameter");
  }
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError(w + ": eps must lie in [0, 1)");
  if (is_conjugate_pair(lambda) || std::abs(lambda.real() + 0.5) <= kParamTol) {
    if (std::abs(lambda.real() + 0.5) > kParamTol || lambda.imag() < 0.0) {
      throw DomainError(w + ": complex lambda must be -1/2 + ib with b >= 0");
    }
    if (lambda.imag() == 0.0 && eps == 0.5) {
      throw DomainError(w + ": lambda = -1/2 with eps = 1/2 makes a_{-1} vanish");
    }
    return;
  }
  const double l = lambda.real();
  if (eps < 0.5) {
    if (!(l >= -0.5 && l < -eps)) {
      throw DomainError(w + ": for eps in [0, 1/2) lambda must lie in [-1/2, -eps)");
    }
  } else if (eps > 0.5) {
    if (!(l > -0.5 && l < eps - 1.0)) {
      throw DomainError(w + ": for eps in (1/2, 1) lambda must lie in (-1/2, eps - 1)");
    }
  } else {
    throw DomainError(w + ": eps = 1/2 needs lambda = -1/2 + ib with b > 0");
  }
}

// log sqrt(Gamma(x1) Gamma(x2)) for a product known to be positive.
double log_sqrt_gamma_pair(Complex x1, Complex x2) {
  return 0.5 * (log_gamma(x1) + log_gamma(x2)).real();
}

// Meixner quantities that only depend on a.
struct Geometry {
  double s;      // sqrt(a^2 - 1)
  double xm;     // 1/2 - a/(2s)
  double xp;     // 1/2 + a/(2s)
  double rho;    // (a - s)/(a + s)
  double four;   // 4(a^2 - 1)
};

Geometry geometry(double a) {
  if (!(a * a > 1.0)) throw DomainError("meixner: needs a^2 > 1");
  const double s = std::sqrt(a * a - 1.0);
  return {s, 0.5 - a / (2.0 * s), 0.5 + a / (2.0 * s), (a - s) / (a + s), 4.0 * (a * a - 1.0)};
}

// log of 2F1(al, be; ga; x)/Gamma(ga) for real x off 1; for x > 1 the value
// is the continuation from below the cut.
Complex log_f21_reg(Complex al, Complex be, Complex ga, double x) {
  if (x < 1.0) return log_hyp2f1_regularized(al, be, ga, x);
  return log_hyp2f1_reflected_regularized(al, be, ga, 1.0 - x);
}

// log of (base)^k for integer k and real base of either sign.
Complex log_int_power(double base, long k) {
  Complex l = static_cast<double>(k) * std::log(std::abs(base));
  if (base < 0.0 && (k % 2 != 0)) l += Complex(0.0, kPi);
  return l;
}

}  // namespace

void MeixnerParams::validate() const {
  if (!std::isfinite(a) || a * a == 1.0) throw DomainError("meixner: a must be finite, a^2 != 1");
  validate_lambda_eps(lambda, eps, "meixner");
}

JacobiCoefficients coefficients(const MeixnerParams& p) {
  p.validate();
  const Complex lambda = p.lambda;
  const double eps = p.eps;
  const double a = p.a;
  return JacobiCoefficients(
      [lambda, eps](long k) { return std::sqrt(a_squared(lambda, eps, k)); },
      [a, eps](long k) { return 2.0 * a * (static_cast<double>(k) + eps); }, IndexSet::FullLine,
      "meixner");
}

Complex solution_u(const MeixnerParams& p, Sign sign, Complex z, long k) {
  p.validate();
  const Geometry g = geometry(p.a);
  const Complex y = z / (2.0 * g.s);
  const double kk = static_cast<double>(k);
  const double sg = sign == Sign::Plus ? 1.0 : -1.0;
  const Complex al = kk + p.eps + 1.0 + p.lambda;
  const Complex be = kk + p.eps - p.lambda;
  const Complex ga = kk + p.eps + 1.0 + sg * y;
  const double x = sign == Sign::Plus ? g.xp : g.xm;
  const Complex l = log_int_power(sg * 2.0 * g.s, -k) + log_sqrt_gamma_pair(al, be) +
                    log_f21_reg(al, be, ga, x);
  return std::exp(l);
}

Complex solution_v(const MeixnerParams& p, Sign sign, Complex z, long k) {
  p.validate();
  const Geometry g = geometry(p.a);
  const Complex y = z / (2.0 * g.s);
  const double kk = static_cast<double>(k);
  const double sg = sign == Sign::Plus ? 1.0 : -1.0;
  const Complex al = -kk - p.eps + 1.0 + p.lambda;
  const Complex be = -kk - p.eps - p.lambda;
  const Complex ga = -kk - p.eps + 1.0 + sg * y;
  const double x = sign == Sign::Plus ? g.xm : g.xp;
  const Complex l = log_int_power(sg * 2.0 * g.s, k) + log_sqrt_gamma_pair(al, be) +
                    log_f21_reg(al, be, ga, x);
  return std::exp(l);
}

SolutionVector solution_u_vector(const MeixnerParams& p, Sign sign, Complex z) {
  const SummableEnd end = (sign == Sign::Minus) == (p.a > 0.0) ? SummableEnd::Plus
                                                                : SummableEnd::Neither;
  return SolutionVector([p, sign, z](long k) { return solution_u(p, sign, z, k); }, z, end);
}

SolutionVector solution_v_vector(const MeixnerParams& p, Sign sign, Complex z) {
  const SummableEnd end = (sign == Sign::Plus) == (p.a > 0.0) ? SummableEnd::Minus
                                                               : SummableEnd::Neither;
  return SolutionVector([p, sign, z](long k) { return solution_v(p, sign, z, k); }, z, end);
}

namespace {

void require_positive_a(const MeixnerParams& p, const char* who) {
  p.validate();
  if (!(p.a > 1.0)) throw DomainError(std::string(who) + ": needs a > 1");
}

// log sqrt(sin pi(eps - lambda) sin pi(-eps - lambda)), principal root.
Complex log_sin_root(const MeixnerParams& p) {
  const Complex prod = std::sin(kPi * (p.eps - p.lambda)) * std::sin(kPi * (-p.eps - p.lambda));
  return 0.5 * std::log(prod);
}

}  // namespace

ConnectionCoefficients connection(const MeixnerParams& p, Complex z) {
  require_positive_a(p, "connection");
  const Geometry g = geometry(p.a);
  const Complex y = z / (2.0 * g.s);
  // Common factor rho^y (4(a^2-1))^eps e^{i pi (y - eps)} / sqrt(sin sin).
  const Complex common = y * std::log(g.rho) + p.eps * std::log(g.four) +
                         Complex(0.0, kPi) * (y - p.eps) - log_sin_root(p);
  const Complex B = std::exp(common) * std::sin(kPi * (y - p.eps));
  const Complex A = kPi * rgamma(1.0 + p.lambda - y) * rgamma(-p.lambda - y) * std::exp(common);
  return {A, B};
}

MeixnerWronskians wronskians(const MeixnerParams& p, Complex z) {
  require_positive_a(p, "wronskians");
  const Geometry g = geometry(p.a);
  const Complex y = z / (2.0 * g.s);
  const Complex vv = -2.0 * g.s *
                     std::exp(-p.eps * std::log(g.four) - y * std::log(g.rho) -
                              Complex(0.0, kPi) * (y - p.eps));
  const Complex uv = -2.0 * g.s * std::sin(kPi * (y - p.eps)) * std::exp(-log_sin_root(p));
  return {vv, uv};
}

SpectrumPoint spectrum(const MeixnerParams& p, long l) {
  require_positive_a(p, "spectrum");
  const Geometry g = geometry(p.a);
  const double ll = static_cast<double>(l);
  const double x = 2.0 * (p.eps + ll) * g.s;
  const double log_norm = p.eps * std::log(g.four * g.rho) + ll * std::log(g.rho) +
                          (log_gamma(p.eps + ll - p.lambda) +
                           log_gamma(1.0 + p.eps + ll + p.lambda))
                              .real();
  return {x, std::exp(log_norm)};
}

namespace {

// Sums term(k) over k = 0, 1, -1, 2, -2, ... until both tails are small.
template <class Term>
OrthogonalityResult outward_sum(Term term, const OrthogonalityOptions& opts, double target) {
  if (opts.k_max < 1 || opts.tail_window < 1) {
    throw DomainError("orthogonality: k_max and tail_window must be positive");
  }
  double sum = term(0);
  double mass = std::abs(sum);
  std::deque<double> up, down;
  double up_tail = 0.0, down_tail = 0.0;
  for (long k = 1; k <= opts.k_max; ++k) {
    const double tu = term(k);
    const double td = term(-k);
    sum += tu + td;
    mass += std::abs(tu) + std::abs(td);
    up.push_back(std::abs(tu));
    down.push_back(std::abs(td));
    up_tail += std::abs(tu);
    down_tail += std::abs(td);
    if (static_cast<long>(up.size()) > opts.tail_window) {
      up_tail -= up.front();
      down_tail -= down.front();
      up.pop_front();
      down.pop_front();
    }
    if (k >= opts.tail_window && up_tail < opts.tail_tol * mass &&
        down_tail < opts.tail_tol * mass) {
      return {sum, target, 2 * k + 1};
    }
  }
  throw NoConvergence("orthogonality: tails not decayed within k_max = " +
                      std::to_string(opts.k_max));
}

double real_exp(Complex l) {
  return std::isfinite(l.real()) ? std::exp(l).real() : 0.0;
}

}  // namespace

OrthogonalityResult verify_orthogonality(const MeixnerParams& p, long l, long m,
                                         const OrthogonalityOptions& opts) {
  require_positive_a(p, "verify_orthogonality");
  const Geometry g = geometry(p.a);
  const double log_four = std::log(g.four);
  auto term = [&](long k) {
    const double kk = static_cast<double>(k);
    const Complex al = kk + p.eps + p.lambda + 1.0;
    const Complex be = kk + p.eps - p.lambda;
    const Complex lg = (log_gamma(al) + log_gamma(be)).real() - kk * log_four;
    return real_exp(lg + log_f21_reg(al, be, kk + 1.0 - static_cast<double>(l), g.xm) +
                    log_f21_reg(al, be, kk + 1.0 - static_cast<double>(m), g.xm));
  };
  const double target = l == m ? spectrum(p, l).norm_sq : 0.0;
  return outward_sum(term, opts, target);
}

OrthogonalityResult verify_dual_orthogonality(const MeixnerParams& p, long k, long m,
                                              const OrthogonalityOptions& opts) {
  require_positive_a(p, "verify_dual_orthogonality");
  const Geometry g = geometry(p.a);
  const double kk = static_cast<double>(k);
  const double mm = static_cast<double>(m);
  auto term = [&](long l) {
    const double ll = static_cast<double>(l);
    const Complex lg = -ll * std::log(g.rho) -
                       (log_gamma(p.eps + ll - p.lambda) + log_gamma(1.0 + p.eps + ll + p.lambda))
                           .real();
    const Complex f1 = log_f21_reg(kk + p.eps + p.lambda + 1.0, kk + p.eps - p.lambda,
                                   kk + 1.0 - ll, g.xm);
    const Complex f2 = log_f21_reg(mm + p.eps + p.lambda + 1.0, mm + p.eps - p.lambda,
                                   mm + 1.0 - ll, g.xm);
    return real_exp(lg + f1 + f2);
  };
  double target = 0.0;
  if (k == m) {
    const double lg = kk * std::log(g.four) -
                      (log_gamma(kk + p.lambda + p.eps + 1.0) + log_gamma(kk + p.eps - p.lambda))
                          .real() +
                      p.eps * std::log(g.four * g.rho);
    target = std::exp(lg);
  }
  return outward_sum(term, opts, target);
}

void PollaczekParams::validate() const {
  if (!(psi > kPi / 6.0 && psi < 5.0 * kPi / 6.0)) {
    throw DomainError("pollaczek: psi must lie in (pi/6, 5pi/6)");
  }
  validate_lambda_eps(lambda, eps, "pollaczek");
}

JacobiCoefficients pollaczek_coefficients(const PollaczekParams& p) {
  p.validate();
  const Complex lambda = p.lambda;
  const double eps = p.eps;
  const double c = std::cos(p.psi);
  const double scale = 2.0 * std::sin(p.psi);
  return JacobiCoefficients(
      [lambda, eps, scale](long k) { return std::sqrt(a_squared(lambda, eps, k)) / scale; },
      [c, eps, scale](long k) { return -2.0 * c * (static_cast<double>(k) + eps) / scale; },
      IndexSet::FullLine, "meixner_pollaczek");
}

namespace {

// log of (s (2 i sin psi))^n for integer n and s = +-1.
Complex log_pollaczek_power(double sign, double psi, long n) {
  const long r = ((n % 4) + 4) % 4;  // i^n
  Complex l = static_cast<double>(n) * std::log(2.0 * std::sin(psi)) +
              Complex(0.0, kPi / 2.0 * static_cast<double>(r));
  if (sign < 0.0 && (n % 2 != 0)) l += Complex(0.0, kPi);
  return l;
}

}  // namespace

Complex pollaczek_u(const PollaczekParams& p, Sign sign, Complex z, long k) {
  p.validate();
  const double sg = sign == Sign::Plus ? 1.0 : -1.0;
  const double kk = static_cast<double>(k);
  const Complex i(0.0, 1.0);
  const Complex al = kk + 1.0 + p.lambda + p.eps;
  const Complex be = kk + p.eps - p.lambda;
  const Complex ga = kk + 1.0 + p.eps - sg * i * z;
  const Complex x = 1.0 / (1.0 - std::exp(sg * 2.0 * i * p.psi));
  return std::exp(log_pollaczek_power(sg, p.psi, -k) + log_sqrt_gamma_pair(al, be) +
                  log_hyp2f1_regularized(al, be, ga, x));
}

Complex pollaczek_v(const PollaczekParams& p, Sign sign, Complex z, long k) {
  p.validate();
  const double sg = sign == Sign::Plus ? 1.0 : -1.0;
  const double kk = static_cast<double>(k);
  const Complex i(0.0, 1.0);
  const Complex al = 1.0 - kk + p.lambda - p.eps;
  const Complex be = -kk - p.eps - p.lambda;
  const Complex ga = 1.0 - kk - p.eps - sg * i * z;
  const Complex x = 1.0 / (1.0 - std::exp(-sg * 2.0 * i * p.psi));
  return std::exp(log_pollaczek_power(sg, p.psi, k) + log_sqrt_gamma_pair(al, be) +
                  log_hyp2f1_regularized(al, be, ga, x));
}

namespace {

// log sqrt(Gamma(-eps-lambda) Gamma(1+lambda-eps) Gamma(1+lambda+eps) Gamma(eps-lambda)).
double log_g4(const PollaczekParams& p) {
  return 0.5 * (log_gamma(-p.eps - p.lambda) + log_gamma(1.0 + p.lambda - p.eps) +
                log_gamma(1.0 + p.lambda + p.eps) + log_gamma(p.eps - p.lambda))
                   .real();
}

ConnectionCoefficients pollaczek_plus(const PollaczekParams& p, Complex z) {
  const Complex i(0.0, 1.0);
  const Complex pre = std::exp(2.0 * p.eps * std::log(2.0 * std::sin(p.psi)) +
                               2.0 * z * (p.psi - kPi / 2.0) + log_g4(p));
  return {pre * rgamma(i * z - p.eps) * rgamma(1.0 + p.eps - i * z),
          pre * rgamma(p.lambda + 1.0 - i * z) * rgamma(-p.lambda - i * z)};
}

}  // namespace

PollaczekConnection pollaczek_connection(const PollaczekParams& p, Complex z) {
  p.validate();
  const ConnectionCoefficients plus = pollaczek_plus(p, z);
  const ConnectionCoefficients bar = pollaczek_plus(p, std::conj(z));
  return {plus, {std::conj(bar.B), std::conj(bar.A)}};
}

Complex pollaczek_wronskian(const PollaczekParams& p, Complex z) {
  p.validate();
  const Complex i(0.0, 1.0);
  return -i * std::exp(-2.0 * p.eps * std::log(2.0 * std::sin(p.psi)) -
                       2.0 * z * (p.psi - kPi / 2.0));
}

namespace {

// log(|sin pi lambda|^2 + sinh^2 pi x) without overflow.
double log_sin_sinh(double sl, double x) {
  const double t = kPi * std::abs(x);
  if (t < 20.0) return std::log(sl + std::sinh(t) * std::sinh(t));
  const double log_sinh = t + std::log1p(-std::exp(-2.0 * t)) - std::log(2.0);
  return 2.0 * log_sinh + std::log1p(sl * std::exp(-2.0 * log_sinh));
}

}  // namespace

PollaczekDensity pollaczek_density(const PollaczekParams& p, double x) {
  p.validate();
  const double lr = kPi * p.lambda.real();
  const double li = kPi * p.lambda.imag();
  const double sl = std::sin(lr) * std::sin(lr) + std::sinh(li) * std::sinh(li);
  const double se = std::sin(kPi * p.eps) * std::sin(kPi * p.eps);
  const double two_sin = 2.0 * std::sin(p.psi);
  const double log_s = std::log(two_sin);
  const double lden = log_sin_sinh(sl, x);
  const double phase = 2.0 * x * (p.psi - kPi / 2.0);
  // The displayed weights integrate to 1/(2 sin psi); the extra factor
  // 2 sin psi normalizes the measure of (2 sin psi)^{-1} J.
  const double log_u = 2.0 * std::log(kPi) - lden - 2.0 * log_g4(p) +
                       (-1.0 - 2.0 * p.eps) * log_s - phase - std::log(2.0 * kPi) + log_s;
  const double log_v = std::log(sl - se) - lden + (-1.0 + 2.0 * p.eps) * log_s + phase -
                       std::log(2.0 * kPi) + log_s;
  return {std::exp(log_u), sl > se ? std::exp(log_v) : 0.0};
}

}  // namespace jspec
