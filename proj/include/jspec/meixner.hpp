#ifndef JSPEC_MEIXNER_HPP
#define JSPEC_MEIXNER_HPP

// The Meixner-function operator on l^2(Z):
//   a_k = sqrt((lambda + k + eps + 1)(k + eps - lambda)),  b_k = 2 a (k + eps),
// its 2F1 solutions, connection coefficients, Wronskians, discrete spectrum,
// orthogonality relations, and the Meixner-Pollaczek case a = cos(psi).

#include "jspec/doubly.hpp"
#include "jspec/jacobi.hpp"

namespace jspec {

struct MeixnerParams {
  double a = 2.0;
  Complex lambda{-0.5, 0.0};
  double eps = 0.25;

  /// Throws DomainError unless (lambda, eps) is admissible and a is finite
  /// with a^2 != 1: lambda = -1/2 + ib with b >= 0, or eps in [0, 1/2) with
  /// -1/2 <= lambda < -eps, or eps in (1/2, 1) with -1/2 < lambda < eps - 1.
  void validate() const;
};

enum class Sign { Plus, Minus };

/// Full-line coefficients for (a, lambda, eps).
JacobiCoefficients coefficients(const MeixnerParams& p);

/// u^{+-}_k(z): the solutions built from 2F1(k+eps+1+lambda, k+eps-lambda;
/// k+eps+1 +- y; 1/2 +- a/(2 sqrt(a^2-1))), y = z/(2 sqrt(a^2-1)).
/// For a > 1, u^- is square-summable at +inf. Needs a^2 > 1.
Complex solution_u(const MeixnerParams& p, Sign sign, Complex z, long k);

/// v^{+-}_k(z), the solutions obtained from u^{-+} by k -> -k, a -> -a,
/// eps -> -eps; for a > 1, v^+ is square-summable at -inf.
Complex solution_v(const MeixnerParams& p, Sign sign, Complex z, long k);

/// The four solutions as lazily evaluated vectors.
SolutionVector solution_u_vector(const MeixnerParams& p, Sign sign, Complex z);
SolutionVector solution_v_vector(const MeixnerParams& p, Sign sign, Complex z);

struct ConnectionCoefficients {
  Complex A;
  Complex B;
};

/// u^-_k = A v^+_k + B v^-_k (a > 1).
ConnectionCoefficients connection(const MeixnerParams& p, Complex z);

struct MeixnerWronskians {
  Complex vv;  // [v^-, v^+]
  Complex uv;  // [u^-, v^+] = B vv
};

MeixnerWronskians wronskians(const MeixnerParams& p, Complex z);

struct SpectrumPoint {
  double x;
  double norm_sq;
};

/// x_l = 2(eps + l) sqrt(a^2 - 1) and sum_k |u^-_k(x_l)|^2 (a > 1).
SpectrumPoint spectrum(const MeixnerParams& p, long l);

struct OrthogonalityOptions {
  long k_max = 400;
  long tail_window = 20;
  double tail_tol = 1e-12;
};

struct OrthogonalityResult {
  double value;
  double target;
  long terms;
};

/// sum_k Gamma(k+lambda+eps+1)Gamma(k+eps-lambda)(4(a^2-1))^{-k}
///   F~_l(k) F~_m(k), F~_l(k) = 2F1(k+eps+lambda+1, k+eps-lambda; k+1-l; X)/Gamma(k+1-l),
/// X = 1/2 - a/(2 sqrt(a^2-1)), summed outward from k = 0 until the last
/// tail_window terms on each side are below tail_tol times the sum of
/// magnitudes. The target is delta_{lm} times the norm formula.
/// Throws NoConvergence if k_max is reached first.
OrthogonalityResult verify_orthogonality(const MeixnerParams& p, long l, long m,
                                         const OrthogonalityOptions& opts = {});

/// The dual relation: sum over l of ((a+s)/(a-s))^l / (Gamma(eps+l-lambda)
/// Gamma(1+eps+l+lambda)) F~_l(k) F~_l(m), s = sqrt(a^2-1).
OrthogonalityResult verify_dual_orthogonality(const MeixnerParams& p, long k, long m,
                                              const OrthogonalityOptions& opts = {});

/// Meixner-Pollaczek parameters: a = cos(psi) with psi in (pi/6, 5pi/6),
/// where the 2F1 arguments 1/(1 - e^{+-2i psi}) lie inside the unit disc.
struct PollaczekParams {
  double psi = kPi / 2.0;
  Complex lambda{-0.5, 0.0};
  double eps = 0.25;

  void validate() const;
};

/// Coefficients of the operator (2 sin psi)^{-1} J for which U^{+-}, V^{+-}
/// are eigenvectors: a_k as above, b_k = -2 cos(psi)(k + eps), both divided
/// by 2 sin psi.
JacobiCoefficients pollaczek_coefficients(const PollaczekParams& p);

Complex pollaczek_u(const PollaczekParams& p, Sign sign, Complex z, long k);
Complex pollaczek_v(const PollaczekParams& p, Sign sign, Complex z, long k);

/// U^+ = A^+ V^+ + B^+ V^-, with A^+ and B^+ the Gamma quotients; and
/// U^- = A^- V^+ + B^- V^- with A^-(z) = conj(B^+(conj z)),
/// B^-(z) = conj(A^+(conj z)).
struct PollaczekConnection {
  ConnectionCoefficients plus;
  ConnectionCoefficients minus;
};

PollaczekConnection pollaczek_connection(const PollaczekParams& p, Complex z);

/// [V^-, V^+] for the coefficients of pollaczek_coefficients:
/// -i (2 sin psi)^{-2eps} e^{-2z(psi - pi/2)}, the Wronskian for J divided by 2 sin psi.
Complex pollaczek_wronskian(const PollaczekParams& p, Complex z);

struct PollaczekDensity {
  double weight_u;
  double weight_v;
};

/// Weights of the spectral measure at real x:
/// <u, v> = int (w_U <u,U^-(x)><U^-(x),v> + w_V <u,V^-(x)><V^-(x),v>) dx,
/// normalized so that <e_k, e_k> = 1.
PollaczekDensity pollaczek_density(const PollaczekParams& p, double x);

}  // namespace jspec

#endif  // JSPEC_MEIXNER_HPP
