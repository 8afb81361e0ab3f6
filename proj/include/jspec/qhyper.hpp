#ifndef JSPEC_QHYPER_HPP
#define JSPEC_QHYPER_HPP

// The basic hypergeometric difference operator on l^2(Z):
//   a_k = 1/2 sqrt((1 - q^{-k}/r)(1 - c q^{-k}/(d^2 r))),  b_k = q^{-k}(c+q)/(2dr),
// its 2phi1 solutions, the c-function, Wronskians, the spectral measure with
// its continuous part on [-1, 1] and discrete atoms, and the q -> 1 limit to
// the Meixner operator.

#include <string>
#include <vector>

#include "jspec/doubly.hpp"
#include "jspec/jacobi.hpp"
#include "jspec/spectral.hpp"

namespace jspec {

struct QParams {
  double q = 0.5;
  double r = -0.01;
  double c = 0.1;
  double d = 0.8;

  /// Throws DomainError unless 0 < q < 1, r < 0, c > 0, d != 0, all finite.
  void validate() const;

  /// |d| < 1 and |c/d| < 1: the regime with a single family of atoms.
  bool theorem_regime() const;

  /// q^2 < c < 1, where the operator has deficiency indices (1, 1).
  bool extension_regime() const;
};

/// mu(y) = (y + 1/y)/2.
Complex mu(Complex y);

JacobiCoefficients q_coefficients(const QParams& p);

/// w_k with w_k^2 = d^{2k} (c q^{1-k}/(d^2 r); q)_inf / (q^{1-k}/r; q)_inf.
/// The root carries the sign sgn(d)^k so that w_k f_k solves the recurrence.
double weight_w(const QParams& p, long k);

/// log w_k^2.
double log_weight_w_sq(const QParams& p, long k);

/// f_k(mu(y)) = 2phi1(dy, d/y; c; q, r q^k).
Complex solution_f(const QParams& p, Complex y, long k);

/// g_k(mu(y)) = (q/c)^k 2phi1(qdy/c, qd/(cy); q^2/c; q, r q^k).
Complex solution_g(const QParams& p, Complex y, long k);

/// F_k(y) = (dy)^{-k} 2phi1(dy, qdy/c; q y^2; q, q^{1-k} c/(d^2 r)).
Complex solution_F(const QParams& p, Complex y, long k);

/// The weighted solutions k -> w_k f_k, w_k g_k, w_k F_k of
/// a_k u_{k+1} + b_k u_k + a_{k-1} u_{k-1} = mu(y) u_k.
SolutionVector weighted_f(const QParams& p, Complex y);
SolutionVector weighted_g(const QParams& p, Complex y);
SolutionVector weighted_F(const QParams& p, Complex y);

/// c(y) = (c/dy, d/y, dry, q/dry; q)_inf / (y^{-2}, c, r, q/r; q)_inf.
/// Throws PoleError when y^2 is an integer power of q.
Complex c_function(const QParams& p, Complex y);

/// log c(y), any branch; -inf real part at a zero.
Complex log_c_function(const QParams& p, Complex y);

struct QWronskians {
  Complex FF;  // [wF(y), wF(1/y)] = (1/y - y)/2
  Complex fF;  // [wf(mu(y)), wF(y)] = c(1/y)(y - 1/y)/2
};

/// Throws DegenerateWronskian at y = +-1.
QWronskians q_wronskians(const QParams& p, Complex y);

struct QAtom {
  long p;
  Complex y;
  double location;
  double mass;
  /// Residue from the derivative of the vanishing product factor.
  double mass_check;
};

struct QSpectralOptions {
  long atom_cap = 40;
  double contour_radius = 1e-4;
  int contour_nodes = 64;
  int quad_nodes = 400;
};

struct QSpectralResult {
  SpectralMeasure measure;
  std::vector<QAtom> atoms;
  /// Mass of the continuous part computed by Gauss-Legendre quadrature.
  double continuous_mass = 0.0;
  bool extension_dependent = false;
};

/// Density of the continuous part in chi, x = cos chi: 1/(2 pi |c(e^{i chi})|^2).
double continuous_density_chi(const QParams& p, double chi);

/// Atoms at y_p = q^p/(dr) with |y_p| > 1, ordered from p_max downwards.
QAtom q_atom(const QParams& p, long index, const QSpectralOptions& opts = {});

/// Largest p with |q^p/(dr)| > 1.
long q_atom_p_max(const QParams& p);

/// The spectral measure of e_0: density w_0^2 f_0(x)^2 / (2 pi |c|^2 sin chi)
/// in x = cos chi and atoms w_0^2 f_0(x_p)^2 m_p, with m_p the residues kept
/// in `atoms`. Atoms stop once their mass drops below 1e-14 of the total or
/// at atom_cap. Requires the theorem regime; throws RegularityError when a
/// residue cannot be confirmed (near-double zero or coinciding zeros of c(y)
/// and c(1/y)).
QSpectralResult spectral_measure(const QParams& p, const QSpectralOptions& opts = {});

struct QOrthogonalityResult {
  double value;
  double target;
  double continuous;
  double discrete;
  long atoms_used;
};

/// (1/2pi) int_0^pi f_k f_l |c(e^{i chi})|^{-2} d chi + sum_p m_p f_k f_l (y_p),
/// Gauss-Legendre in chi and atoms summed until their contribution is
/// negligible; target delta_{kl}/w_k^2. Throws NoConvergence if the atom
/// sum has not settled within atom_cap terms.
QOrthogonalityResult verify_q_orthogonality(const QParams& p, long k, long l,
                                            int quad_nodes = 400, long atom_cap = 40);

struct ABValues {
  Complex a;
  Complex b;
};

/// F_k(y) = a(y) f_k(mu(y)) + b(y) g_k(mu(y)).
ABValues ab_expansion(const QParams& p, Complex y);

/// lim_{k -> inf} [wf, wg]_k, independent of y.
double limit_wronskian_fg(const QParams& p);

/// lim_{k -> inf} [wf(mu(y)), wF(y)]_k = b(y) lim [wf, wg].
Complex limit_wronskian_fF(const QParams& p, Complex y);

/// Coefficients of L_q = (2L - s - 1/s)/(1 - q) for c = q/s^2,
/// d = q^{1+lambda}/s, r = q^{-eps-lambda} (so r > 0), reindexed k -> -k.
/// As q -> 1 they tend to the Meixner coefficients with a = -(s + 1/s)/2.
JacobiCoefficients limit_coefficients(double s, double eps, double lambda, double q);

struct LimitPoint {
  double q;
  double eigenvalue;
  double predicted_limit;
  /// s(q^{p-1+eps} - 1)/(1-q) + (q^{1-eps-p} - 1)/(s(1-q)).
  double exact_point;
  double gap;
};

/// For each q, the eigenvalue of the finite section over -window..window
/// nearest (p + eps - 1)(1/s - s). Requires s > 1, 0 < q < 1.
std::vector<LimitPoint> limit_scan(double s, double eps, double lambda,
                                   const std::vector<double>& q_list, long p,
                                   long window = 200);

}  // namespace jspec

#endif  // JSPEC_QHYPER_HPP
