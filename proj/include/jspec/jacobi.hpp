#ifndef JSPEC_JACOBI_HPP
#define JSPEC_JACOBI_HPP

// Jacobi (symmetric tridiagonal) operators: coefficient sequences, the
// orthonormal and associated polynomials, Wronskians, the Christoffel-Darboux
// kernel, finite sections and their eigen-decomposition.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "jspec/specialfn.hpp"

namespace jspec {

enum class IndexSet { HalfLine, FullLine };

/// Lazily evaluated coefficient pair (a_k, b_k). Values are memoized on first
/// use; copies share the cache, and concurrent reads are safe.
class JacobiCoefficients {
 public:
  using Sequence = std::function<double(long)>;

  JacobiCoefficients(Sequence a, Sequence b, IndexSet index_set, std::string label);

  /// Constant coefficients a_k = a, b_k = b.
  static JacobiCoefficients constant(double a, double b, IndexSet index_set,
                                     std::string label);

  /// a_k; throws CoefficientError unless finite and strictly positive and
  /// IndexError for k < 0 on a half line.
  double a(long k) const;
  /// b_k; throws CoefficientError unless finite.
  double b(long k) const;

  /// Writes a_{k0+i} into a_out[i] and b_{k0+i} into b_out[i]. Either span
  /// may be empty.
  void fill(long k0, std::span<double> a_out, std::span<double> b_out) const;

  /// Like a(k), but returns a non-finite or non-positive value instead of
  /// throwing; used by scans that probe for overflow.
  double raw_a(long k) const;
  double raw_b(long k) const;

  IndexSet index_set() const { return index_set_; }
  const std::string& label() const { return label_; }

 private:
  struct Store;
  void check_index(long k) const;

  std::shared_ptr<Store> store_;
  IndexSet index_set_;
  std::string label_;
};

/// Chebyshev-type operator a_k = 1/2, b_k = 0 (second-kind Chebyshev
/// polynomials, semicircle measure on [-1, 1]).
JacobiCoefficients chebyshev_coefficients();

/// Stieltjes-Wigert operator a_k = q^{-2k-3/2} sqrt(1 - q^{k+1}),
/// b_k = q^{-2k}(1 + q^{-1} - q^k), 0 < q < 1.
JacobiCoefficients stieltjes_wigert_coefficients(double q);

/// Half-line operator with a_k = k + 1, b_k = 0.
JacobiCoefficients linear_coefficients();

enum class PolynomialKind { OrthonormalP, AssociatedR };

/// Values u_0..u_N of a recurrence solution with overflow protection: the
/// true value is values[k] * exp(log_scales[k]).
struct PolynomialSequence {
  PolynomialKind kind = PolynomialKind::OrthonormalP;
  Complex x;
  std::vector<Complex> values;
  std::vector<double> log_scales;

  std::size_t size() const { return values.size(); }
  /// Unscaled value; may overflow for extreme growth.
  Complex value(std::size_t k) const;
  /// log of the unscaled value (any branch).
  Complex log_value(std::size_t k) const;
};

/// p_0..p_N at x by the forward three-term recurrence.
PolynomialSequence eval_p(const JacobiCoefficients& coeffs, Complex x, long n);

/// Associated polynomials r_0..r_N (r_0 = 0, r_1 = 1/a_0).
PolynomialSequence eval_r(const JacobiCoefficients& coeffs, Complex x, long n);

/// a_k (u_{k+1} v_k - u_k v_{k+1}); both sequences must reach index k+1.
Complex wronskian(const JacobiCoefficients& coeffs, const PolynomialSequence& u,
                  const PolynomialSequence& v, long k);

/// max(a_k |u_{k+1} v_k|, a_k |u_k v_{k+1}|), the size of the two terms of the
/// Wronskian; relative errors of wronskian() are measured against this.
double wronskian_scale(const JacobiCoefficients& coeffs, const PolynomialSequence& u,
                       const PolynomialSequence& v, long k);

/// Christoffel-Darboux kernel sum_{k<n} p_k(x) p_k(y), n >= 1.
Complex cd_kernel(const JacobiCoefficients& coeffs, Complex x, Complex y, long n);

struct TruncatedMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const { return diag.size(); }
};

/// Finite section: diag b_0..b_N, offdiag a_0..a_{N-1}.
TruncatedMatrix truncate(const JacobiCoefficients& coeffs, long n);

struct EigenPair {
  double value;
  double first_component_sq;
};

/// All eigenvalues in ascending order with the squared first component of
/// the unit eigenvector. Implicit QL with Wilkinson shifts; throws
/// NoConvergence after 50 iterations on one eigenvalue.
std::vector<EigenPair> eigen(const TruncatedMatrix& mat);

/// The n zeros of p_n, ascending.
std::vector<double> zeros_of_p(const JacobiCoefficients& coeffs, long n);

/// m_j = <J^j e_0, e_0> for j = 0..m_max.
std::vector<double> moments(const JacobiCoefficients& coeffs, int m_max);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch), nodes ascending.
QuadratureRule gauss_legendre(int n);

}  // namespace jspec

#endif  // JSPEC_JACOBI_HPP
