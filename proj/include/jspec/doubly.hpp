#ifndef JSPEC_DOUBLY_HPP
#define JSPEC_DOUBLY_HPP

// Doubly infinite Jacobi operators: the split into two half-line operators,
// deficiency indices, recurrence solutions on the full line and the Green
// kernel.

#include <functional>
#include <memory>
#include <optional>

#include "jspec/jacobi.hpp"
#include "jspec/spectral.hpp"

namespace jspec {

struct SplitOperators {
  JacobiCoefficients plus;   // (a_k, b_k), k >= 0
  JacobiCoefficients minus;  // (a_{-k-2}, b_{-k-1}), k >= 0
};

SplitOperators split(const JacobiCoefficients& full);

struct DeficiencyReport {
  /// Deficiency index of each side (0 or 1); empty when undecided.
  std::optional<int> plus;
  std::optional<int> minus;
  std::optional<int> total;
  ClassificationReport plus_evidence;
  ClassificationReport minus_evidence;
};

/// Classifies both half-line operators; the total is the sum, undecided if
/// either side is.
DeficiencyReport deficiency(const JacobiCoefficients& full,
                            const ClassificationOptions& opts = {});

enum class SummableEnd { Plus, Minus, Both, Neither };

/// Lazily evaluated solution k -> u_k(z) of the full-line recurrence.
/// Values are memoized; copies share the cache and concurrent reads are safe.
class SolutionVector {
 public:
  SolutionVector(std::function<Complex(long)> eval, Complex z, SummableEnd end);

  Complex operator()(long k) const;
  Complex z() const { return z_; }
  SummableEnd summable_end() const { return end_; }

  /// The solution multiplied by a constant (shares no cache).
  SolutionVector scaled(Complex alpha) const;

 private:
  struct Cache;
  std::shared_ptr<Cache> cache_;
  Complex z_;
  SummableEnd end_;
};

/// a_k (u_{k+1} v_k - u_k v_{k+1}).
Complex full_wronskian(const JacobiCoefficients& full, const SolutionVector& u,
                       const SolutionVector& v, long k);

/// |a_k u_{k+1} + (b_k - z) u_k + a_{k-1} u_{k-1}|, relative to the largest
/// of the three terms.
double recurrence_residual(const JacobiCoefficients& full, const SolutionVector& u, long k);

/// G_{k,l}(z) = Phi_{min(k,l)} phi_{max(k,l)} / [phi, Phi] with phi summable
/// at +inf and Phi at -inf. Throws DegenerateWronskian when
/// |[phi, Phi]| < 1e-12 times the size of the Wronskian's terms.
GreenKernelValue green_doubly(const JacobiCoefficients& full, const SolutionVector& phi,
                              const SolutionVector& Phi, long k, long l);

/// Finite section over indices -M..N.
TruncatedMatrix truncate_doubly(const JacobiCoefficients& full, long m, long n);

}  // namespace jspec

#endif  // JSPEC_DOUBLY_HPP
