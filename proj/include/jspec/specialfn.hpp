#ifndef JSPEC_SPECIALFN_HPP
#define JSPEC_SPECIALFN_HPP

// Complex special-function kernel: log-gamma, Pochhammer symbols, the Gauss
// hypergeometric series and its transformations, q-Pochhammer symbols and the
// basic hypergeometric 2phi1 series.
//
// All functions are pure. Series are summed until two consecutive terms fall
// below rel_tol * |partial sum|.

#include <complex>
#include <limits>

#include "jspec/errors.hpp"

namespace jspec {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Marker for the infinite q-Pochhammer product.
inline constexpr int kInfinity = std::numeric_limits<int>::max();

struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 10'000;

  /// Throws DomainError unless rel_tol > 0 and max_terms >= 1.
  void validate() const;
};

/// True when z is exactly a non-positive integer.
bool is_nonpositive_integer(Complex z);

/// Principal branch of log Gamma(z). Throws PoleError at 0, -1, -2, ...
Complex log_gamma(Complex z);

/// Gamma(z) = exp(log_gamma(z)).
Complex gamma(Complex z);

/// 1/Gamma(z); exactly zero at the poles of Gamma.
Complex rgamma(Complex z);

/// Principal power w^s = exp(s log w); 0^s = 0 for Re s > 0.
Complex cpow(Complex w, Complex s);

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), k >= 0.
Complex pochhammer(Complex a, int k);

/// Gauss 2F1(a,b;c;x) by direct summation, |x| < 1.
Complex hyp2f1(Complex a, Complex b, Complex c, Complex x,
               const SeriesControl& ctl = {});

/// 2F1(a,b;c;x) evaluated as (1-x)^{c-a-b} 2F1(c-a,c-b;c;x).
Complex hyp2f1_euler(Complex a, Complex b, Complex c, Complex x,
                     const SeriesControl& ctl = {});

/// 2F1(a,b;c;x) evaluated as (1-x)^{-a} 2F1(a,c-b;c;x/(x-1)).
Complex hyp2f1_pfaff(Complex a, Complex b, Complex c, Complex x,
                     const SeriesControl& ctl = {});

/// Regularized 2F1(a,b;c;x)/Gamma(c), finite for every c (including
/// c = 0, -1, -2, ...). Picks the direct series or the Pfaff form, whichever
/// has the smaller argument; x must avoid the cut [1, inf).
Complex hyp2f1_regularized(Complex a, Complex b, Complex c, Complex x,
                           const SeriesControl& ctl = {});

/// Complex logarithm of hyp2f1_regularized (any branch), for callers that
/// combine it with large Gamma-function prefactors before exponentiating.
Complex log_hyp2f1_regularized(Complex a, Complex b, Complex c, Complex x,
                               const SeriesControl& ctl = {});

/// 2F1(a,b;g;1-x)/Gamma(g) through the x <-> 1-x connection formula, with
/// x evaluated by hyp2f1_regularized. For real x < 0 the point 1-x lies on
/// the cut; the principal power x^{1-c} then selects the limit of the
/// analytic continuation from below the cut (Im(1-x) -> 0-).
/// Throws PoleError when a + b - g is an integer.
Complex hyp2f1_reflected_regularized(Complex a, Complex b, Complex g,
                                     Complex x, const SeriesControl& ctl = {});

/// Complex logarithm of hyp2f1_reflected_regularized.
Complex log_hyp2f1_reflected_regularized(Complex a, Complex b, Complex g,
                                         Complex x, const SeriesControl& ctl = {});

/// (a;q)_k = prod_{i<k} (1 - a q^i); pass kInfinity for the infinite product,
/// which requires 0 < q < 1 and is truncated once |a| q^i < 1e-17.
Complex qpochhammer(Complex a, double q, int k);

/// Shorthand for qpochhammer(a, q, kInfinity).
Complex qpochhammer_inf(Complex a, double q);

/// log of (a;q)_inf for real a with every factor positive (a < 1 suffices
/// when a <= 0 or aq^i < 1 for all i). Throws DomainError otherwise.
double log_qpochhammer_inf_real(double a, double q);

/// Basic hypergeometric 2phi1(a,b;c;q,x) by direct summation, |x| < 1.
Complex phi21(Complex a, Complex b, Complex c, double q, Complex x,
              const SeriesControl& ctl = {});

}  // namespace jspec

#endif  // JSPEC_SPECIALFN_HPP
