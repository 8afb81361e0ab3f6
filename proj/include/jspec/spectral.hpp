#ifndef JSPEC_SPECTRAL_HPP
#define JSPEC_SPECTRAL_HPP

// Half-line spectral machinery: the Stieltjes transform w(z) of the spectral
// measure, Stieltjes-Perron inversion, the Green kernel, Gaussian-quadrature
// approximants and determinacy classification.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jspec/jacobi.hpp"

namespace jspec {

struct Atom {
  double location;
  double mass;
};

struct ContinuousPart {
  double lo;
  double hi;
  std::function<double(double)> density;
};

struct SpectralMeasure {
  std::vector<Atom> atoms;
  std::optional<ContinuousPart> continuous;
  double total_mass_estimate = 0.0;
  std::string note;
};

enum class Verdict { Determinate, Indeterminate, Undecided };

const char* to_string(Verdict v);

struct Criterion {
  std::string name;
  double value;
  bool fired;
  std::string conclusion;
};

struct ClassificationOptions {
  /// Coefficients scanned for the boundedness and one-sided tests.
  long scan_terms = 4096;
  /// Coefficients summed for the Carleman test (rounded to a power of two).
  long carleman_terms = 16384;
  /// Terms of sum |p_k(i)|^2.
  long poly_terms = 300;
  /// Scans stop once |a_k| or |b_k| exceeds this.
  double magnitude_cap = 1e8;
};

struct ClassificationReport {
  Verdict verdict = Verdict::Undecided;
  std::vector<Criterion> criteria;
  /// Partial sums of sum_{k<=K} |p_k(i)|^2.
  std::vector<double> partial_sums;
  std::string note;
};

/// Applies, in order: boundedness, Carleman divergence of sum 1/a_k, the
/// one-sided bounds on a_k +- b_k + a_{k-1}, and summability of |p_k(i)|^2.
/// The first three are sufficient for determinacy; the last only yields
/// numerical evidence of indeterminacy.
ClassificationReport classify(const JacobiCoefficients& coeffs,
                              const ClassificationOptions& opts = {});

struct StieltjesOptions {
  long initial_depth = 64;
  long max_depth = 1L << 20;
  double rel_tol = 1e-10;
};

/// Stieltjes transform w(z) = int dmu(x)/(x - z) of a determinate half-line
/// operator, by the backward continued fraction
/// w(z) = -1/(z - b_0 - a_0^2/(z - b_1 - ...)) with depth doubling.
/// The operator is classified once at construction; indeterminate or
/// undecided operators make every evaluation throw ExtensionAmbiguous.
/// Evaluation is const and safe to call concurrently.
class StieltjesTransform {
 public:
  explicit StieltjesTransform(JacobiCoefficients coeffs, StieltjesOptions opts = {});

  /// Throws SlowConvergence (with the best estimate) when max_depth is
  /// reached before two consecutive depths agree.
  Complex operator()(Complex z) const;

  /// The minimal solution f_0..f_K at z, normalized so f_0 = w(z); it equals
  /// w(z) p_k(z) + r_k(z).
  std::vector<Complex> free_solution(Complex z, long k_max) const;

  const JacobiCoefficients& coefficients() const { return coeffs_; }
  const ClassificationReport& classification() const { return report_; }

 private:
  JacobiCoefficients coeffs_;
  StieltjesOptions opts_;
  ClassificationReport report_;
};

/// One-shot evaluation of w(z) at fixed continued-fraction depth, without
/// the determinacy check or convergence control.
Complex stieltjes_w(const JacobiCoefficients& coeffs, Complex z, long depth);

/// Adaptive evaluation of w(z) (classifies the operator on every call; build
/// a StieltjesTransform to evaluate repeatedly).
Complex stieltjes_w(const JacobiCoefficients& coeffs, Complex z);

struct DensitySample {
  double x;
  /// Extrapolated (1/pi) lim Im w(x + i eps).
  double density;
  /// (1/pi) Im w(x + i eps) for each eps of the schedule.
  std::vector<double> raw;
  /// eps Im w(x + i eps) for each eps of the schedule.
  std::vector<double> eps_im;
  /// Relative change between the last two raw values is below 10%.
  bool stable;
};

struct PerronResult {
  std::vector<DensitySample> samples;
  std::vector<Atom> atom_candidates;
};

using WEvaluator = std::function<Complex(Complex)>;

/// Stieltjes-Perron inversion at the points xs: density from Richardson
/// extrapolation over the eps schedule (linear in eps on the last two
/// values); atoms where eps Im w(x + i eps) stays within 5% across the last
/// two eps values.
PerronResult perron_invert(const WEvaluator& w, const std::vector<double>& xs,
                           const std::vector<double>& eps_schedule = {1e-2, 1e-3, 1e-4});

/// Same on a uniform grid of `samples` points over [lo, hi].
PerronResult perron_invert(const WEvaluator& w, double lo, double hi, int samples,
                           const std::vector<double>& eps_schedule = {1e-2, 1e-3, 1e-4});

struct GreenKernelValue {
  long k;
  long l;
  Complex z;
  Complex value;
};

/// G_{k,l}(z) = f_{max(k,l)}(z) p_{min(k,l)}(z).
GreenKernelValue green(const StieltjesTransform& w, Complex z, long k, long l);
GreenKernelValue green(const JacobiCoefficients& coeffs, Complex z, long k, long l);

/// Gaussian-quadrature measure of the finite section J_N.
SpectralMeasure measure_from_truncation(const JacobiCoefficients& coeffs, long n);

}  // namespace jspec

#endif  // JSPEC_SPECTRAL_HPP
