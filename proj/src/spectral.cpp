#include "jspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace jspec {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Determinate:
      return "determinate";
    case Verdict::Indeterminate:
      return "indeterminate";
    case Verdict::Undecided:
      return "undecided";
  }
  return "undecided";
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Coefficients k = 0..K-1 up to the first non-finite value or the magnitude
// cap; `capped` reports whether the scan stopped early.
struct Scan {
  std::vector<double> a, b;
  bool capped = false;
};

Scan scan_coefficients(const JacobiCoefficients& coeffs, long terms, double cap) {
  Scan s;
  for (long k = 0; k < terms; ++k) {
    const double a = coeffs.raw_a(k);
    const double b = coeffs.raw_b(k);
    if (!(std::isfinite(a) && std::isfinite(b)) || std::abs(a) > cap || std::abs(b) > cap) {
      s.capped = true;
      break;
    }
    if (!(a > 0.0)) {
      throw CoefficientError(coeffs.label() + ": a_" + std::to_string(k) + " is not positive");
    }
    s.a.push_back(a);
    s.b.push_back(b);
  }
  return s;
}

constexpr long kMinScan = 8;
constexpr double kGrowthTol = 1e-3;

Criterion boundedness(const Scan& s) {
  Criterion c{"boundedness", 0.0, false, ""};
  const long n = static_cast<long>(s.a.size());
  if (s.capped) {
    c.value = std::numeric_limits<double>::infinity();
    c.conclusion = "coefficients exceed the scan cap after " + std::to_string(n) +
                   " terms; unbounded";
    return c;
  }
  if (n < kMinScan) {
    c.conclusion = "too few coefficients to judge";
    return c;
  }
  double early = 0.0, late = 0.0;
  for (long k = 0; k < n; ++k) {
    const double m = s.a[k] + std::abs(s.b[k]);
    (k < n / 2 ? early : late) = std::max(k < n / 2 ? early : late, m);
  }
  c.value = std::max(early, late);
  c.fired = late <= early * (1.0 + kGrowthTol);
  c.conclusion = c.fired ? "sup(a_k + |b_k|) ~ " + fmt(c.value) + " stable over " +
                               std::to_string(n) + " terms; bounded, determinate"
                         : "sup(a_k + |b_k|) still growing (" + fmt(early) + " -> " +
                               fmt(late) + ")";
  return c;
}

Criterion carleman(const JacobiCoefficients& coeffs, long terms) {
  Criterion c{"carleman", 0.0, false, ""};
  std::vector<double> increments;
  double block = 0.0;
  long next_edge = 2;
  bool stopped = false;
  for (long k = 0; k < terms; ++k) {
    if (k + 1 == next_edge) {
      increments.push_back(block);
      block = 0.0;
      next_edge *= 2;
    }
    const double a = coeffs.raw_a(k);
    if (std::isnan(a) || !(a > 0.0)) {
      stopped = true;
      break;
    }
    block += std::isfinite(a) ? 1.0 / a : 0.0;
  }
  if (!stopped && terms + 1 == next_edge) increments.push_back(block);
  if (increments.size() < 4) {
    c.conclusion = "too few dyadic blocks";
    return c;
  }
  const double last = increments.back();
  const double prev = increments[increments.size() - 2];
  c.value = prev > 0.0 ? last / prev : 0.0;
  c.fired = prev > 0.0 && c.value >= 0.95;
  c.conclusion = "dyadic increments of sum 1/a_k have ratio " + fmt(c.value) +
                 (c.fired ? "; divergent (heuristic), determinate" : "; looks convergent");
  return c;
}

Criterion one_sided(const Scan& s, int sign) {
  Criterion c{sign > 0 ? "one_sided_plus" : "one_sided_minus", 0.0, false, ""};
  const long n = static_cast<long>(s.a.size());
  if (n < kMinScan) {
    c.conclusion = "too few coefficients to judge";
    return c;
  }
  double early = -std::numeric_limits<double>::infinity();
  double late = early;
  for (long k = 1; k < n; ++k) {
    const double v = s.a[k] + sign * s.b[k] + s.a[k - 1];
    (k < n / 2 ? early : late) = std::max(k < n / 2 ? early : late, v);
  }
  const double tol = kGrowthTol * (1.0 + std::abs(early));
  c.value = std::max(early, late);
  c.fired = late <= early + tol;
  c.conclusion = std::string("sup(a_k ") + (sign > 0 ? "+" : "-") + " b_k + a_{k-1}) " +
                 (c.fired ? "bounded by ~" + fmt(c.value) + "; determinate"
                          : "growing (" + fmt(early) + " -> " + fmt(late) + ")");
  return c;
}

}  // namespace

ClassificationReport classify(const JacobiCoefficients& coeffs,
                              const ClassificationOptions& opts) {
  if (coeffs.index_set() != IndexSet::HalfLine) {
    throw DomainError("classify: needs half-line coefficients");
  }
  ClassificationReport rep;
  const Scan s = scan_coefficients(coeffs, opts.scan_terms, opts.magnitude_cap);
  rep.criteria.push_back(boundedness(s));
  rep.criteria.push_back(carleman(coeffs, opts.carleman_terms));
  rep.criteria.push_back(one_sided(s, +1));
  rep.criteria.push_back(one_sided(s, -1));

  // sum |p_k(i)|^2 up to the last finite coefficient.
  long kmax = 0;
  while (kmax < opts.poly_terms) {
    const double a = coeffs.raw_a(kmax);
    const double b = coeffs.raw_b(kmax);
    if (!(std::isfinite(a) && std::isfinite(b) && a > 0.0)) break;
    ++kmax;
  }
  Criterion sum{"sum_p_at_i", 0.0, false, ""};
  if (kmax >= 60) {
    const PolynomialSequence p = eval_p(coeffs, Complex(0.0, 1.0), kmax);
    std::vector<double> terms(p.size());
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      terms[k] = std::exp(2.0 * p.log_value(k).real());
      total += terms[k];
      rep.partial_sums.push_back(total);
    }
    const std::size_t n = terms.size();
    double rho = 0.0;
    bool ratios_ok = true;
    for (std::size_t k = n - 50; k < n; ++k) {
      const double r = terms[k] / terms[k - 1];
      if (!(r < 0.99)) ratios_ok = false;
      rho = std::max(rho, r);
    }
    const double tail = ratios_ok ? terms.back() * rho / (1.0 - rho)
                                  : std::numeric_limits<double>::infinity();
    sum.value = total;
    sum.fired = ratios_ok && tail < 1e-8 * total;
    sum.conclusion = sum.fired ? "partial sums converge geometrically (ratio <= " + fmt(rho) +
                                     ", tail bound " + fmt(tail) +
                                     "); numerical evidence of indeterminacy"
                               : "no decisive geometric convergence over " +
                                     std::to_string(n) + " terms";
  } else {
    sum.conclusion = "fewer than 60 finite coefficients";
  }
  rep.criteria.push_back(sum);

  const bool determinate = std::any_of(rep.criteria.begin(), rep.criteria.begin() + 4,
                                       [](const Criterion& c) { return c.fired; });
  if (determinate) {
    rep.verdict = Verdict::Determinate;
    rep.note = "a sufficient condition for determinacy holds";
  } else if (sum.fired) {
    rep.verdict = Verdict::Indeterminate;
    rep.note = "sum |p_k(i)|^2 appears finite; this is numerical evidence, not a proof";
  } else {
    rep.verdict = Verdict::Undecided;
    rep.note = "no criterion was decisive";
  }
  return rep;
}

namespace {

// Backward continued fraction to depth D; t[j] (1 <= j < D) holds the tail
// a_{j-1}^2/(z - b_j - t[j+1]). The tail beyond D is started at the root of
// t = a_{D-1}^2/(z - b_D - t) with |t| <= a_{D-1}, which is exact for
// constant coefficients. a and b must hold D + 1 entries. Returns w(z).
Complex continued_fraction(const std::vector<double>& a, const std::vector<double>& b,
                           Complex z, long depth, std::vector<Complex>* t_out) {
  const Complex u = z - b[depth];
  const Complex disc = std::sqrt(u * u - 4.0 * a[depth - 1] * a[depth - 1]);
  Complex t = 0.5 * (u - disc);
  if (std::abs(t) > a[depth - 1]) t = 0.5 * (u + disc);
  if (!std::isfinite(std::abs(t))) t = 0.0;
  if (t_out) t_out->assign(depth + 1, Complex(0.0));
  for (long k = depth - 1; k >= 1; --k) {
    t = a[k - 1] * a[k - 1] / (z - b[k] - t);
    if (t_out) (*t_out)[k] = t;
  }
  return -1.0 / (z - b[0] - t);
}

bool close(Complex x, Complex y, double tol) {
  return std::abs(x - y) <= tol * std::abs(y);
}

}  // namespace

StieltjesTransform::StieltjesTransform(JacobiCoefficients coeffs, StieltjesOptions opts)
    : coeffs_(std::move(coeffs)), opts_(opts) {
  if (coeffs_.index_set() != IndexSet::HalfLine) {
    throw DomainError("stieltjes_w: needs half-line coefficients");
  }
  report_ = classify(coeffs_);
}

Complex StieltjesTransform::operator()(Complex z) const {
  return free_solution(z, 0).front();
}

std::vector<Complex> StieltjesTransform::free_solution(Complex z, long k_max) const {
  if (report_.verdict != Verdict::Determinate) {
    throw ExtensionAmbiguous(coeffs_.label() + ": operator is " + to_string(report_.verdict) +
                             "; w(z) depends on the self-adjoint extension");
  }
  if (z.imag() == 0.0) throw DomainError("stieltjes_w: z must be non-real");
  if (k_max < 0) throw DomainError("free_solution: k_max must be non-negative");

  auto solve = [&](long depth, std::vector<Complex>& f) {
    std::vector<double> a(depth + 1), b(depth + 1);
    coeffs_.fill(0, a, b);
    std::vector<Complex> t;
    const Complex w = continued_fraction(a, b, z, depth, &t);
    f.assign(k_max + 1, Complex(0.0));
    f[0] = w;
    for (long j = 1; j <= k_max; ++j) f[j] = f[j - 1] * t[j] / a[j - 1];
  };

  long depth = std::max(opts_.initial_depth, 2 * k_max + 64);
  std::vector<Complex> prev, cur;
  solve(depth, prev);
  // Change between the last two depths; infinite until a comparison exists.
  double last_change = std::numeric_limits<double>::infinity();
  while (true) {
    if (2 * depth > opts_.max_depth) {
      throw SlowConvergence("stieltjes_w: continued fraction not settled at maximum depth",
                            prev.front(), last_change);
    }
    depth *= 2;
    solve(depth, cur);
    last_change = std::abs(cur.front() - prev.front());
    if (close(prev.front(), cur.front(), opts_.rel_tol) &&
        close(prev.back(), cur.back(), opts_.rel_tol)) {
      return cur;
    }
    prev.swap(cur);
  }
}

Complex stieltjes_w(const JacobiCoefficients& coeffs, Complex z, long depth) {
  if (depth < 1) throw DomainError("stieltjes_w: depth must be positive");
  if (z.imag() == 0.0) throw DomainError("stieltjes_w: z must be non-real");
  std::vector<double> a(depth + 1), b(depth + 1);
  coeffs.fill(0, a, b);
  return continued_fraction(a, b, z, depth, nullptr);
}

Complex stieltjes_w(const JacobiCoefficients& coeffs, Complex z) {
  return StieltjesTransform(coeffs)(z);
}

PerronResult perron_invert(const WEvaluator& w, const std::vector<double>& xs,
                           const std::vector<double>& eps_schedule) {
  if (eps_schedule.size() < 2) throw DomainError("perron_invert: need at least two eps values");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0) || (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))) {
      throw DomainError("perron_invert: eps schedule must be positive and decreasing");
    }
  }
  PerronResult out;
  const std::size_t m = eps_schedule.size();
  const double el = eps_schedule[m - 1];
  const double ep = eps_schedule[m - 2];
  for (double x : xs) {
    DensitySample s{x, 0.0, {}, {}, false};
    for (double eps : eps_schedule) {
      const double im = w(Complex(x, eps)).imag();
      s.raw.push_back(im / kPi);
      s.eps_im.push_back(eps * im);
    }
    const double dl = s.raw[m - 1];
    const double dp = s.raw[m - 2];
    s.density = std::max(0.0, dl + (dl - dp) * el / (ep - el));
    s.stable = std::abs(dl - dp) <= 0.1 * std::max(std::abs(dl), 1e-300);
    const double ml = s.eps_im[m - 1];
    const double mp = s.eps_im[m - 2];
    if (ml > 0.0 && std::abs(ml - mp) < 0.05 * ml) {
      out.atom_candidates.push_back({x, ml});
    }
    out.samples.push_back(std::move(s));
  }
  return out;
}

PerronResult perron_invert(const WEvaluator& w, double lo, double hi, int samples,
                           const std::vector<double>& eps_schedule) {
  if (samples < 1 || !(hi >= lo)) throw DomainError("perron_invert: bad grid");
  std::vector<double> xs(samples);
  for (int i = 0; i < samples; ++i) {
    xs[i] = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
  }
  return perron_invert(w, xs, eps_schedule);
}

GreenKernelValue green(const StieltjesTransform& w, Complex z, long k, long l) {
  if (k < 0 || l < 0) throw IndexError("green: negative index on a half line");
  const long lo = std::min(k, l);
  const long hi = std::max(k, l);
  const std::vector<Complex> f = w.free_solution(z, hi);
  const PolynomialSequence p = eval_p(w.coefficients(), z, lo);
  return {k, l, z, f[hi] * p.value(lo)};
}

GreenKernelValue green(const JacobiCoefficients& coeffs, Complex z, long k, long l) {
  return green(StieltjesTransform(coeffs), z, k, l);
}

SpectralMeasure measure_from_truncation(const JacobiCoefficients& coeffs, long n) {
  SpectralMeasure m;
  for (const EigenPair& e : eigen(truncate(coeffs, n))) {
    m.atoms.push_back({e.value, e.first_component_sq});
    m.total_mass_estimate += e.first_component_sq;
  }
  m.note = "Gaussian quadrature of the finite section J_" + std::to_string(n);
  return m;
}

}  // namespace jspec
