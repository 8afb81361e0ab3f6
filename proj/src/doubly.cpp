#include "jspec/doubly.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace jspec {

SplitOperators split(const JacobiCoefficients& full) {
  if (full.index_set() != IndexSet::FullLine) {
    throw DomainError("split: needs full-line coefficients");
  }
  JacobiCoefficients plus([full](long k) { return full.raw_a(k); },
                          [full](long k) { return full.raw_b(k); }, IndexSet::HalfLine,
                          full.label() + "+");
  JacobiCoefficients minus([full](long k) { return full.raw_a(-k - 2); },
                           [full](long k) { return full.raw_b(-k - 1); }, IndexSet::HalfLine,
                           full.label() + "-");
  return {plus, minus};
}

namespace {

std::optional<int> index_of(const ClassificationReport& r) {
  switch (r.verdict) {
    case Verdict::Determinate:
      return 0;
    case Verdict::Indeterminate:
      return 1;
    case Verdict::Undecided:
      break;
  }
  return std::nullopt;
}

}  // namespace

DeficiencyReport deficiency(const JacobiCoefficients& full, const ClassificationOptions& opts) {
  const SplitOperators s = split(full);
  DeficiencyReport rep;
  rep.plus_evidence = classify(s.plus, opts);
  rep.minus_evidence = classify(s.minus, opts);
  rep.plus = index_of(rep.plus_evidence);
  rep.minus = index_of(rep.minus_evidence);
  if (rep.plus && rep.minus) rep.total = *rep.plus + *rep.minus;
  return rep;
}

struct SolutionVector::Cache {
  std::function<Complex(long)> eval;
  std::shared_mutex mutex;
  std::unordered_map<long, Complex> values;
};

SolutionVector::SolutionVector(std::function<Complex(long)> eval, Complex z, SummableEnd end)
    : cache_(std::make_shared<Cache>()), z_(z), end_(end) {
  cache_->eval = std::move(eval);
}

Complex SolutionVector::operator()(long k) const {
  {
    std::shared_lock lock(cache_->mutex);
    const auto it = cache_->values.find(k);
    if (it != cache_->values.end()) return it->second;
  }
  const Complex v = cache_->eval(k);
  std::unique_lock lock(cache_->mutex);
  cache_->values.emplace(k, v);
  return v;
}

SolutionVector SolutionVector::scaled(Complex alpha) const {
  SolutionVector self = *this;
  return SolutionVector([self, alpha](long k) { return alpha * self(k); }, z_, end_);
}

Complex full_wronskian(const JacobiCoefficients& full, const SolutionVector& u,
                       const SolutionVector& v, long k) {
  return full.a(k) * (u(k + 1) * v(k) - u(k) * v(k + 1));
}

double recurrence_residual(const JacobiCoefficients& full, const SolutionVector& u, long k) {
  const Complex t1 = full.a(k) * u(k + 1);
  const Complex t2 = (full.b(k) - u.z()) * u(k);
  const Complex t3 = full.a(k - 1) * u(k - 1);
  const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
  const double r = std::abs(t1 + t2 + t3);
  return scale > 0.0 ? r / scale : r;
}

GreenKernelValue green_doubly(const JacobiCoefficients& full, const SolutionVector& phi,
                              const SolutionVector& Phi, long k, long l) {
  const long lo = std::min(k, l);
  const long hi = std::max(k, l);
  const Complex w = full_wronskian(full, phi, Phi, lo);
  const double scale = full.a(lo) * std::max(std::abs(phi(lo + 1) * Phi(lo)),
                                             std::abs(phi(lo) * Phi(lo + 1)));
  if (!(std::abs(w) >= 1e-12 * scale) || w == Complex(0.0)) {
    throw DegenerateWronskian("green_doubly: [phi, Phi] vanishes to working precision");
  }
  return {k, l, phi.z(), Phi(lo) * phi(hi) / w};
}

TruncatedMatrix truncate_doubly(const JacobiCoefficients& full, long m, long n) {
  if (m < 0 || n < 0) throw DomainError("truncate_doubly: M and N must be non-negative");
  TruncatedMatrix t;
  t.diag.resize(m + n + 1);
  t.offdiag.resize(m + n);
  full.fill(-m, t.offdiag, t.diag);
  return t;
}

}  // namespace jspec
