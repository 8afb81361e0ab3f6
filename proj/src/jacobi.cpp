#include "jspec/jacobi.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>

namespace jspec {

struct JacobiCoefficients::Store {
  Sequence a_fn;
  Sequence b_fn;
  std::shared_mutex mutex;
  // Index k >= 0 lives at pos[k], k < 0 at neg[-k-1].
  std::vector<double> a_pos, b_pos, a_neg, b_neg;

  bool cached(long k) const {
    return k >= 0 ? static_cast<std::size_t>(k) < a_pos.size()
                  : static_cast<std::size_t>(-k - 1) < a_neg.size();
  }

  double a_at(long k) const { return k >= 0 ? a_pos[k] : a_neg[-k - 1]; }
  double b_at(long k) const { return k >= 0 ? b_pos[k] : b_neg[-k - 1]; }

  // Caller holds the unique lock.
  void extend_to(long k) {
    if (cached(k)) return;
    const bool up = k >= 0;
    std::vector<double>& av = up ? a_pos : a_neg;
    std::vector<double>& bv = up ? b_pos : b_neg;
    const std::size_t need = static_cast<std::size_t>(up ? k + 1 : -k);
    const std::size_t target = std::max({need, 2 * av.size(), std::size_t{64}});
    std::vector<double> na, nb;
    na.reserve(target - av.size());
    nb.reserve(target - av.size());
    for (std::size_t i = av.size(); i < target; ++i) {
      const long idx = up ? static_cast<long>(i) : -static_cast<long>(i) - 1;
      na.push_back(a_fn(idx));
      nb.push_back(b_fn(idx));
    }
    av.insert(av.end(), na.begin(), na.end());
    bv.insert(bv.end(), nb.begin(), nb.end());
  }

  void ensure(long k) {
    {
      std::shared_lock lock(mutex);
      if (cached(k)) return;
    }
    std::unique_lock lock(mutex);
    extend_to(k);
  }
};

JacobiCoefficients::JacobiCoefficients(Sequence a, Sequence b, IndexSet index_set,
                                       std::string label)
    : store_(std::make_shared<Store>()), index_set_(index_set), label_(std::move(label)) {
  store_->a_fn = std::move(a);
  store_->b_fn = std::move(b);
}

JacobiCoefficients JacobiCoefficients::constant(double a, double b, IndexSet index_set,
                                                std::string label) {
  return JacobiCoefficients([a](long) { return a; }, [b](long) { return b; }, index_set,
                            std::move(label));
}

void JacobiCoefficients::check_index(long k) const {
  if (index_set_ == IndexSet::HalfLine && k < 0) {
    throw IndexError(label_ + ": negative index " + std::to_string(k) + " on a half line");
  }
}

double JacobiCoefficients::raw_a(long k) const {
  check_index(k);
  store_->ensure(k);
  std::shared_lock lock(store_->mutex);
  return store_->a_at(k);
}

double JacobiCoefficients::raw_b(long k) const {
  check_index(k);
  store_->ensure(k);
  std::shared_lock lock(store_->mutex);
  return store_->b_at(k);
}

double JacobiCoefficients::a(long k) const {
  const double v = raw_a(k);
  if (!(std::isfinite(v) && v > 0.0)) {
    throw CoefficientError(label_ + ": a_" + std::to_string(k) + " = " + std::to_string(v) +
                           " is not finite and positive");
  }
  return v;
}

double JacobiCoefficients::b(long k) const {
  const double v = raw_b(k);
  if (!std::isfinite(v)) {
    throw CoefficientError(label_ + ": b_" + std::to_string(k) + " is not finite");
  }
  return v;
}

void JacobiCoefficients::fill(long k0, std::span<double> a_out, std::span<double> b_out) const {
  const long n = static_cast<long>(std::max(a_out.size(), b_out.size()));
  if (n == 0) return;
  check_index(k0);
  store_->ensure(k0);
  store_->ensure(k0 + n - 1);
  std::shared_lock lock(store_->mutex);
  for (long i = 0; i < n; ++i) {
    const long k = k0 + i;
    if (static_cast<std::size_t>(i) < a_out.size()) {
      const double v = store_->a_at(k);
      if (!(std::isfinite(v) && v > 0.0)) {
        throw CoefficientError(label_ + ": a_" + std::to_string(k) +
                               " is not finite and positive");
      }
      a_out[i] = v;
    }
    if (static_cast<std::size_t>(i) < b_out.size()) {
      const double v = store_->b_at(k);
      if (!std::isfinite(v)) {
        throw CoefficientError(label_ + ": b_" + std::to_string(k) + " is not finite");
      }
      b_out[i] = v;
    }
  }
}

JacobiCoefficients chebyshev_coefficients() {
  return JacobiCoefficients::constant(0.5, 0.0, IndexSet::HalfLine, "chebyshev");
}

JacobiCoefficients stieltjes_wigert_coefficients(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("stieltjes_wigert: needs 0 < q < 1");
  const double lq = std::log(q);
  auto a = [q, lq](long k) {
    const double kk = static_cast<double>(k);
    return std::exp((-2.0 * kk - 1.5) * lq) * std::sqrt(1.0 - std::pow(q, kk + 1.0));
  };
  auto b = [q, lq](long k) {
    const double kk = static_cast<double>(k);
    return std::exp(-2.0 * kk * lq) * (1.0 + 1.0 / q - std::pow(q, kk));
  };
  return JacobiCoefficients(a, b, IndexSet::HalfLine, "stieltjes_wigert");
}

JacobiCoefficients linear_coefficients() {
  return JacobiCoefficients([](long k) { return static_cast<double>(k) + 1.0; },
                            [](long) { return 0.0; }, IndexSet::HalfLine, "linear");
}

Complex PolynomialSequence::value(std::size_t k) const {
  if (k >= values.size()) throw IndexError("PolynomialSequence: index out of range");
  return values[k] * std::exp(log_scales[k]);
}

Complex PolynomialSequence::log_value(std::size_t k) const {
  if (k >= values.size()) throw IndexError("PolynomialSequence: index out of range");
  return std::log(values[k]) + log_scales[k];
}

namespace {

constexpr long kRescaleEvery = 32;
constexpr double kBig = 1e100;
constexpr double kSmall = 1e-100;

PolynomialSequence run_recurrence(const JacobiCoefficients& coeffs, Complex x, long n,
                                  PolynomialKind kind) {
  if (n < 0) throw DomainError("polynomial sequence: N must be non-negative");
  PolynomialSequence s;
  s.kind = kind;
  s.x = x;
  s.values.resize(n + 1);
  s.log_scales.assign(n + 1, 0.0);
  const bool is_p = kind == PolynomialKind::OrthonormalP;
  s.values[0] = is_p ? 1.0 : 0.0;
  if (n == 0) return s;
  std::vector<double> a(n), b(n);
  coeffs.fill(0, a, b);
  s.values[1] = is_p ? (x - b[0]) / a[0] : 1.0 / a[0];
  double scale = 0.0;
  for (long k = 1; k < n; ++k) {
    s.values[k + 1] = ((x - b[k]) * s.values[k] - a[k - 1] * s.values[k - 1]) / a[k];
    s.log_scales[k + 1] = scale;
    if ((k + 1) % kRescaleEvery == 0) {
      const double m = std::max(std::abs(s.values[k + 1]), std::abs(s.values[k]));
      if (m > kBig || (m < kSmall && m > 0.0)) {
        const double lm = std::log(m);
        scale += lm;
        for (long j : {k, k + 1}) {
          s.values[j] /= m;
          s.log_scales[j] += lm;
        }
      }
    }
  }
  return s;
}

// The product u_i v_j with the scales folded in.
Complex scaled_product(const PolynomialSequence& u, long i, const PolynomialSequence& v,
                       long j) {
  return u.values[i] * v.values[j] * std::exp(u.log_scales[i] + v.log_scales[j]);
}

}  // namespace

PolynomialSequence eval_p(const JacobiCoefficients& coeffs, Complex x, long n) {
  return run_recurrence(coeffs, x, n, PolynomialKind::OrthonormalP);
}

PolynomialSequence eval_r(const JacobiCoefficients& coeffs, Complex x, long n) {
  return run_recurrence(coeffs, x, n, PolynomialKind::AssociatedR);
}

Complex wronskian(const JacobiCoefficients& coeffs, const PolynomialSequence& u,
                  const PolynomialSequence& v, long k) {
  if (k < 0 || static_cast<std::size_t>(k + 1) >= u.size() ||
      static_cast<std::size_t>(k + 1) >= v.size()) {
    throw IndexError("wronskian: sequences do not reach index k+1");
  }
  return coeffs.a(k) * (scaled_product(u, k + 1, v, k) - scaled_product(u, k, v, k + 1));
}

double wronskian_scale(const JacobiCoefficients& coeffs, const PolynomialSequence& u,
                       const PolynomialSequence& v, long k) {
  if (k < 0 || static_cast<std::size_t>(k + 1) >= u.size() ||
      static_cast<std::size_t>(k + 1) >= v.size()) {
    throw IndexError("wronskian: sequences do not reach index k+1");
  }
  return coeffs.a(k) * std::max(std::abs(scaled_product(u, k + 1, v, k)),
                                std::abs(scaled_product(u, k, v, k + 1)));
}

Complex cd_kernel(const JacobiCoefficients& coeffs, Complex x, Complex y, long n) {
  if (n < 1) throw DomainError("cd_kernel: n must be at least 1");
  if (n == 1) return 1.0;
  const double an = coeffs.a(n - 1);
  if (std::abs(x - y) >= 1e-10) {
    const PolynomialSequence px = eval_p(coeffs, x, n);
    const PolynomialSequence py = eval_p(coeffs, y, n);
    return an * (scaled_product(px, n, py, n - 1) - scaled_product(px, n - 1, py, n)) /
           (x - y);
  }
  // Confluent form a_{n-1}(p_n' p_{n-1} - p_{n-1}' p_n) at x, with the
  // derivatives from the differentiated recurrence.
  std::vector<double> a(n), b(n);
  coeffs.fill(0, a, b);
  Complex p0 = 1.0, p1 = (x - b[0]) / a[0];
  Complex d0 = 0.0, d1 = 1.0 / a[0];
  double scale = 0.0;
  for (long k = 1; k < n; ++k) {
    const Complex p2 = ((x - b[k]) * p1 - a[k - 1] * p0) / a[k];
    const Complex d2 = ((x - b[k]) * d1 + p1 - a[k - 1] * d0) / a[k];
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
    const double m = std::max({std::abs(p0), std::abs(p1), std::abs(d0), std::abs(d1)});
    if (m > kBig) {
      scale += 2.0 * std::log(m);
      p0 /= m;
      p1 /= m;
      d0 /= m;
      d1 /= m;
    }
  }
  return an * (d1 * p0 - d0 * p1) * std::exp(scale);
}

TruncatedMatrix truncate(const JacobiCoefficients& coeffs, long n) {
  if (n < 0) throw DomainError("truncate: N must be non-negative");
  TruncatedMatrix m;
  m.diag.resize(n + 1);
  m.offdiag.resize(n);
  coeffs.fill(0, m.offdiag, m.diag);
  return m;
}

std::vector<EigenPair> eigen(const TruncatedMatrix& mat) {
  const std::size_t n = mat.diag.size();
  if (mat.offdiag.size() + 1 != n && !(n == 0 && mat.offdiag.empty())) {
    throw DomainError("eigen: offdiag must have one entry fewer than diag");
  }
  if (n == 0) return {};
  std::vector<double> d = mat.diag;
  std::vector<double> e(n, 0.0);
  std::copy(mat.offdiag.begin(), mat.offdiag.end(), e.begin());
  std::vector<double> z(n, 0.0);  // first row of the accumulated rotations
  z[0] = 1.0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= DBL_EPSILON * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw NoConvergence("eigen: too many QL iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        long i;
        bool deflated = false;
        for (i = static_cast<long>(m) - 1; i >= static_cast<long>(l); --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<EigenPair> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {d[i], z[i] * z[i]};
  std::sort(out.begin(), out.end(),
            [](const EigenPair& x, const EigenPair& y) { return x.value < y.value; });
  return out;
}

std::vector<double> zeros_of_p(const JacobiCoefficients& coeffs, long n) {
  if (n < 1) throw DomainError("zeros_of_p: n must be at least 1");
  const auto pairs = eigen(truncate(coeffs, n - 1));
  std::vector<double> z(pairs.size());
  std::transform(pairs.begin(), pairs.end(), z.begin(),
                 [](const EigenPair& p) { return p.value; });
  return z;
}

std::vector<double> moments(const JacobiCoefficients& coeffs, int m_max) {
  if (m_max < 0) throw DomainError("moments: m_max must be non-negative");
  const long half = m_max / 2 + 1;
  std::vector<double> a(half + 1), b(half + 1);
  coeffs.fill(0, a, b);
  auto apply = [&](const std::vector<double>& v) {
    std::vector<double> w(v.size() + 1, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      w[i] += b[i] * v[i];
      w[i + 1] += a[i] * v[i];
      if (i > 0) w[i - 1] += a[i - 1] * v[i];
    }
    return w;
  };
  std::vector<double> m(m_max + 1);
  std::vector<double> v{1.0};  // J^j e_0
  for (int j = 0; 2 * j <= m_max; ++j) {
    m[2 * j] = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    const std::vector<double> jv = apply(v);
    if (2 * j + 1 <= m_max) {
      m[2 * j + 1] = std::inner_product(v.begin(), v.end(), jv.begin(), 0.0);
    }
    v = jv;
  }
  return m;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  TruncatedMatrix mat;
  mat.diag.assign(n, 0.0);
  mat.offdiag.resize(n - 1);
  for (int k = 0; k + 1 < n; ++k) {
    const double kk = k + 1.0;
    mat.offdiag[k] = kk / std::sqrt((2.0 * kk - 1.0) * (2.0 * kk + 1.0));
  }
  const std::vector<EigenPair> eig = eigen(mat);
  QuadratureRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  for (const EigenPair& e : eig) {
    rule.nodes.push_back(e.value);
    rule.weights.push_back(2.0 * e.first_component_sq);
  }
  return rule;
}

}  // namespace jspec
