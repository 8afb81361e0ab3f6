#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <thread>

#include "jspec/jacobi.hpp"
#include "jspec/meixner.hpp"
#include "test_util.hpp"

using namespace jspec;
using testutil::rel_err;
using testutil::uniform;

namespace {

double recurrence_residual(const JacobiCoefficients& j, const PolynomialSequence& u, long k) {
  const Complex x = u.x;
  const Complex up = u.value(k + 1), uc = u.value(k);
  const Complex um = k > 0 ? u.value(k - 1) : Complex(0.0);
  const double am = k > 0 ? j.a(k - 1) : 0.0;
  const Complex t1 = j.a(k) * up, t2 = (j.b(k) - x) * uc, t3 = am * um;
  const Complex r = t1 + t2 + t3;
  const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1e-300});
  return std::abs(r) / scale;
}

// Sign-change bisection for p_{n}(x) on [lo, hi].
double bisect_p(const JacobiCoefficients& j, long n, double lo, double hi) {
  auto f = [&](double x) { return eval_p(j, x, n).value(n).real(); };
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("coefficient validation") {
  JacobiCoefficients bad([](long k) { return k == 3 ? -1.0 : 1.0; }, [](long) { return 0.0; },
                         IndexSet::HalfLine, "bad");
  CHECK(bad.a(2) == 1.0);
  CHECK_THROWS_AS(bad.a(3), CoefficientError);
  CHECK_THROWS_AS(bad.a(-1), IndexError);
  CHECK_THROWS_AS(eval_p(bad, 0.3, 10), CoefficientError);
  JacobiCoefficients inf([](long) { return 1.0; }, [](long) { return HUGE_VAL; },
                         IndexSet::HalfLine, "inf");
  CHECK_THROWS_AS(inf.b(0), CoefficientError);
}

TEST_CASE("memoized coefficients are safe under concurrent reads") {
  const JacobiCoefficients sw = stieltjes_wigert_coefficients(0.99);
  std::vector<std::thread> pool;
  std::vector<double> sums(4, 0.0);
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (long k = 0; k < 2000; ++k) sums[t] += std::log(sw.a(k));
    });
  }
  for (auto& th : pool) th.join();
  for (int t = 1; t < 4; ++t) CHECK(sums[t] == sums[0]);
  CHECK(rel_err(sw.a(3), std::pow(0.99, -7.5) * std::sqrt(1.0 - std::pow(0.99, 4))) < 1e-14);
  CHECK_THROWS_AS(stieltjes_wigert_coefficients(0.5).a(600), CoefficientError);
}

TEST_CASE("eval_p and eval_r small cases") {
  const JacobiCoefficients ch = chebyshev_coefficients();
  const PolynomialSequence p1 = eval_p(ch, 1.0, 20);
  for (long k = 0; k <= 20; ++k) CHECK(rel_err(p1.value(k), Complex(k + 1.0)) < 1e-14);
  CHECK(eval_p(ch, 0.7, 0).size() == 1);
  CHECK(eval_p(ch, 0.7, 0).value(0) == Complex(1.0));
  const PolynomialSequence p0 = eval_p(ch, 0.0, 8);
  const double alt[] = {1, 0, -1, 0, 1, 0, -1, 0, 1};
  for (long k = 0; k <= 8; ++k) CHECK(std::abs(p0.value(k) - alt[k]) < 1e-15);

  CHECK(eval_r(ch, 0.3, 0).value(0) == Complex(0.0));
  const PolynomialSequence r = eval_r(ch, 0.3, 4);
  CHECK(r.value(1) == Complex(2.0));
  // Hand recurrence r_{k+1} = (x r_k - r_{k-1}/2)/(1/2): 0, 2, 1.2, -1.28, -1.968.
  const double want[] = {0.0, 2.0, 1.2, -1.28, -1.968};
  for (long k = 0; k <= 4; ++k) CHECK(std::abs(r.value(k) - want[k]) < 1e-14);
}

TEST_CASE("recurrence residual of p and r") {
  const JacobiCoefficients models[] = {chebyshev_coefficients(), stieltjes_wigert_coefficients(0.5),
                                       linear_coefficients()};
  for (const auto& j : models) {
    for (int t = 0; t < 5; ++t) {
      const Complex x(uniform(-3, 3), uniform(-2, 2));
      const PolynomialSequence p = eval_p(j, x, 60);
      const PolynomialSequence r = eval_r(j, x, 60);
      for (long k = 1; k < 59; ++k) {
        CHECK(recurrence_residual(j, p, k) < 1e-12);
        CHECK(recurrence_residual(j, r, k) < 1e-12);
      }
    }
  }
}

TEST_CASE("log-rescaling keeps huge polynomials finite") {
  const JacobiCoefficients ch = chebyshev_coefficients();
  const PolynomialSequence p = eval_p(ch, 50.0, 2000);
  // p_k(50) grows like (50 + sqrt(2499))^k.
  const double lv = p.log_value(2000).real();
  CHECK(std::isfinite(lv));
  CHECK(std::abs(lv / 2000.0 - std::log(50.0 + std::sqrt(2499.0))) < 1e-3);
}

TEST_CASE("wronskian properties") {
  const JacobiCoefficients sw = stieltjes_wigert_coefficients(0.5);
  const Complex x(0.4, 0.3);
  const PolynomialSequence p = eval_p(sw, x, 40);
  const PolynomialSequence r = eval_r(sw, x, 40);
  CHECK(std::abs(wronskian(sw, p, p, 5)) == 0.0);
  for (long k = 0; k < 40; ++k) {
    const Complex w = wronskian(sw, p, r, k);
    CHECK(std::abs(w + 1.0) <= 1e-10 * std::max(1.0, wronskian_scale(sw, p, r, k)));
  }
  CHECK(std::abs(wronskian(sw, r, p, 3) - 1.0) < 1e-10 * wronskian_scale(sw, r, p, 3));
  CHECK_THROWS_AS(wronskian(sw, p, r, 40), IndexError);
}

TEST_CASE("wronskian constancy over 20 random points, k <= 200") {
  const JacobiCoefficients ch = chebyshev_coefficients();
  const JacobiCoefficients lin = linear_coefficients();
  for (int t = 0; t < 20; ++t) {
    const Complex x(uniform(-2, 2), uniform(-1.5, 1.5));
    for (const auto& j : {ch, lin}) {
      const PolynomialSequence p = eval_p(j, x, 201);
      const PolynomialSequence r = eval_r(j, x, 201);
      double worst = 0.0;
      for (long k = 0; k <= 200; ++k) {
        const double err = std::abs(wronskian(j, p, r, k) + 1.0) /
                           std::max(1.0, wronskian_scale(j, p, r, k));
        worst = std::max(worst, err);
      }
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("Christoffel-Darboux kernel") {
  const JacobiCoefficients lin = linear_coefficients();
  const JacobiCoefficients sw = stieltjes_wigert_coefficients(0.7);
  CHECK(cd_kernel(lin, 0.3, -0.8, 1) == Complex(1.0));
  for (const auto& j : {chebyshev_coefficients(), lin, sw}) {
    const bool unbounded_growth = j.label() == sw.label();
    for (int t = 0; t < 10; ++t) {
      const Complex x(uniform(-1.5, 1.5), uniform(-0.5, 0.5));
      const Complex y(uniform(-1.5, 1.5), uniform(-0.5, 0.5));
      const long n = 1 + static_cast<long>(uniform(0, 99));
      const PolynomialSequence px = eval_p(j, x, n);
      const PolynomialSequence py = eval_p(j, y, n);
      Complex direct = 0.0, diag = 0.0;
      double mag = 0.0, dmag = 0.0;
      for (long k = 0; k < n; ++k) {
        direct += px.value(k) * py.value(k);
        mag += std::abs(px.value(k) * py.value(k));
        diag += px.value(k) * px.value(k);
        dmag += std::abs(px.value(k) * px.value(k));
      }
      if (unbounded_growth) {
        // The divided difference cancels terms of size a_{n-1}|p_n p_{n-1}|/|x-y|,
        // which for Stieltjes-Wigert far exceed the kernel itself.
        const double an = j.a(n - 1);
        const double terms = an *
            std::max(std::abs(px.value(n) * py.value(n - 1)), std::abs(px.value(n - 1) * py.value(n))) /
            std::abs(x - y);
        CHECK(std::abs(cd_kernel(j, x, y, n) - direct) <= 1e-12 * std::max(mag, terms));
      } else {
        CHECK(std::abs(cd_kernel(j, x, y, n) - direct) <= 1e-10 * mag);
        CHECK(std::abs(cd_kernel(j, x, x, n) - diag) <= 1e-10 * dmag);
      }
    }
  }
  // Confluent branch on Stieltjes-Wigert at small degree, where it is well conditioned.
  const Complex x(0.4, 0.1);
  const PolynomialSequence px = eval_p(sw, x, 6);
  Complex diag = 0.0;
  for (long k = 0; k < 6; ++k) diag += px.value(k) * px.value(k);
  CHECK(rel_err(cd_kernel(sw, x, x, 6), diag) < 1e-8);
}

TEST_CASE("truncation") {
  const JacobiCoefficients ch = chebyshev_coefficients();
  const TruncatedMatrix t0 = truncate(ch, 0);
  CHECK(t0.diag.size() == 1);
  CHECK(t0.offdiag.empty());
  const TruncatedMatrix t2 = truncate(ch, 2);
  CHECK(t2.diag == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(t2.offdiag == std::vector<double>{0.5, 0.5});

  const TruncatedMatrix tm = truncate(coefficients(MeixnerParams{}), 1);
  CHECK(std::abs(tm.diag[0] - 1.0) < 1e-15);
  CHECK(std::abs(tm.diag[1] - 5.0) < 1e-15);
  CHECK(std::abs(tm.offdiag[0] - std::sqrt(0.75 * 0.75 + 0.0)) < 1e-15);
}

TEST_CASE("eigen") {
  const std::vector<EigenPair> e1 = eigen({{0.3}, {}});
  REQUIRE(e1.size() == 1);
  CHECK(e1[0].value == 0.3);
  CHECK(e1[0].first_component_sq == 1.0);
  const std::vector<EigenPair> e2 = eigen({{0.0, 0.0}, {1.0}});
  CHECK(std::abs(e2[0].value + 1.0) < 1e-15);
  CHECK(std::abs(e2[1].value - 1.0) < 1e-15);
  CHECK(std::abs(e2[0].first_component_sq - 0.5) < 1e-15);
  CHECK_THROWS_AS(eigen({{0.0, 0.0}, {}}), DomainError);

  const JacobiCoefficients ch = chebyshev_coefficients();
  const long n = 12;
  const std::vector<EigenPair> e = eigen(truncate(ch, n));
  for (long j = 1; j <= n + 1; ++j) {
    const double want = std::cos((n + 2 - j) * kPi / (n + 2));
    CHECK(std::abs(e[j - 1].value - want) < 1e-13);
    // Independent check: a sign change of p_{n+1} brackets the eigenvalue.
    const double z = bisect_p(ch, n + 1, want - 0.05, want + 0.05);
    CHECK(std::abs(e[j - 1].value - z) < 1e-12);
  }
}

TEST_CASE("zeros of p_n") {
  const JacobiCoefficients ch = chebyshev_coefficients();
  const std::vector<double> z1 = zeros_of_p(ch, 1);
  REQUIRE(z1.size() == 1);
  CHECK(std::abs(z1[0]) < 1e-15);
  const std::vector<double> z3 = zeros_of_p(ch, 3);
  CHECK(std::abs(z3[0] + std::sqrt(0.5)) < 1e-14);
  CHECK(std::abs(z3[1]) < 1e-14);
  CHECK(std::abs(z3[2] - std::sqrt(0.5)) < 1e-14);
  for (const auto& j : {ch, stieltjes_wigert_coefficients(0.6), linear_coefficients()}) {
    for (long n = 2; n < 30; n += 3) {
      const std::vector<double> a = zeros_of_p(j, n);
      const std::vector<double> b = zeros_of_p(j, n + 1);
      for (long i = 0; i + 1 < n; ++i) CHECK(a[i + 1] - a[i] > 0.0);
      for (long i = 0; i < n; ++i) {
        CHECK(b[i] < a[i]);
        CHECK(a[i] < b[i + 1]);
      }
    }
  }
}

TEST_CASE("moments and quadrature exactness") {
  const JacobiCoefficients ch = chebyshev_coefficients();
  const std::vector<double> m = moments(ch, 9);
  CHECK(m[0] == 1.0);
  CHECK(std::abs(m[2] - 0.25) < 1e-15);
  CHECK(std::abs(m[4] - 0.125) < 1e-15);  // Catalan(2)/4^2
  for (int j = 1; j < 10; j += 2) CHECK(m[j] == 0.0);

  const JacobiCoefficients sw = stieltjes_wigert_coefficients(0.8);
  for (const auto& j : {ch, linear_coefficients(), sw}) {
    const long n = 6;
    const std::vector<double> mm = moments(j, 2 * n + 1);
    const std::vector<EigenPair> e = eigen(truncate(j, n));
    for (int k = 0; k <= 2 * n + 1; ++k) {
      double s = 0.0, mag = 0.0;
      for (const auto& ep : e) {
        s += ep.first_component_sq * std::pow(ep.value, k);
        mag += ep.first_component_sq * std::abs(std::pow(ep.value, k));
      }
      CHECK(std::abs(s - mm[k]) <= 1e-10 * mag);
    }
  }
}

TEST_CASE("eigenvalues of bounded operators respect the norm bound") {
  JacobiCoefficients j([](long k) { return 0.5 + 0.25 * std::sin(k); },
                       [](long k) { return 0.3 * std::cos(3.0 * k); }, IndexSet::HalfLine, "osc");
  const std::vector<EigenPair> e = eigen(truncate(j, 80));
  const double bound = 2.0 * (0.75 + 0.3);
  for (const auto& ep : e) CHECK(std::abs(ep.value) <= bound);
}

TEST_CASE("Gauss-Legendre rule") {
  const QuadratureRule g = gauss_legendre(20);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 38);
  CHECK(std::abs(s - 2.0 / 39.0) < 1e-14);
}
