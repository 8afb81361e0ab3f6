#include <doctest.h>

#include <cmath>

#include "jspec/doubly.hpp"
#include "jspec/meixner.hpp"
#include "jspec/qhyper.hpp"
#include "test_util.hpp"

using namespace jspec;
using testutil::rel_err;

TEST_CASE("split") {
  const JacobiCoefficients c = JacobiCoefficients::constant(0.5, 0.0, IndexSet::FullLine, "cheb");
  const SplitOperators s = split(c);
  for (long k = 0; k < 10; ++k) {
    CHECK(s.plus.a(k) == 0.5);
    CHECK(s.minus.a(k) == 0.5);
    CHECK(s.minus.b(k) == 0.0);
  }
  const MeixnerParams mp;
  const JacobiCoefficients L = coefficients(mp);
  const SplitOperators sm = split(L);
  // a_{-2} = sqrt((lambda - 1 + eps)(-2 + eps - lambda)), b_{-1} = 2a(eps - 1).
  CHECK(rel_err(sm.minus.a(0), std::sqrt((-0.5 - 1.0 + 0.25) * (-2.0 + 0.25 + 0.5))) < 1e-15);
  CHECK(rel_err(sm.minus.b(0), 2.0 * 2.0 * (0.25 - 1.0)) < 1e-15);
  for (long k = 0; k < 20; ++k) {
    CHECK(sm.plus.a(k) == L.a(k));
    CHECK(sm.plus.b(k) == L.b(k));
  }
  CHECK_THROWS_AS(split(chebyshev_coefficients()), DomainError);
}

TEST_CASE("deficiency indices") {
  const DeficiencyReport m = deficiency(coefficients(MeixnerParams{}));
  REQUIRE(m.total.has_value());
  CHECK(*m.total == 0);

  QParams sa;  // c = 0.1 <= q^2 = 0.25
  const DeficiencyReport r0 = deficiency(q_coefficients(sa));
  REQUIRE(r0.total.has_value());
  CHECK(*r0.total == 0);

  QParams ext{0.8, -0.01, 0.7, 0.9};  // q^2 = 0.64 < c
  const DeficiencyReport r1 = deficiency(q_coefficients(ext));
  REQUIRE(r1.plus.has_value());
  REQUIRE(r1.minus.has_value());
  CHECK(*r1.plus == 1);
  CHECK(*r1.minus == 0);
  CHECK(*r1.total == *r1.plus + *r1.minus);
}

TEST_CASE("full-line Wronskians of solution vectors") {
  const MeixnerParams p;
  const JacobiCoefficients L = coefficients(p);
  const Complex z(0.4, 0.9);
  const SolutionVector u = solution_u_vector(p, Sign::Minus, z);
  const SolutionVector v = solution_v_vector(p, Sign::Plus, z);
  CHECK(std::abs(full_wronskian(L, u, u, 3)) == 0.0);
  const Complex w0 = full_wronskian(L, u, v, 0);
  for (long k = -50; k <= 50; k += 5) {
    const Complex w = full_wronskian(L, u, v, k);
    const double scale =
        L.a(k) * std::max(std::abs(u(k + 1) * v(k)), std::abs(u(k) * v(k + 1)));
    CHECK(std::abs(w - w0) <= 1e-9 * std::max(std::abs(w0), scale));
    CHECK(std::abs(full_wronskian(L, v, u, k) + w) == doctest::Approx(0.0));
  }
  CHECK(recurrence_residual(L, u, 7) < 1e-10);
}

TEST_CASE("doubly infinite Green kernel") {
  const MeixnerParams p;
  const JacobiCoefficients L = coefficients(p);
  const Complex z(0.3, 0.8);
  const SolutionVector phi = solution_u_vector(p, Sign::Minus, z);
  const SolutionVector Phi = solution_v_vector(p, Sign::Plus, z);
  CHECK(phi.summable_end() == SummableEnd::Plus);
  CHECK(Phi.summable_end() == SummableEnd::Minus);
  CHECK(rel_err(green_doubly(L, phi, Phi, -2, 3).value, green_doubly(L, phi, Phi, 3, -2).value) <
        1e-14);
  const Complex g = green_doubly(L, phi, Phi, 1, 4).value;
  CHECK(rel_err(green_doubly(L, phi.scaled({2.0, -1.0}), Phi.scaled(0.3), 1, 4).value, g) < 1e-12);

  // ((L - z) G e_l)_k = delta_{kl}.
  const long l = 2;
  for (long k = -6; k <= 6; ++k) {
    const Complex row = L.a(k - 1) * green_doubly(L, phi, Phi, k - 1, l).value +
                        (L.b(k) - z) * green_doubly(L, phi, Phi, k, l).value +
                        L.a(k) * green_doubly(L, phi, Phi, k + 1, l).value;
    CHECK(std::abs(row - (k == l ? 1.0 : 0.0)) < 1e-8);
  }

  const double x0 = spectrum(p, 0).x;
  const SolutionVector u0 = solution_u_vector(p, Sign::Minus, x0);
  const SolutionVector v0 = solution_v_vector(p, Sign::Plus, x0);
  CHECK_THROWS_AS(green_doubly(L, u0, v0, 0, 0), DegenerateWronskian);
}

TEST_CASE("finite sections") {
  const JacobiCoefficients L = coefficients(MeixnerParams{});
  const TruncatedMatrix t0 = truncate_doubly(L, 0, 0);
  REQUIRE(t0.size() == 1);
  CHECK(t0.diag[0] == L.b(0));
  const TruncatedMatrix tc =
      truncate_doubly(JacobiCoefficients::constant(0.7, 0.2, IndexSet::FullLine, "c"), 3, 4);
  CHECK(tc.size() == 8);
  for (double d : tc.diag) CHECK(d == 0.2);
  for (double o : tc.offdiag) CHECK(o == 0.7);
  const TruncatedMatrix t = truncate_doubly(L, 2, 1);
  CHECK(t.diag[0] == L.b(-2));
  CHECK(t.offdiag[0] == L.a(-2));
  CHECK(t.diag[3] == L.b(1));
  CHECK_THROWS_AS(truncate_doubly(L, -1, 2), DomainError);

  // Central eigenvalues settle as the window grows.
  const double x1 = spectrum(MeixnerParams{}, 1).x;
  double prev = 1e9;
  for (long n : {20L, 40L, 80L}) {
    double best = 1e9;
    for (const EigenPair& e : eigen(truncate_doubly(L, n, n))) {
      best = std::min(best, std::abs(e.value - x1));
    }
    CHECK(best <= std::max(prev, 1e-13));  // down to the rounding floor
    prev = best;
  }
  CHECK(prev < 1e-8);
}
