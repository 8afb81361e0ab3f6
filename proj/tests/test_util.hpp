#ifndef JSPEC_TEST_UTIL_HPP
#define JSPEC_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace testutil {

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  const double den = std::abs(want);
  return den > 0.0 ? std::abs(got - want) / den : std::abs(got);
}

inline double rel_err(double got, double want) {
  return want != 0.0 ? std::abs(got - want) / std::abs(want) : std::abs(got);
}

/// Deterministic generator so that property tests are reproducible.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20261016);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace testutil

#endif
