#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace cendkit {

// Exact rational scalars. Arbitrary precision is required: the lifting
// iterations cube elements and coefficient growth is real.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer factorial(int n) {
  Integer r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// n*(n-1)*...*(n-k+1); zero when k > n >= 0.
inline Integer falling(int n, int k) {
  if (k < 0) throw std::invalid_argument("falling: negative k");
  Integer r = 1;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

inline Integer binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  return falling(n, k) / factorial(k);
}

// Exact textual form: "num" or "num/den"; never decimals.
inline std::string to_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

}  // namespace cendkit
