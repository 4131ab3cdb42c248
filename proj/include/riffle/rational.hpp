// Exact integer/rational arithmetic for the small-deck distribution oracles.
// Monte Carlo paths never touch these; they are double-based throughout.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace riffle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_factorial(std::uint64_t n) {
  BigInt f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt big_binomial(const BigInt& n, std::uint64_t k) {
  if (n < 0 || BigInt(k) > n) return 0;
  BigInt num = 1;
  for (std::uint64_t i = 0; i < k; ++i) num *= (n - static_cast<std::int64_t>(i));
  return num / big_factorial(k);
}

inline BigInt big_pow(BigInt base, std::uint64_t e) {
  BigInt r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline Rational rational_pow(const Rational& base, std::uint64_t e) {
  Rational r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= base;
  return r;
}

inline std::string rational_to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

// Exact cut distribution: positive rational weights summing to exactly 1.
class RationalProbVector {
 public:
  explicit RationalProbVector(std::vector<Rational> weights);
  // exact value num_i / den shared across entries
  static RationalProbVector from_integer_weights(const std::vector<std::uint64_t>& nums);

  int k() const { return static_cast<int>(w_.size()); }
  const Rational& operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  const std::vector<Rational>& weights() const { return w_; }
  std::vector<double> to_doubles() const;
  Rational phi2() const;  // sum of squared entries

 private:
  std::vector<Rational> w_;
};

}  // namespace riffle
