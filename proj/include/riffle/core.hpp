// Shared domain types for the shuffle pipeline: probability vectors,
// permutations, digit strings, sorted string sequences and shuffle graphs.
//
// Conventions: permutations are 0-based internally ([0,N) values in one-line
// notation); shuffle-graph edge i connects positions i and i+1 (0-based, so
// edge indices run over [0, N-1)). Printing uses the 1-based convention.
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "riffle/rng.hpp"

namespace riffle {

inline constexpr const char* kVersion = "0.1.0";

// Hard cap on string length; lengths beyond this are always a caller bug.
inline constexpr std::size_t kMaxStringLength = 4096;

// A discrete cut distribution p = (p_0,...,p_{k-1}), k >= 2, all entries
// positive, renormalized exactly after the sum passes a 1e-9 tolerance check.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> weights);

  int k() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const { return w_; }

  // smallest-index tie-breaking
  int i_max() const;
  int i_min() const;
  double p_max() const { return w_[static_cast<std::size_t>(i_max())]; }
  double p_min() const { return w_[static_cast<std::size_t>(i_min())]; }
  double front() const { return w_.front(); }
  double back() const { return w_.back(); }

 private:
  std::vector<double> w_;
};

using Permutation = std::vector<std::int32_t>;
using DigitString = std::vector<std::uint8_t>;

Permutation identity_permutation(std::size_t n);
bool is_permutation(const Permutation& pi);
Permutation invert(const Permutation& pi);
Permutation random_permutation(std::size_t n, RngStream& rng);
std::string permutation_to_string(const Permutation& pi);  // 1-based one-line

// Lexicographic order on digit strings; a proper prefix precedes any
// extension ("11" < "110").
std::strong_ordering lex_compare(const DigitString& a, const DigitString& b);

DigitString parse_digits(const std::string& s);  // "010" -> {0,1,0}
std::string digits_to_string(const DigitString& x);

// N strings of equal length K over [k]_0 in non-decreasing lexicographic
// order, stored row-major. Equal length means lex order == byte order.
class SortedStringSeq {
 public:
  SortedStringSeq(std::size_t n, std::size_t length, int k, std::vector<std::uint8_t> digits);

  std::size_t size() const { return n_; }
  std::size_t length() const { return length_; }
  int k() const { return k_; }
  std::uint8_t digit(std::size_t row, std::size_t col) const { return digits_[row * length_ + col]; }
  const std::uint8_t* row(std::size_t i) const { return digits_.data() + i * length_; }
  DigitString string_at(std::size_t i) const;
  bool rows_equal(std::size_t i, std::size_t j) const;
  // does row i start with the two-digit prefix [d d]?
  bool row_has_double_prefix(std::size_t i, std::uint8_t d) const {
    return length_ >= 2 && digit(i, 0) == d && digit(i, 1) == d;
  }

 private:
  std::size_t n_;
  std::size_t length_;
  int k_;
  std::vector<std::uint8_t> digits_;
};

// Union of disjoint paths on [N]: edge[i] == 1 iff positions i and i+1 are
// joined (i.e. the sorted strings s_{i+1} = s_{i+2} coincide, 1-based).
struct ShuffleGraph {
  std::size_t n = 0;
  std::vector<std::uint8_t> edge;  // size n-1 (empty when n <= 1)

  static ShuffleGraph empty(std::size_t n);
  static ShuffleGraph from_edges(std::size_t n, const std::vector<std::size_t>& edges);
  std::size_t edge_count() const;
  // maximal-run component sizes, left to right; sizes sum to n
  std::vector<std::size_t> component_sizes() const;
};

// N i.i.d. p-random strings of length K, sorted. Bit-reproducible for a
// fixed stream. Rejects N == 0, K == 0 and K > kMaxStringLength.
SortedStringSeq sample_sorted_sequence(const ProbVector& p, std::size_t n, std::size_t length,
                                       RngStream& rng);

ShuffleGraph build_shuffle_graph(const SortedStringSeq& s);

// pi^G: sort the values of pi within each G-component. Idempotent; never
// moves a value across components.
Permutation g_modify(const Permutation& pi, const ShuffleGraph& g);

}  // namespace riffle
