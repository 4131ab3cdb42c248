#include "riffle/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace riffle {

ProbVector::ProbVector(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.size() < 2) throw std::invalid_argument("ProbVector: need k >= 2 entries");
  double sum = 0.0;
  for (double p : w_) {
    if (!(p > 0.0)) throw std::invalid_argument("ProbVector: entries must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("ProbVector: entries must sum to 1 within 1e-9");
  for (double& p : w_) p /= sum;
}

int ProbVector::i_max() const {
  return static_cast<int>(std::max_element(w_.begin(), w_.end()) - w_.begin());
}

int ProbVector::i_min() const {
  return static_cast<int>(std::min_element(w_.begin(), w_.end()) - w_.begin());
}

Permutation identity_permutation(std::size_t n) {
  Permutation pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  return pi;
}

bool is_permutation(const Permutation& pi) {
  std::vector<std::uint8_t> seen(pi.size(), 0);
  for (auto v : pi) {
    if (v < 0 || static_cast<std::size_t>(v) >= pi.size() || seen[static_cast<std::size_t>(v)])
      return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

Permutation invert(const Permutation& pi) {
  Permutation inv(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i)
    inv[static_cast<std::size_t>(pi[i])] = static_cast<std::int32_t>(i);
  return inv;
}

Permutation random_permutation(std::size_t n, RngStream& rng) {
  Permutation pi = identity_permutation(n);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(pi[i - 1], pi[j]);
  }
  return pi;
}

std::string permutation_to_string(const Permutation& pi) {
  std::string out;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(pi[i] + 1);
  }
  return out;
}

std::strong_ordering lex_compare(const DigitString& a, const DigitString& b) {
  const std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] != b[i]) return a[i] <=> b[i];
  }
  return a.size() <=> b.size();
}

DigitString parse_digits(const std::string& s) {
  DigitString x;
  x.reserve(s.size());
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("parse_digits: expected digit characters");
    x.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return x;
}

std::string digits_to_string(const DigitString& x) {
  std::string s;
  s.reserve(x.size());
  for (auto d : x) s += static_cast<char>('0' + d);
  return s;
}

SortedStringSeq::SortedStringSeq(std::size_t n, std::size_t length, int k,
                                 std::vector<std::uint8_t> digits)
    : n_(n), length_(length), k_(k), digits_(std::move(digits)) {
  if (digits_.size() != n_ * length_)
    throw std::invalid_argument("SortedStringSeq: digit buffer size mismatch");
  for (auto d : digits_)
    if (d >= k_) throw std::invalid_argument("SortedStringSeq: digit out of range");
  for (std::size_t i = 0; i + 1 < n_; ++i)
    if (std::memcmp(row(i), row(i + 1), length_) > 0)
      throw std::invalid_argument("SortedStringSeq: rows not sorted");
}

DigitString SortedStringSeq::string_at(std::size_t i) const {
  return DigitString(row(i), row(i) + length_);
}

bool SortedStringSeq::rows_equal(std::size_t i, std::size_t j) const {
  return std::memcmp(row(i), row(j), length_) == 0;
}

ShuffleGraph ShuffleGraph::empty(std::size_t n) {
  ShuffleGraph g;
  g.n = n;
  g.edge.assign(n > 1 ? n - 1 : 0, 0);
  return g;
}

ShuffleGraph ShuffleGraph::from_edges(std::size_t n, const std::vector<std::size_t>& edges) {
  ShuffleGraph g = empty(n);
  for (auto e : edges) {
    if (e + 1 >= n) throw std::invalid_argument("ShuffleGraph: edge index out of range");
    g.edge[e] = 1;
  }
  return g;
}

std::size_t ShuffleGraph::edge_count() const {
  std::size_t c = 0;
  for (auto e : edge) c += e;
  return c;
}

std::vector<std::size_t> ShuffleGraph::component_sizes() const {
  std::vector<std::size_t> sizes;
  if (n == 0) return sizes;
  std::size_t run = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (edge[i]) {
      ++run;
    } else {
      sizes.push_back(run);
      run = 1;
    }
  }
  sizes.push_back(run);
  return sizes;
}

SortedStringSeq sample_sorted_sequence(const ProbVector& p, std::size_t n, std::size_t length,
                                       RngStream& rng) {
  if (n == 0) throw std::invalid_argument("sample_sorted_sequence: N must be >= 1");
  if (length == 0) throw std::invalid_argument("sample_sorted_sequence: K must be >= 1");
  if (length > kMaxStringLength)
    throw std::invalid_argument("sample_sorted_sequence: K exceeds sanity cap");
  const DigitSampler sampler(p.weights());
  std::vector<std::uint8_t> digits(n * length);
  for (auto& d : digits) d = static_cast<std::uint8_t>(sampler(rng));

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::uint8_t* base = digits.data();
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::memcmp(base + a * length, base + b * length, length) < 0;
  });
  std::vector<std::uint8_t> sorted(n * length);
  for (std::size_t i = 0; i < n; ++i)
    std::memcpy(sorted.data() + i * length, base + order[i] * length, length);
  return SortedStringSeq(n, length, p.k(), std::move(sorted));
}

ShuffleGraph build_shuffle_graph(const SortedStringSeq& s) {
  ShuffleGraph g = ShuffleGraph::empty(s.size());
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    g.edge[i] = s.rows_equal(i, i + 1) ? 1 : 0;
  return g;
}

Permutation g_modify(const Permutation& pi, const ShuffleGraph& g) {
  if (pi.size() != g.n) throw std::invalid_argument("g_modify: length mismatch");
  Permutation out = pi;
  std::size_t start = 0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const bool component_ends = (i + 1 == g.n) || !g.edge[i];
    if (component_ends) {
      if (i > start) std::sort(out.begin() + static_cast<std::ptrdiff_t>(start),
                               out.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      start = i + 1;
    }
  }
  return out;
}

}  // namespace riffle
