#include "riffle/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riffle {

namespace {

std::vector<std::size_t> sizes_of(const std::vector<std::uint8_t>& edge, std::size_t n) {
  std::vector<std::size_t> sizes;
  std::size_t run = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (edge[i]) {
      ++run;
    } else {
      sizes.push_back(run);
      run = 1;
    }
  }
  if (n > 0) sizes.push_back(run);
  return sizes;
}

double log_factorial(std::size_t v) { return std::lgamma(static_cast<double>(v) + 1.0); }

}  // namespace

PairDecomposition pair_decomposition(const ShuffleGraph& g, const ShuffleGraph& g2) {
  if (g.n != g2.n) throw std::invalid_argument("pair_decomposition: size mismatch");
  PairDecomposition d;
  d.u = ShuffleGraph::empty(g.n);
  for (std::size_t i = 0; i + 1 < g.n; ++i) d.u.edge[i] = g.edge[i] | g2.edge[i];
  d.u_sizes = d.u.component_sizes();
  d.g_sizes = g.component_sizes();
  d.g2_sizes = g2.component_sizes();
  d.shared = edge_intersection(g, g2);
  return d;
}

BigInt f_g_sigma(const ShuffleGraph& g, const Permutation& sigma) {
  if (sigma.size() != g.n) throw std::invalid_argument("f_g_sigma: length mismatch");
  BigInt f = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const bool component_ends = (i + 1 == g.n) || !g.edge[i];
    if (component_ends) {
      for (std::size_t t = start; t + 1 <= i && t + 1 < g.n; ++t)
        if (sigma[t] > sigma[t + 1]) return 0;  // descent inside a component
      f *= big_factorial(i - start + 1);
      start = i + 1;
    }
  }
  return f;
}

Rational f_pair_exact(const ShuffleGraph& g, const ShuffleGraph& g2) {
  const PairDecomposition d = pair_decomposition(g, g2);
  BigInt num = 1, den = 1;
  for (auto v : d.g_sizes) num *= big_factorial(v);
  for (auto w : d.g2_sizes) num *= big_factorial(w);
  for (auto u : d.u_sizes) den *= big_factorial(u);
  return Rational(num, den);
}

double log_f_pair(const ShuffleGraph& g, const ShuffleGraph& g2) {
  const PairDecomposition d = pair_decomposition(g, g2);
  double lf = 0.0;
  for (auto v : d.g_sizes) lf += log_factorial(v);
  for (auto w : d.g2_sizes) lf += log_factorial(w);
  for (auto u : d.u_sizes) lf -= log_factorial(u);
  return lf;
}

Rational f_pair_brute(const ShuffleGraph& g, const ShuffleGraph& g2) {
  if (g.n != g2.n) throw std::invalid_argument("f_pair_brute: size mismatch");
  if (g.n > 8) throw std::invalid_argument("f_pair_brute: N too large");
  Permutation sigma = identity_permutation(g.n);
  BigInt sum = 0;
  do {
    const BigInt a = f_g_sigma(g, sigma);
    if (a != 0) {
      const BigInt b = f_g_sigma(g2, sigma);
      if (b != 0) sum += a * b;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return Rational(sum, big_factorial(g.n));
}

BigInt lemma_fbound_rhs(const ShuffleGraph& g, const ShuffleGraph& g2) {
  const PairDecomposition d = pair_decomposition(g, g2);
  BigInt bound = 1;
  std::size_t start = 0;
  std::size_t comp = 0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const bool component_ends = (i + 1 == g.n) || !d.u.edge[i];
    if (component_ends) {
      bool meets_shared = false;
      for (std::size_t t = start; t < i && !meets_shared; ++t) meets_shared = d.shared[t] != 0;
      if (meets_shared) bound *= big_factorial(d.u_sizes[comp]);
      start = i + 1;
      ++comp;
    }
  }
  return bound;
}

std::vector<std::uint8_t> edge_intersection(const ShuffleGraph& g, const ShuffleGraph& g2) {
  if (g.n != g2.n) throw std::invalid_argument("edge_intersection: size mismatch");
  std::vector<std::uint8_t> out(g.edge.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.edge[i] & g2.edge[i];
  return out;
}

std::vector<std::uint8_t> forward_edges(const SortedStringSeq& s) {
  const std::uint8_t hi = static_cast<std::uint8_t>(s.k() - 1);
  std::vector<std::uint8_t> out(s.size() > 1 ? s.size() - 1 : 0, 0);
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    out[i] = (s.rows_equal(i, i + 1) && !s.row_has_double_prefix(i, hi)) ? 1 : 0;
  return out;
}

std::vector<std::uint8_t> backward_edges(const SortedStringSeq& s) {
  std::vector<std::uint8_t> out(s.size() > 1 ? s.size() - 1 : 0, 0);
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    out[i] = (s.rows_equal(i, i + 1) && !s.row_has_double_prefix(i, 0)) ? 1 : 0;
  return out;
}

std::size_t count_edges(const std::vector<std::uint8_t>& edges) {
  std::size_t c = 0;
  for (auto e : edges) c += e;
  return c;
}

std::vector<std::uint8_t> intersect_edges(const std::vector<std::uint8_t>& a,
                                          const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("intersect_edges: size mismatch");
  std::vector<std::uint8_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
  return out;
}

bool is_l_sparse(const ShuffleGraph& g, std::size_t l) {
  if (l < 10) throw std::invalid_argument("is_l_sparse: L must be >= 10");
  if (g.n < l) return true;  // no window of L vertices fits
  const std::size_t limit = l / 3;
  // window of L vertices {i,...,i+L-1} holds the L-1 edge slots [i, i+L-2]
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < l; ++i) count += g.edge[i];
  if (count > limit) return false;
  for (std::size_t i = 1; i + l <= g.n; ++i) {
    count -= g.edge[i - 1];
    count += g.edge[i + l - 2];
    if (count > limit) return false;
  }
  return true;
}

bool is_regular(const SortedStringSeq& s, const ProbVector& p) {
  if (s.length() < 2) throw std::invalid_argument("is_regular: K must be >= 2");
  const std::uint8_t hi = static_cast<std::uint8_t>(s.k() - 1);
  std::size_t low_count = 0, high_count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.row_has_double_prefix(i, 0)) ++low_count;
    if (s.row_has_double_prefix(i, hi)) ++high_count;
  }
  const double p0 = p.front();
  const double pk = p.back();
  const double n = static_cast<double>(s.size());
  return static_cast<double>(low_count) <= (p0 * p0 + p0 * pk / 2.0) * n &&
         static_cast<double>(high_count) <= (pk * pk + p0 * pk / 2.0) * n;
}

Chi2UpperBound tv_upper_chi2_mc(const ProbVector& p, std::size_t n, std::size_t k_shuffles,
                                std::size_t l, std::size_t replicates, std::uint64_t seed,
                                ExecMode mode) {
  if (replicates == 0) throw std::invalid_argument("tv_upper_chi2_mc: need replicates >= 1");
  std::vector<double> values(replicates);
  std::vector<double> atypical(replicates);  // count of S_0 hits among the pair
  for_each_replicate(replicates, mode, [&](std::size_t r) {
    RngStream rng(seed, r);
    const SortedStringSeq s1 = sample_sorted_sequence(p, n, k_shuffles, rng);
    const SortedStringSeq s2 = sample_sorted_sequence(p, n, k_shuffles, rng);
    const ShuffleGraph g1 = build_shuffle_graph(s1);
    const ShuffleGraph g2 = build_shuffle_graph(s2);
    const bool ok1 = is_regular(s1, p) && is_l_sparse(g1, l);
    const bool ok2 = is_regular(s2, p) && is_l_sparse(g2, l);
    atypical[r] = (ok1 ? 0.0 : 1.0) + (ok2 ? 0.0 : 1.0);
    if (ok1 && ok2) {
      const double lf = log_f_pair(g1, g2);
      values[r] = std::exp(std::min(lf, 700.0)) - 1.0;
    } else {
      values[r] = 0.0;
    }
  });
  const McSummary main = summarize(values, seed);
  const McSummary s0 = summarize(atypical, seed);
  Chi2UpperBound out;
  out.replicates = replicates;
  out.seed = seed;
  out.mean = main.mean;
  out.mean_stderr = main.stderr_;
  out.s0_fraction = s0.mean / 2.0;
  const double root = std::sqrt(std::max(main.mean, 0.0));
  out.bound = 0.5 * root + out.s0_fraction;
  // delta method on 0.5*sqrt(mean) plus the S_0 frequency error
  const double root_se = root > 0.0 ? 0.25 * main.stderr_ / root : 0.5 * std::sqrt(main.stderr_);
  out.bound_stderr = root_se + s0.stderr_ / 2.0;
  return out;
}

}  // namespace riffle
