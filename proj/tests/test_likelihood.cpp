#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "riffle/likelihood.hpp"
#include "riffle/shuffle.hpp"

using namespace riffle;

namespace {

ShuffleGraph random_graph(std::size_t n, RngStream& rng, double edge_prob = 0.4) {
  ShuffleGraph g = ShuffleGraph::empty(n);
  for (auto& e : g.edge) e = rng.uniform01() < edge_prob ? 1 : 0;
  return g;
}

// all 2^(n-1) edge patterns
std::vector<ShuffleGraph> all_graphs(std::size_t n) {
  std::vector<ShuffleGraph> out;
  const std::size_t patterns = static_cast<std::size_t>(1) << (n - 1);
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    ShuffleGraph g = ShuffleGraph::empty(n);
    for (std::size_t i = 0; i + 1 < n; ++i) g.edge[i] = (mask >> i) & 1;
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

TEST_CASE("f_g_sigma") {
  const ShuffleGraph g = ShuffleGraph::from_edges(3, {0});
  CHECK(f_g_sigma(g, Permutation{0, 1, 2}) == 2);  // 2! * 1!
  CHECK(f_g_sigma(g, Permutation{1, 0, 2}) == 0);  // descent inside the component
  CHECK_THROWS(f_g_sigma(g, Permutation{0, 1}));
}

TEST_CASE("E_sigma[f_{G,sigma}] = 1 exactly") {
  // exhaustive over all graphs at N <= 5, random graphs at N = 7
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const ShuffleGraph& g : all_graphs(n)) {
      BigInt sum = 0;
      Permutation sigma = identity_permutation(n);
      do {
        sum += f_g_sigma(g, sigma);
      } while (std::next_permutation(sigma.begin(), sigma.end()));
      CHECK(sum == big_factorial(n));
    }
  }
  RngStream rng(7, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const ShuffleGraph g = random_graph(7, rng);
    BigInt sum = 0;
    Permutation sigma = identity_permutation(7);
    do {
      sum += f_g_sigma(g, sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    CHECK(sum == big_factorial(7));
  }
}

TEST_CASE("f_pair_exact closed form") {
  const ShuffleGraph g = ShuffleGraph::from_edges(3, {0});
  const ShuffleGraph g2 = ShuffleGraph::from_edges(3, {1});
  CHECK(f_pair_exact(g, g2) == Rational(2, 3));  // 2!*2!/3!

  // G = G' -> prod v_i!
  CHECK(f_pair_exact(g, g) == Rational(2));

  // G' empty -> 1
  CHECK(f_pair_exact(g, ShuffleGraph::empty(3)) == Rational(1));

  // N=2, both single edge -> 2
  const ShuffleGraph e2 = ShuffleGraph::from_edges(2, {0});
  CHECK(f_pair_exact(e2, e2) == Rational(2));
  CHECK(f_pair_brute(e2, e2) == Rational(2));
}

TEST_CASE("f_pair_exact equals f_pair_brute") {
  // exhaustive over all graph pairs at N <= 6
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto graphs = all_graphs(n);
    for (const auto& g : graphs)
      for (const auto& g2 : graphs) CHECK(f_pair_exact(g, g2) == f_pair_brute(g, g2));
  }
  // 500 random pairs at N = 7
  RngStream rng(8, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const ShuffleGraph g = random_graph(7, rng);
    const ShuffleGraph g2 = random_graph(7, rng);
    CHECK(f_pair_exact(g, g2) == f_pair_brute(g, g2));
  }
}

TEST_CASE("log_f_pair agrees with the exact value") {
  RngStream rng(9, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const ShuffleGraph g = random_graph(10, rng);
    const ShuffleGraph g2 = random_graph(10, rng);
    const double exact_log = std::log(static_cast<double>(f_pair_exact(g, g2)));
    CHECK(log_f_pair(g, g2) == doctest::Approx(exact_log).epsilon(1e-10));
  }
}

TEST_CASE("lemma_fbound_rhs upper-bounds f_pair") {
  // no shared edges -> bound 1 and f <= 1
  const ShuffleGraph g = ShuffleGraph::from_edges(4, {0});
  const ShuffleGraph g2 = ShuffleGraph::from_edges(4, {2});
  CHECK(lemma_fbound_rhs(g, g2) == 1);
  CHECK(f_pair_exact(g, g2) <= Rational(1));

  const ShuffleGraph e2 = ShuffleGraph::from_edges(2, {0});
  CHECK(lemma_fbound_rhs(e2, e2) == 2);

  RngStream rng(10, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + rng.next_below(5);
    const ShuffleGraph a = random_graph(n, rng);
    const ShuffleGraph b = random_graph(n, rng);
    CHECK(f_pair_exact(a, b) <= Rational(lemma_fbound_rhs(a, b), 1));
  }
}

TEST_CASE("edge_intersection") {
  const ShuffleGraph g = ShuffleGraph::from_edges(5, {0, 2});
  const ShuffleGraph g2 = ShuffleGraph::from_edges(5, {0});
  CHECK(edge_intersection(g, g2) == std::vector<std::uint8_t>{1, 0, 0, 0});
  const ShuffleGraph g3 = ShuffleGraph::from_edges(5, {1, 3});
  CHECK(count_edges(edge_intersection(g, g3)) == 0);
  CHECK(edge_intersection(g, g) == g.edge);
}

TEST_CASE("forward and backward edge sets") {
  // k=2: string "110" repeated -> excluded from forward, included in backward
  SortedStringSeq s_hi(2, 3, 2, {1, 1, 0, 1, 1, 0});
  CHECK(forward_edges(s_hi) == std::vector<std::uint8_t>{0});
  CHECK(backward_edges(s_hi) == std::vector<std::uint8_t>{1});

  // "010" repeated -> in both
  SortedStringSeq s_mid(2, 3, 2, {0, 1, 0, 0, 1, 0});
  CHECK(forward_edges(s_mid) == std::vector<std::uint8_t>{1});
  CHECK(backward_edges(s_mid) == std::vector<std::uint8_t>{1});

  // "000" repeated -> excluded from backward only
  SortedStringSeq s_lo(2, 3, 2, {0, 0, 0, 0, 0, 0});
  CHECK(forward_edges(s_lo) == std::vector<std::uint8_t>{1});
  CHECK(backward_edges(s_lo) == std::vector<std::uint8_t>{0});
}

TEST_CASE("shared edges covered by forward plus backward for regular pairs") {
  const ProbVector p({0.5, 0.5});
  RngStream rng(11, 0);
  std::size_t checked = 0;
  for (int trial = 0; trial < 10000 && checked < 10000; ++trial) {
    const SortedStringSeq s1 = sample_sorted_sequence(p, 100, 10, rng);
    const SortedStringSeq s2 = sample_sorted_sequence(p, 100, 10, rng);
    if (!is_regular(s1, p) || !is_regular(s2, p)) continue;
    ++checked;
    const ShuffleGraph g1 = build_shuffle_graph(s1);
    const ShuffleGraph g2 = build_shuffle_graph(s2);
    const std::size_t shared = count_edges(edge_intersection(g1, g2));
    const std::size_t fwd = count_edges(intersect_edges(forward_edges(s1), forward_edges(s2)));
    const std::size_t bwd = count_edges(intersect_edges(backward_edges(s1), backward_edges(s2)));
    CHECK(shared <= fwd + bwd);
  }
  CHECK(checked > 9000);  // regularity is the typical case here
}

TEST_CASE("is_l_sparse") {
  CHECK_THROWS(is_l_sparse(ShuffleGraph::empty(30), 9));
  CHECK(is_l_sparse(ShuffleGraph::empty(30), 12));

  // full path of 20 edges: any 12-window holds 11 edges > 4
  ShuffleGraph path = ShuffleGraph::empty(21);
  std::fill(path.edge.begin(), path.edge.end(), 1);
  CHECK_FALSE(is_l_sparse(path, 12));

  // isolated single edges spaced >= L apart
  ShuffleGraph sparse = ShuffleGraph::empty(100);
  for (std::size_t i = 0; i < 99; i += 25) sparse.edge[i] = 1;
  CHECK(is_l_sparse(sparse, 20));
}

TEST_CASE("U-components stay below L for L-sparse pairs") {
  RngStream rng(12, 0);
  const std::size_t l = 12;
  std::size_t tested = 0;
  while (tested < 200) {
    const ShuffleGraph a = random_graph(60, rng, 0.25);
    const ShuffleGraph b = random_graph(60, rng, 0.25);
    if (!is_l_sparse(a, l) || !is_l_sparse(b, l)) continue;
    ++tested;
    const PairDecomposition d = pair_decomposition(a, b);
    for (auto u : d.u_sizes) CHECK(u <= l);
    // f <= (L!)^{|E(G,G')|} for L-sparse pairs
    const double bound =
        static_cast<double>(count_edges(d.shared)) * std::lgamma(static_cast<double>(l) + 1.0);
    CHECK(log_f_pair(a, b) <= bound + 1e-9);
  }
}

TEST_CASE("is_regular") {
  const ProbVector p({0.5, 0.5});
  // all strings begin "01" -> zero counts -> regular
  SortedStringSeq s01(3, 2, 2, {0, 1, 0, 1, 0, 1});
  CHECK(is_regular(s01, p));
  // all strings begin "00" -> exceeds the threshold for any valid p
  SortedStringSeq s00(3, 2, 2, {0, 0, 0, 0, 0, 0});
  CHECK_FALSE(is_regular(s00, p));
  CHECK_THROWS(is_regular(SortedStringSeq(2, 1, 2, {0, 1}), p));

  // sampled sequences are regular with frequency >= 0.99
  RngStream rng(13, 0);
  std::size_t regular_count = 0;
  const std::size_t trials = 1000;
  for (std::size_t t = 0; t < trials; ++t) {
    const SortedStringSeq s = sample_sorted_sequence(p, 10000, 20, rng);
    if (is_regular(s, p)) ++regular_count;
  }
  CHECK(regular_count >= 990);
}

TEST_CASE("tv_upper_chi2_mc") {
  const ProbVector p({0.5, 0.5});
  // huge K: graphs almost surely empty, f = 1, estimate ~ 0
  const Chi2UpperBound far = tv_upper_chi2_mc(p, 256, 40, 10, 2000, 14);
  CHECK(far.bound >= 0.0);
  CHECK(far.mean == doctest::Approx(0.0));
  CHECK(far.bound < 0.02);

  // threshold pinned by the seed-0 calibration run (calibration/chi2_upper_n52.csv)
  const Chi2UpperBound mid = tv_upper_chi2_mc(p, 52, 12, 20, 20000, 0);
  CHECK(mid.bound >= 0.0);
  CHECK(mid.bound < 0.2);
}
