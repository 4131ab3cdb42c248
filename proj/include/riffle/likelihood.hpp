// Radon-Nikodym machinery for pi^G against the uniform permutation:
// f_{G,sigma} = 1_{sigma^G = sigma} * prod v_i!, the pair functional
// f_{G,G'} = E^sigma[f_{G,sigma} f_{G',sigma}] with closed form
// (prod v_i!)(prod w_j!)/(prod u_l!), sparsity/regularity predicates, and
// the chi-square style Monte Carlo upper bound on total variation.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "riffle/core.hpp"
#include "riffle/parallel.hpp"
#include "riffle/rational.hpp"

namespace riffle {

// Edge-union decomposition of a graph pair.
struct PairDecomposition {
  ShuffleGraph u;                        // edge union
  std::vector<std::size_t> u_sizes;      // component sizes of U
  std::vector<std::size_t> g_sizes;      // component sizes of G (v_i)
  std::vector<std::size_t> g2_sizes;     // component sizes of G' (w_j)
  std::vector<std::uint8_t> shared;      // E(G,G') edge indicators
};

PairDecomposition pair_decomposition(const ShuffleGraph& g, const ShuffleGraph& g2);

// 1_{sigma^G = sigma} * prod v_i!; exact (requires component sizes <= 20).
BigInt f_g_sigma(const ShuffleGraph& g, const Permutation& sigma);

// Closed form (prod v_i!)(prod w_j!)/(prod u_l!).
Rational f_pair_exact(const ShuffleGraph& g, const ShuffleGraph& g2);

// log f_{G,G'} for Monte Carlo paths (large N safe).
double log_f_pair(const ShuffleGraph& g, const ShuffleGraph& g2);

// Independent oracle: exact average of f_{G,sigma} f_{G',sigma} over all N!
// permutations. N <= 8.
Rational f_pair_brute(const ShuffleGraph& g, const ShuffleGraph& g2);

// Product of u_l! over the U-components that meet E(G,G'); upper bound on
// f_pair_exact.
BigInt lemma_fbound_rhs(const ShuffleGraph& g, const ShuffleGraph& g2);

std::vector<std::uint8_t> edge_intersection(const ShuffleGraph& g, const ShuffleGraph& g2);

// Edges of G(S) whose shared string does not begin [ (k-1)(k-1) ] (forward)
// or [00] (backward).
std::vector<std::uint8_t> forward_edges(const SortedStringSeq& s);
std::vector<std::uint8_t> backward_edges(const SortedStringSeq& s);

std::size_t count_edges(const std::vector<std::uint8_t>& edges);
std::vector<std::uint8_t> intersect_edges(const std::vector<std::uint8_t>& a,
                                          const std::vector<std::uint8_t>& b);

// Every window of L consecutive vertices holds at most floor(L/3) edges.
bool is_l_sparse(const ShuffleGraph& g, std::size_t l);

// At most (p_0^2 + p_0 p_{k-1}/2) N strings begin [00] and at most
// (p_{k-1}^2 + p_0 p_{k-1}/2) N begin [(k-1)(k-1)].
bool is_regular(const SortedStringSeq& s, const ProbVector& p);

struct Chi2UpperBound {
  double bound = 0.0;           // 0.5*sqrt(max(mean,0)) + s0_fraction
  double mean = 0.0;            // E[(f_{G,G'}-1) 1{S,S' typical}]
  double mean_stderr = 0.0;
  double bound_stderr = 0.0;    // delta-method CI half-width contribution
  double s0_fraction = 0.0;     // empirical mu(S_0)
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo certificate for the chi-square total-variation upper bound:
// d_N(K) <= 0.5 sqrt(E[(f_{G,G'}-1) 1{S,S' in S_1}]) + mu(S_0) where S_1 is
// regular and L-sparse. Deterministic given (seed, replicates).
Chi2UpperBound tv_upper_chi2_mc(const ProbVector& p, std::size_t n, std::size_t k_shuffles,
                                std::size_t l, std::size_t replicates, std::uint64_t seed,
                                ExecMode mode = ExecMode::OpenMP);

}  // namespace riffle
