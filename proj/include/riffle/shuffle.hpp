// Forward p-shuffles, shuffle composition, the inverse-representation
// sampler, and two independent exact small-N distribution oracles.
//
// The exact oracles take exact rational cut distributions so that the
// cross-checks are exact rational identities rather than 1e-12 comparisons.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "riffle/core.hpp"
#include "riffle/rational.hpp"

namespace riffle {

// Exact probability measure on Sym_N, N small.
struct ExactDistribution {
  std::map<Permutation, Rational> prob;

  Rational at(const Permutation& pi) const;
  bool operator==(const ExactDistribution& other) const = default;
  std::string to_json() const;  // {"2,3,1": "num/den", ...} (1-based one-line keys)
};

struct ExactCaps {
  std::size_t max_n = 7;
  std::size_t max_piles = 64;          // cap on k^K for the forward oracle
  std::size_t max_multisets = 1000000;  // cap on C(k^K + N - 1, N) for the inverse oracle
};

// One p-shuffle of an arbitrary deck arrangement: multinomial cut into k
// contiguous piles, then a uniform interleaving via the proportional drop
// rule. Entry t of the result is the card at position t after the shuffle.
Permutation forward_shuffle(const Permutation& deck, const ProbVector& p, RngStream& rng);

// (p*q)_(i,j) = p_i q_j in row-major order; composing a q-shuffle with a
// following p-shuffle is a (p*q)-shuffle.
ProbVector convolve(const ProbVector& p, const ProbVector& q);
RationalProbVector convolve(const RationalProbVector& p, const RationalProbVector& q);

// (pi^G, G) for uniform pi and p-random G from N strings of length K;
// invert(pi^G) is distributed as K composed p-shuffles of the identity.
std::pair<Permutation, ShuffleGraph> sample_inverse_representation(const ProbVector& p,
                                                                   std::size_t n, std::size_t k_shuffles,
                                                                   RngStream& rng);

// Exact law of a deck after K p-shuffles, via the one-step (p^{*K})-shuffle:
// P[sigma] = sum over pile assignments of the values 1..N that are weakly
// increasing and strictly increase at every descent of sigma^{-1}.
// K = 0 yields the point mass at the identity.
ExactDistribution exact_forward_distribution(const RationalProbVector& p, std::size_t n,
                                             std::size_t k_shuffles, const ExactCaps& caps = {});

// Exact law of the same deck through the inverse representation: enumerate
// all multisets of N strings, build G, and accumulate
// P[pi^G = sigma] = 1_{sigma^G = sigma} * prod v_i! / N! at invert(sigma).
ExactDistribution exact_inverse_distribution(const RationalProbVector& p, std::size_t n,
                                             std::size_t k_shuffles, const ExactCaps& caps = {});

// Law of outer∘inner for independent outer ~ second-applied shuffle and
// inner ~ first-applied shuffle (the random-walk increment convention).
ExactDistribution exact_compose(const ExactDistribution& outer, const ExactDistribution& inner);

ExactDistribution uniform_distribution(std::size_t n);

// (1/2) sum_sigma |P(sigma) - 1/N!|, exact.
Rational tv_exact(const RationalProbVector& p, std::size_t n, std::size_t k_shuffles,
                  const ExactCaps& caps = {});
Rational tv_exact(const ExactDistribution& dist, std::size_t n);

// Exact TV from uniform for the symmetric k-shuffle via rising-sequence
// counts: TV = (1/2) sum_r A(N,r) |C(N + k^K - r, N)/k^{KN} - 1/N!| with
// Eulerian numbers A(N,r). Valid to N of a few hundred.
Rational tv_symmetric_eulerian(std::uint64_t k, std::size_t n, std::size_t k_shuffles);

// Eulerian numbers A(n, r), r = 1..n: permutations with r rising sequences.
std::vector<BigInt> eulerian_numbers(std::size_t n);

}  // namespace riffle
