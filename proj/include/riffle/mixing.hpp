// Monte Carlo experiment harness: edge-intersection statistics, the
// exploration-process hazard estimate, total-variation lower bounds via
// distinguishing statistics, and the cold-spot construction.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riffle/core.hpp"
#include "riffle/parallel.hpp"

namespace riffle {

struct EdgeIntersectionSummary {
  McSummary edges;     // |E(G, G')|
  McSummary forward;   // |E_forward(G, G')|
  McSummary backward;  // |E_backward(G, G')|
};

// E|E(G,G')| over independent p-random pairs, one RngStream per replicate.
EdgeIntersectionSummary mc_edge_intersection(const ProbVector& p, std::size_t n,
                                             std::size_t k_shuffles, std::size_t replicates,
                                             std::uint64_t seed, ExecMode mode = ExecMode::OpenMP);

// min(a, a^2 * phi_p(2)^b): universal bound on F(a,b) = E|E(G,G')| at deck
// size a after b shuffles.
double f_ab_bound(std::uint64_t a, std::uint64_t b, const ProbVector& p);

struct HazardSummary {
  double estimate = 0.0;        // max over checkpoints of the conditional mean
  double stderr_ = 0.0;         // standard error at the argmax checkpoint
  std::size_t argmax_checkpoint = 0;
  double alive_fraction = 0.0;  // replicates still running at the argmax
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
};

// Joint left-to-right revelation of (S, S'), halted once either string
// begins [(k-1)(k-1)]; estimates the worst checkpoint's conditional mean of
// unrevealed forward-shared edges.
HazardSummary exploration_hazard(const ProbVector& p, std::size_t n, std::size_t k_shuffles,
                                 std::size_t replicates, std::uint64_t seed,
                                 ExecMode mode = ExecMode::OpenMP,
                                 std::size_t checkpoints = 64);

struct ColdSpotPlan {
  std::vector<std::size_t> alpha_counts;  // digit counts of the prefix part
  std::vector<std::size_t> beta_counts;   // digit counts of the suffix part
  std::size_t prefix_length = 0;          // alpha_tot * log N
  std::size_t suffix_length = 0;          // beta_tot * log N
  std::size_t n = 0;
  std::size_t length = 0;  // K
  double gamma = 0.0;
  double lambda_prefix = 0.0;                               // shared by all prefixes
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  // merged [lo, hi] 1-based positions

  std::size_t h_size() const;
  std::size_t boundary_size() const;
  bool in_h(std::size_t position) const;  // 1-based
};

// Build the cold-spot set H = Z cap union of N*J_x over collision-likely
// prefixes, with largest-remainder digit allocations. Fails explicitly when
// the prefix count exceeds max_prefixes or beta_tot <= 0.
ColdSpotPlan cold_spot_plan(const ProbVector& p, std::size_t n, std::size_t k_shuffles,
                            double delta = 0.1, std::size_t max_prefixes = 10000000);

struct ColdSpotHits {
  std::size_t edges_in_h = 0;  // edges with both endpoints in H
  std::size_t y_tot = 0;       // distinct collision-likely strings seen >= 2 times
};

ColdSpotHits count_cold_spot_hits(const SortedStringSeq& s, const ColdSpotPlan& plan);

enum class Statistic { LongestIncreasingRun, AscentsInH };

std::string statistic_name(Statistic s);

struct TvLowerBound {
  double raw = 0.0;        // max_c |P_shuffled[T >= c] - P_uniform[T >= c]|
  double penalized = 0.0;  // raw minus a 95% DKW band on both sides
  std::size_t threshold = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
};

// Statistic-based total-variation lower bound; shuffled side via the
// inverse representation, uniform side sampled. K = 0 compares the point
// mass at the identity against uniform.
TvLowerBound tv_lower_mc(const ProbVector& p, std::size_t n, std::size_t k_shuffles,
                         Statistic statistic, std::size_t replicates, std::uint64_t seed,
                         ExecMode mode = ExecMode::OpenMP, double delta = 0.1);

struct ProfileRow {
  std::size_t k_shuffles = 0;
  TvLowerBound lower;
  EdgeIntersectionSummary edges;
  HazardSummary hazard;
};

// K-sweep with common random numbers across K.
std::vector<ProfileRow> cutoff_profile(const ProbVector& p, std::size_t n, std::size_t k_min,
                                       std::size_t k_max, Statistic statistic,
                                       std::size_t replicates, std::uint64_t seed,
                                       ExecMode mode = ExecMode::OpenMP);

}  // namespace riffle
