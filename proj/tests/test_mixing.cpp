#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "riffle/constants.hpp"
#include "riffle/likelihood.hpp"
#include "riffle/mixing.hpp"
#include "riffle/shuffle.hpp"

using namespace riffle;

namespace {

// a discrete distribution over subsets of a small ground set
struct SubsetLaw {
  std::vector<std::uint32_t> masks;
  std::vector<double> probs;
};

SubsetLaw random_subset_law(RngStream& rng, int ground, int outcomes) {
  SubsetLaw law;
  double sum = 0.0;
  for (int i = 0; i < outcomes; ++i) {
    law.masks.push_back(static_cast<std::uint32_t>(rng.next_below(1u << ground)));
    law.probs.push_back(0.05 + rng.uniform01());
    sum += law.probs.back();
  }
  for (auto& p : law.probs) p /= sum;
  return law;
}

std::vector<double> element_marginals(const SubsetLaw& law, int ground) {
  std::vector<double> m(static_cast<std::size_t>(ground), 0.0);
  for (std::size_t o = 0; o < law.masks.size(); ++o)
    for (int a = 0; a < ground; ++a)
      if ((law.masks[o] >> a) & 1u) m[static_cast<std::size_t>(a)] += law.probs[o];
  return m;
}

bool appears_at_least_twice(const SortedStringSeq& s, const DigitString& x) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::memcmp(s.row(i), x.data(), x.size()) == 0) {
      if (++count >= 2) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("mc_edge_intersection closed form at N=2") {
  const ProbVector p({0.5, 0.5});
  // both graphs hold their single possible edge independently with
  // probability phi(2)^K, so E|E(G,G')| = (phi(2)^K)^2
  for (std::size_t k_shuffles : {2, 3}) {
    const EdgeIntersectionSummary s = mc_edge_intersection(p, 2, k_shuffles, 40000, 30);
    const double expect = std::pow(std::pow(0.5, static_cast<double>(k_shuffles)), 2.0);
    CHECK(std::abs(s.edges.mean - expect) <= 3.0 * s.edges.stderr_);
  }
  CHECK_THROWS(mc_edge_intersection(p, 1, 2, 10, 0));
}

TEST_CASE("mc_edge_intersection packed path equals the generic sampler") {
  const ProbVector p({0.3, 0.3, 0.4});
  const std::size_t n = 128, k_shuffles = 6, reps = 50;
  const std::uint64_t seed = 31;
  const EdgeIntersectionSummary fast = mc_edge_intersection(p, n, k_shuffles, reps, seed);
  std::vector<double> edges(reps), fwd(reps), bwd(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng(seed, r);
    const SortedStringSeq s1 = sample_sorted_sequence(p, n, k_shuffles, rng);
    const SortedStringSeq s2 = sample_sorted_sequence(p, n, k_shuffles, rng);
    edges[r] = static_cast<double>(
        count_edges(edge_intersection(build_shuffle_graph(s1), build_shuffle_graph(s2))));
    fwd[r] = static_cast<double>(count_edges(intersect_edges(forward_edges(s1), forward_edges(s2))));
    bwd[r] = static_cast<double>(count_edges(intersect_edges(backward_edges(s1), backward_edges(s2))));
  }
  const McSummary se = summarize(edges, seed);
  CHECK(fast.edges.mean == se.mean);
  CHECK(fast.forward.mean == summarize(fwd, seed).mean);
  CHECK(fast.backward.mean == summarize(bwd, seed).mean);
}

TEST_CASE("mc_edge_intersection monotone in K under common random numbers") {
  const ProbVector p({0.5, 0.5});
  double prev_mean = 1e18;
  double prev_se = 0.0;
  for (std::size_t k_shuffles = 4; k_shuffles <= 12; k_shuffles += 2) {
    const EdgeIntersectionSummary s = mc_edge_intersection(p, 256, k_shuffles, 400, 32);
    CHECK(s.edges.mean <= prev_mean + 3.0 * (s.edges.stderr_ + prev_se));
    prev_mean = s.edges.mean;
    prev_se = s.edges.stderr_;
  }
}

TEST_CASE("f_ab_bound") {
  const ProbVector p({0.5, 0.5});
  CHECK(f_ab_bound(3, 0, p) == doctest::Approx(3.0));  // min(a, a^2) = a for b=0
  // phi(2) = 1/2 here, so a^2 phi(2)^b = 4/16
  CHECK(f_ab_bound(2, 4, p) == doctest::Approx(0.25).epsilon(1e-12));
  const ProbVector q({0.25, 0.25, 0.25, 0.25});  // phi(2) = 1/4
  CHECK(f_ab_bound(2, 4, q) == doctest::Approx(1.0 / 64.0).epsilon(1e-12));

  // Monte Carlo estimates sit below the bound across a small grid
  for (std::uint64_t a : {4, 16, 64}) {
    for (std::uint64_t b : {2, 6, 10}) {
      const EdgeIntersectionSummary s =
          mc_edge_intersection(p, a, b, 2000, 33);
      CHECK(s.edges.mean <= f_ab_bound(a, b, p) + 3.0 * s.edges.stderr_ + 1e-12);
    }
  }
}

TEST_CASE("exploration_hazard") {
  const ProbVector p({0.5, 0.5});
  // huge K: no collisions, estimate ~ 0
  const HazardSummary far = exploration_hazard(p, 64, 40, 500, 34);
  CHECK(far.estimate == doctest::Approx(0.0));
  CHECK(far.alive_fraction > 0.0);

  // short strings: estimate positive and finite, argmax within range
  const HazardSummary near = exploration_hazard(p, 256, 6, 500, 35);
  CHECK(near.estimate >= 0.0);
  CHECK(near.argmax_checkpoint < 256);
  CHECK(near.alive_fraction <= 1.0);
  CHECK_THROWS(exploration_hazard(p, 64, 1, 10, 0));
}

TEST_CASE("cold_spot_plan structure") {
  const ProbVector p({0.5, 0.5});
  const std::size_t n = 100000;
  const std::size_t k_shuffles = 19;  // floor((C_p - 0.5) log N)
  const ColdSpotPlan plan = cold_spot_plan(p, n, k_shuffles, 0.1);

  // alpha near-uniform for symmetric p (p^theta is uniform)
  CHECK(plan.alpha_counts.size() == 2);
  const auto diff = plan.alpha_counts[0] > plan.alpha_counts[1]
                        ? plan.alpha_counts[0] - plan.alpha_counts[1]
                        : plan.alpha_counts[1] - plan.alpha_counts[0];
  CHECK(diff <= 1);
  CHECK(plan.alpha_counts[0] + plan.alpha_counts[1] == plan.prefix_length);
  CHECK(plan.prefix_length + plan.suffix_length == k_shuffles);

  // gamma from the definition, with the entropies of the actual integer
  // allocations (the clean collapse below needs perfectly even counts)
  const double log_n = std::log(static_cast<double>(n));
  {
    std::vector<double> av{static_cast<double>(plan.alpha_counts[0]),
                           static_cast<double>(plan.alpha_counts[1])};
    std::vector<double> bv{static_cast<double>(plan.beta_counts[0]),
                           static_cast<double>(plan.beta_counts[1])};
    const double expect = 2.0 -
                          2.0 * static_cast<double>(k_shuffles) / log_n * std::log(2.0) +
                          static_cast<double>(plan.prefix_length) / log_n * entropy(av) +
                          static_cast<double>(plan.suffix_length) / log_n * entropy(bv);
    CHECK(plan.gamma == doctest::Approx(expect).epsilon(1e-12));
  }

  // even allocations: the entropy terms collapse to gamma = 2 - (K/logN) log 2
  {
    const std::size_t n52 = 52, k6 = 6;
    const ColdSpotPlan even = cold_spot_plan(p, n52, k6, 0.1);
    CHECK(even.alpha_counts == std::vector<std::size_t>{1, 1});
    CHECK(even.beta_counts == std::vector<std::size_t>{2, 2});
    const double ln52 = std::log(52.0);
    CHECK(even.gamma ==
          doctest::Approx(2.0 - static_cast<double>(k6) / ln52 * std::log(2.0)).epsilon(1e-12));
  }

  // |H| matches the exact prefix-count identity:
  // log|H|/logN = 1 + sum alpha_i log p_i + log|Pre_CL|/log N up to
  // integer-rounding of the ranges
  const double exponent = std::log(static_cast<double>(plan.h_size())) / log_n;
  double alpha_log = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    alpha_log += static_cast<double>(plan.alpha_counts[i]) / log_n * std::log(p[static_cast<int>(i)]);
  double prefix_count = 1.0;
  for (std::size_t v = 2; v <= plan.prefix_length; ++v) prefix_count *= static_cast<double>(v);
  for (auto c : plan.alpha_counts)
    for (std::size_t v = 2; v <= c; ++v) prefix_count /= static_cast<double>(v);
  const double predicted = 1.0 + alpha_log + std::log(prefix_count) / log_n;
  CHECK(std::abs(exponent - predicted) <= 0.01);

  // membership is consistent with the materialized ranges
  std::size_t member_count = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (plan.in_h(i)) ++member_count;
  CHECK(member_count == plan.h_size());
  CHECK(plan.boundary_size() <= 2 * plan.ranges.size());

  // infeasible suffix
  CHECK_THROWS(cold_spot_plan(p, n, plan.prefix_length, 0.1));
}

TEST_CASE("count_cold_spot_hits") {
  const ProbVector p({0.5, 0.5});
  const std::size_t n = 2000, k_shuffles = 11;
  const ColdSpotPlan plan = cold_spot_plan(p, n, k_shuffles, 0.1);

  // all-distinct sequence: no edges, no repeats
  {
    std::vector<std::uint8_t> digits(n * k_shuffles, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k_shuffles; ++j)
        digits[i * k_shuffles + j] = static_cast<std::uint8_t>((i >> (k_shuffles - 1 - j)) & 1);
    const SortedStringSeq s(n, k_shuffles, 2, std::move(digits));
    const ColdSpotHits hits = count_cold_spot_hits(s, plan);
    CHECK(hits.edges_in_h == 0);
    CHECK(hits.y_tot == 0);
  }

  // Y_tot concentrates: variance below mean within noise (sub-Poisson), and
  // edges_in_h >= y_tot whenever the containment event holds
  RngStream rng(36, 0);
  std::vector<double> y_values;
  double containment_violations = 0.0, cl_appearances = 0.0;
  for (int r = 0; r < 200; ++r) {
    const SortedStringSeq s = sample_sorted_sequence(p, n, k_shuffles, rng);
    const ColdSpotHits hits = count_cold_spot_hits(s, plan);
    y_values.push_back(static_cast<double>(hits.y_tot));
    // containment check per appearance of a collision-likely string
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && s.rows_equal(j + 1, i)) ++j;
      // collision-likely membership via the plan's digit counts
      bool cl = s.digit(i, plan.prefix_length) == 0 && s.digit(i, plan.prefix_length + 1) == 1;
      if (cl) {
        std::vector<std::size_t> counts(2, 0);
        for (std::size_t t = 0; t < plan.prefix_length; ++t) ++counts[s.digit(i, t)];
        cl = counts == plan.alpha_counts;
        if (cl) {
          std::fill(counts.begin(), counts.end(), 0);
          for (std::size_t t = plan.prefix_length; t < k_shuffles; ++t) ++counts[s.digit(i, t)];
          cl = counts == plan.beta_counts;
        }
      }
      if (cl) {
        for (std::size_t t = i; t <= j; ++t) {
          cl_appearances += 1.0;
          if (!plan.in_h(t + 1)) containment_violations += 1.0;
        }
      }
      i = j + 1;
    }
  }
  const McSummary y = summarize(y_values, 36);
  CHECK(y.mean > 1.0);
  double var = 0.0;
  for (double v : y_values) var += (v - y.mean) * (v - y.mean);
  var /= static_cast<double>(y_values.size() - 1);
  // sub-Poisson: variance <= mean + 3 SE(variance proxy)
  CHECK(var <= y.mean + 3.0 * y.stderr_ * std::sqrt(2.0 * static_cast<double>(y_values.size())));
  CHECK(cl_appearances > 0.0);
  CHECK(containment_violations / cl_appearances <= 0.2);
}

TEST_CASE("collision indicators are non-positively correlated") {
  const ProbVector p({0.5, 0.5});
  const std::size_t n = 2000, k_shuffles = 11;
  const ColdSpotPlan plan = cold_spot_plan(p, n, k_shuffles, 0.1);
  // two specific collision-likely strings
  DigitString s1, s2;
  {
    DigitString prefix;
    for (std::size_t d = 0; d < plan.alpha_counts.size(); ++d)
      prefix.insert(prefix.end(), plan.alpha_counts[d], static_cast<std::uint8_t>(d));
    DigitString suffix;
    suffix.push_back(0);
    suffix.push_back(1);
    std::vector<std::size_t> rest = plan.beta_counts;
    --rest[0];
    --rest[1];
    for (std::size_t d = 0; d < rest.size(); ++d)
      suffix.insert(suffix.end(), rest[d], static_cast<std::uint8_t>(d));
    s1 = prefix;
    s1.insert(s1.end(), suffix.begin(), suffix.end());
    s2 = prefix;
    std::reverse(prefix.begin(), prefix.end());
    s2 = prefix;
    s2.insert(s2.end(), suffix.begin(), suffix.end());
  }
  RngStream rng(37, 0);
  const int reps = 3000;
  std::vector<double> xs(reps), ys(reps);
  for (int r = 0; r < reps; ++r) {
    const SortedStringSeq s = sample_sorted_sequence(p, n, k_shuffles, rng);
    xs[static_cast<std::size_t>(r)] = appears_at_least_twice(s, s1) ? 1.0 : 0.0;
    ys[static_cast<std::size_t>(r)] = appears_at_least_twice(s, s2) ? 1.0 : 0.0;
  }
  double mx = 0.0, my = 0.0;
  for (int r = 0; r < reps; ++r) {
    mx += xs[static_cast<std::size_t>(r)];
    my += ys[static_cast<std::size_t>(r)];
  }
  mx /= reps;
  my /= reps;
  std::vector<double> z(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r)
    z[static_cast<std::size_t>(r)] =
        (xs[static_cast<std::size_t>(r)] - mx) * (ys[static_cast<std::size_t>(r)] - my);
  const McSummary cov = summarize(z, 37);
  CHECK(mx > 0.05);  // the events are non-trivial at this scale
  CHECK(cov.mean <= 3.0 * cov.stderr_);
}

TEST_CASE("independent-subset intersection inequalities on exact small systems") {
  RngStream rng(38, 0);
  const int ground = 8;
  for (int trial = 0; trial < 200; ++trial) {
    const SubsetLaw a = random_subset_law(rng, ground, 5);
    const SubsetLaw b = random_subset_law(rng, ground, 4);
    const auto ma = element_marginals(a, ground);
    const auto mb = element_marginals(b, ground);
    double cross = 0.0, self_a = 0.0, self_b = 0.0;
    for (int e = 0; e < ground; ++e) {
      cross += ma[static_cast<std::size_t>(e)] * mb[static_cast<std::size_t>(e)];
      self_a += ma[static_cast<std::size_t>(e)] * ma[static_cast<std::size_t>(e)];
      self_b += mb[static_cast<std::size_t>(e)] * mb[static_cast<std::size_t>(e)];
    }
    CHECK(cross <= (self_a + self_b) / 2.0 + 1e-12);

    // conditioning on a sigma-algebra (partition of outcomes) can only
    // increase the expected self-intersection
    const std::size_t outcomes = a.masks.size();
    std::vector<int> block(outcomes);
    for (auto& bl : block) bl = static_cast<int>(rng.next_below(2));
    double conditioned = 0.0;
    for (int bl = 0; bl < 2; ++bl) {
      double pb = 0.0;
      std::vector<double> cm(static_cast<std::size_t>(ground), 0.0);
      for (std::size_t o = 0; o < outcomes; ++o) {
        if (block[o] != bl) continue;
        pb += a.probs[o];
        for (int e = 0; e < ground; ++e)
          if ((a.masks[o] >> e) & 1u) cm[static_cast<std::size_t>(e)] += a.probs[o];
      }
      if (pb == 0.0) continue;
      for (int e = 0; e < ground; ++e)
        conditioned += cm[static_cast<std::size_t>(e)] * cm[static_cast<std::size_t>(e)] / pb;
    }
    CHECK(self_a <= conditioned + 1e-12);
  }
}

TEST_CASE("tv_lower_mc") {
  const ProbVector p({0.5, 0.5});
  // K = 0: point mass vs uniform separates fully
  const TvLowerBound zero =
      tv_lower_mc(p, 16, 0, Statistic::LongestIncreasingRun, 10000, 39);
  CHECK(zero.raw >= 0.99);
  CHECK(zero.penalized <= zero.raw);

  // statistic-based lower bounds never exceed the exact TV (Eulerian oracle)
  for (std::size_t k_shuffles : {5, 7, 9, 12}) {
    const double tv = static_cast<double>(tv_symmetric_eulerian(2, 52, k_shuffles));
    for (Statistic st : {Statistic::LongestIncreasingRun, Statistic::AscentsInH}) {
      const TvLowerBound lb = tv_lower_mc(p, 52, k_shuffles, st, 4000, 40);
      const double ci = std::sqrt(std::log(2.0 / 0.05) / (2.0 * 4000.0));
      CHECK(lb.raw <= tv + 3.0 * ci);
    }
  }

  // the ascent statistic recovers most of the distance at K = 4
  const TvLowerBound k4 = tv_lower_mc(p, 52, 4, Statistic::AscentsInH, 20000, 41);
  CHECK(k4.raw >= 0.9);
}

TEST_CASE("cutoff_profile trends") {
  const ProbVector p({0.5, 0.5});
  const auto rows = cutoff_profile(p, 52, 4, 11, Statistic::AscentsInH, 3000, 42);
  REQUIRE(rows.size() == 8);
  // lower bound >= 0.9 at K=4 and Eulerian TV <= 0.1 at K=11
  CHECK(rows.front().lower.raw >= 0.9);
  CHECK(static_cast<double>(tv_symmetric_eulerian(2, 52, 11)) <= 0.1);
  // monotone trend up to noise
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    CHECK(rows[i + 1].lower.raw <= rows[i].lower.raw + 0.1);
}
