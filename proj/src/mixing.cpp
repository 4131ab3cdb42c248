#include "riffle/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "riffle/blocks.hpp"
#include "riffle/constants.hpp"
#include "riffle/likelihood.hpp"
#include "riffle/shuffle.hpp"

namespace riffle {

namespace {

int bits_per_digit(int k) {
  int b = 1;
  while ((1 << b) < k) ++b;
  return b;
}

// Sorted packed keys: digits drawn in the same order as
// sample_sorted_sequence, packed most-significant-digit first so integer
// order equals lexicographic order. Requires K * bits <= 64.
void sample_sorted_keys(const DigitSampler& sampler, std::size_t n, std::size_t length, int bits,
                        RngStream& rng, std::vector<std::uint64_t>& keys) {
  keys.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < length; ++j)
      key = (key << bits) | static_cast<std::uint64_t>(sampler(rng));
    keys[i] = key;
  }
  std::sort(keys.begin(), keys.end());
}

struct PackedEdgeCounts {
  std::size_t edges = 0;
  std::size_t fwd = 0;
  std::size_t bwd = 0;
};

// edge i exists iff keys[i] == keys[i+1]; the two leading digits decide
// forward/backward membership
PackedEdgeCounts count_pair_edges(const std::vector<std::uint64_t>& a,
                                  const std::vector<std::uint64_t>& b, std::size_t length,
                                  int bits, int k) {
  PackedEdgeCounts c;
  const int shift = static_cast<int>(length - 2) * bits;
  const std::uint64_t hi2 =
      (static_cast<std::uint64_t>(k - 1) << bits) | static_cast<std::uint64_t>(k - 1);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    if (a[i] == a[i + 1] && b[i] == b[i + 1]) {
      ++c.edges;
      const std::uint64_t pa = a[i] >> shift;
      const std::uint64_t pb = b[i] >> shift;
      if (pa != hi2 && pb != hi2) ++c.fwd;
      if (pa != 0 && pb != 0) ++c.bwd;
    }
  }
  return c;
}

}  // namespace

EdgeIntersectionSummary mc_edge_intersection(const ProbVector& p, std::size_t n,
                                             std::size_t k_shuffles, std::size_t replicates,
                                             std::uint64_t seed, ExecMode mode) {
  if (n < 2 || k_shuffles < 2)
    throw std::invalid_argument("mc_edge_intersection: need N >= 2 and K >= 2");
  if (replicates == 0) throw std::invalid_argument("mc_edge_intersection: need replicates >= 1");
  const int bits = bits_per_digit(p.k());
  const bool packed = k_shuffles * static_cast<std::size_t>(bits) <= 64;
  const DigitSampler sampler(p.weights());

  std::vector<double> edges(replicates), fwd(replicates), bwd(replicates);
  for_each_replicate(replicates, mode, [&](std::size_t r) {
    RngStream rng(seed, r);
    if (packed) {
      std::vector<std::uint64_t> a, b;
      sample_sorted_keys(sampler, n, k_shuffles, bits, rng, a);
      sample_sorted_keys(sampler, n, k_shuffles, bits, rng, b);
      const PackedEdgeCounts c = count_pair_edges(a, b, k_shuffles, bits, p.k());
      edges[r] = static_cast<double>(c.edges);
      fwd[r] = static_cast<double>(c.fwd);
      bwd[r] = static_cast<double>(c.bwd);
    } else {
      const SortedStringSeq s1 = sample_sorted_sequence(p, n, k_shuffles, rng);
      const SortedStringSeq s2 = sample_sorted_sequence(p, n, k_shuffles, rng);
      const ShuffleGraph g1 = build_shuffle_graph(s1);
      const ShuffleGraph g2 = build_shuffle_graph(s2);
      edges[r] = static_cast<double>(count_edges(edge_intersection(g1, g2)));
      fwd[r] = static_cast<double>(count_edges(intersect_edges(forward_edges(s1), forward_edges(s2))));
      bwd[r] = static_cast<double>(count_edges(intersect_edges(backward_edges(s1), backward_edges(s2))));
    }
  });
  EdgeIntersectionSummary out;
  out.edges = summarize(edges, seed);
  out.forward = summarize(fwd, seed);
  out.backward = summarize(bwd, seed);
  return out;
}

double f_ab_bound(std::uint64_t a, std::uint64_t b, const ProbVector& p) {
  const double da = static_cast<double>(a);
  return std::min(da, da * da * std::pow(phi(p, 2.0), static_cast<double>(b)));
}

HazardSummary exploration_hazard(const ProbVector& p, std::size_t n, std::size_t k_shuffles,
                                 std::size_t replicates, std::uint64_t seed, ExecMode mode,
                                 std::size_t checkpoints) {
  if (n < 2 || k_shuffles < 2)
    throw std::invalid_argument("exploration_hazard: need N >= 2 and K >= 2");
  if (replicates == 0 || checkpoints == 0)
    throw std::invalid_argument("exploration_hazard: need replicates and checkpoints >= 1");
  const int bits = bits_per_digit(p.k());
  const bool packed = k_shuffles * static_cast<std::size_t>(bits) <= 64;
  const DigitSampler sampler(p.weights());

  // checkpoint i means strings 1..i revealed (i = 0: nothing revealed)
  std::vector<std::size_t> marks(checkpoints);
  for (std::size_t c = 0; c < checkpoints; ++c) marks[c] = c * n / checkpoints;

  // per replicate: unrevealed forward-shared edge count per live checkpoint
  std::vector<std::vector<double>> counts(checkpoints, std::vector<double>(replicates, 0.0));
  std::vector<std::vector<std::uint8_t>> alive(checkpoints,
                                               std::vector<std::uint8_t>(replicates, 0));
  for_each_replicate(replicates, mode, [&](std::size_t r) {
    RngStream rng(seed, r);
    std::vector<std::uint8_t> shared_fwd(n > 1 ? n - 1 : 0, 0);
    std::size_t first_bad = n;  // 0-based row index of the first halting string
    if (packed) {
      std::vector<std::uint64_t> a, b;
      sample_sorted_keys(sampler, n, k_shuffles, bits, rng, a);
      sample_sorted_keys(sampler, n, k_shuffles, bits, rng, b);
      const int shift = static_cast<int>(k_shuffles - 2) * bits;
      const std::uint64_t hi2 = (static_cast<std::uint64_t>(p.k() - 1) << bits) |
                                static_cast<std::uint64_t>(p.k() - 1);
      for (std::size_t i = 0; i < n; ++i) {
        if ((a[i] >> shift) == hi2 || (b[i] >> shift) == hi2) {
          first_bad = i;
          break;
        }
      }
      for (std::size_t i = 0; i + 1 < n; ++i)
        if (a[i] == a[i + 1] && b[i] == b[i + 1] && (a[i] >> shift) != hi2 &&
            (b[i] >> shift) != hi2)
          shared_fwd[i] = 1;
    } else {
      const SortedStringSeq s1 = sample_sorted_sequence(p, n, k_shuffles, rng);
      const SortedStringSeq s2 = sample_sorted_sequence(p, n, k_shuffles, rng);
      const std::uint8_t hi = static_cast<std::uint8_t>(p.k() - 1);
      for (std::size_t i = 0; i < n; ++i) {
        if (s1.row_has_double_prefix(i, hi) || s2.row_has_double_prefix(i, hi)) {
          first_bad = i;
          break;
        }
      }
      shared_fwd = intersect_edges(forward_edges(s1), forward_edges(s2));
    }
    // suffix counts: edges (j, j+1) 1-based with j >= i  <=>  0-based e >= i-1
    std::vector<std::size_t> suffix(n, 0);
    for (std::size_t e = n - 1; e-- > 0;) suffix[e] = suffix[e + 1] + shared_fwd[e];
    for (std::size_t c = 0; c < checkpoints; ++c) {
      const std::size_t i = marks[c];  // revealed strings 1..i, 1-based
      if (first_bad >= i) {            // no halting string among the first i rows
        alive[c][r] = 1;
        counts[c][r] = static_cast<double>(i == 0 ? suffix[0] : suffix[i - 1]);
      }
    }
  });

  HazardSummary out;
  out.replicates = replicates;
  out.seed = seed;
  bool seen = false;
  for (std::size_t c = 0; c < checkpoints; ++c) {
    std::vector<double> live;
    live.reserve(replicates);
    for (std::size_t r = 0; r < replicates; ++r)
      if (alive[c][r]) live.push_back(counts[c][r]);
    if (live.empty()) continue;
    const McSummary s = summarize(live, seed);
    if (!seen || s.mean > out.estimate) {
      seen = true;
      out.estimate = s.mean;
      out.stderr_ = s.stderr_;
      out.argmax_checkpoint = marks[c];
      out.alive_fraction = static_cast<double>(live.size()) / static_cast<double>(replicates);
    }
  }
  return out;
}

namespace {

// Largest-remainder allocation of `total` units proportional to weights,
// forcing every entry positive.
std::vector<std::size_t> largest_remainder(const std::vector<double>& weights, std::size_t total) {
  const std::size_t k = weights.size();
  if (total < k) throw std::invalid_argument("cold_spot_plan: too few digits to allocate");
  std::vector<std::size_t> counts(k);
  std::vector<std::pair<double, std::size_t>> rem(k);
  std::size_t used = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double target = weights[i] * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(target));
    rem[i] = {target - std::floor(target), i};
    used += counts[i];
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t j = 0; used < total; ++j, ++used) ++counts[rem[j % k].second];
  // positivity: borrow from the largest entry
  for (std::size_t i = 0; i < k; ++i) {
    while (counts[i] == 0) {
      const std::size_t big = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      if (counts[big] <= 1) throw std::invalid_argument("cold_spot_plan: infeasible allocation");
      --counts[big];
      ++counts[i];
    }
  }
  return counts;
}

BigInt multinomial_count(const std::vector<std::size_t>& counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  BigInt m = big_factorial(total);
  for (auto c : counts) m /= big_factorial(c);
  return m;
}

}  // namespace

std::size_t ColdSpotPlan::h_size() const {
  std::size_t s = 0;
  for (const auto& [lo, hi] : ranges) s += hi - lo + 1;
  return s;
}

std::size_t ColdSpotPlan::boundary_size() const {
  std::size_t s = 0;
  for (const auto& [lo, hi] : ranges) s += (lo == hi) ? 1 : 2;
  return s;
}

bool ColdSpotPlan::in_h(std::size_t position) const {
  auto it = std::upper_bound(ranges.begin(), ranges.end(), position,
                             [](std::size_t v, const auto& r) { return v < r.first; });
  if (it == ranges.begin()) return false;
  --it;
  return position >= it->first && position <= it->second;
}

ColdSpotPlan cold_spot_plan(const ProbVector& p, std::size_t n, std::size_t k_shuffles,
                            double delta, std::size_t max_prefixes) {
  if (n < 3 || k_shuffles < 2) throw std::invalid_argument("cold_spot_plan: bad N or K");
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("cold_spot_plan: delta must lie in (0, 1)");
  const double log_n = std::log(static_cast<double>(n));
  const double th = theta(p);
  const double big_i = rate_I(p, th);

  ColdSpotPlan plan;
  plan.n = n;
  plan.length = k_shuffles;
  plan.prefix_length =
      static_cast<std::size_t>(std::floor((1.0 - delta) / (2.0 * big_i) * log_n));
  if (plan.prefix_length >= k_shuffles)
    throw std::invalid_argument("cold_spot_plan: infeasible beta_tot <= 0");
  plan.suffix_length = k_shuffles - plan.prefix_length;

  plan.alpha_counts = largest_remainder(tilt(p, th).weights(), plan.prefix_length);
  plan.beta_counts = largest_remainder(tilt(p, 2.0).weights(), plan.suffix_length);

  if (multinomial_count(plan.alpha_counts) > max_prefixes)
    throw std::invalid_argument("cold_spot_plan: prefix count exceeds enumeration cap");

  // gamma = 2 + 2 sum (alpha_i + beta_i) log p_i + alpha_tot H(alpha) + beta_tot H(beta)
  std::vector<double> alpha(plan.alpha_counts.size()), beta(plan.beta_counts.size());
  for (std::size_t i = 0; i < alpha.size(); ++i)
    alpha[i] = static_cast<double>(plan.alpha_counts[i]) / log_n;
  for (std::size_t i = 0; i < beta.size(); ++i)
    beta[i] = static_cast<double>(plan.beta_counts[i]) / log_n;
  double log_sum = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    log_sum += (alpha[i] + beta[i]) * std::log(p.weights()[i]);
  plan.gamma = 2.0 + 2.0 * log_sum +
               (static_cast<double>(plan.prefix_length) / log_n) * entropy(alpha) +
               (static_cast<double>(plan.suffix_length) / log_n) * entropy(beta);

  // enumerate collision-likely prefixes in lex order; each contributes the
  // integer points of N*J_x
  DigitString x;
  x.reserve(plan.prefix_length);
  for (std::size_t d = 0; d < plan.alpha_counts.size(); ++d)
    x.insert(x.end(), plan.alpha_counts[d], static_cast<std::uint8_t>(d));
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  do {
    const PrefixInterval j = prefix_interval(p, x);
    plan.lambda_prefix = j.lambda;
    const double nd = static_cast<double>(n);
    const auto lo_raw = static_cast<long long>(std::ceil(j.t * nd));
    const auto hi_raw = static_cast<long long>(std::ceil((j.t + j.lambda) * nd)) - 1;
    const std::size_t lo = static_cast<std::size_t>(std::max(1LL, lo_raw));
    const std::size_t hi = static_cast<std::size_t>(
        std::min(static_cast<long long>(n), hi_raw));
    if (lo <= hi) {
      if (!ranges.empty() && ranges.back().second + 1 >= lo)
        ranges.back().second = std::max(ranges.back().second, hi);
      else
        ranges.emplace_back(lo, hi);
    }
  } while (std::next_permutation(x.begin(), x.end()));
  plan.ranges = std::move(ranges);
  return plan;
}

ColdSpotHits count_cold_spot_hits(const SortedStringSeq& s, const ColdSpotPlan& plan) {
  if (s.length() != plan.length || s.size() != plan.n)
    throw std::invalid_argument("count_cold_spot_hits: sequence does not match the plan");
  ColdSpotHits hits;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (s.rows_equal(i, i + 1) && plan.in_h(i + 1) && plan.in_h(i + 2)) ++hits.edges_in_h;

  const std::size_t a_len = plan.prefix_length;
  std::vector<std::size_t> counts(plan.alpha_counts.size());
  auto collision_likely = [&](std::size_t row) {
    if (s.digit(row, a_len) != 0 || s.digit(row, a_len + 1) != 1) return false;
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t j = 0; j < a_len; ++j) ++counts[s.digit(row, j)];
    if (counts != plan.alpha_counts) return false;
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t j = a_len; j < plan.length; ++j) ++counts[s.digit(row, j)];
    return counts == plan.beta_counts;
  };

  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && s.rows_equal(j + 1, i)) ++j;
    if (j > i && collision_likely(i)) ++hits.y_tot;
    i = j + 1;
  }
  return hits;
}

std::string statistic_name(Statistic s) {
  return s == Statistic::LongestIncreasingRun ? "longest-increasing-run" : "ascents-in-H";
}

namespace {

std::size_t longest_increasing_run(const Permutation& pi) {
  if (pi.empty()) return 0;
  std::size_t best = 1, cur = 1;
  for (std::size_t i = 0; i + 1 < pi.size(); ++i) {
    if (pi[i] < pi[i + 1]) {
      ++cur;
      best = std::max(best, cur);
    } else {
      cur = 1;
    }
  }
  return best;
}

std::size_t ascents_in_h(const Permutation& pi, const ColdSpotPlan& plan) {
  std::size_t c = 0;
  for (std::size_t i = 0; i + 1 < pi.size(); ++i)
    if (plan.in_h(i + 1) && plan.in_h(i + 2) && pi[i] < pi[i + 1]) ++c;
  return c;
}

}  // namespace

TvLowerBound tv_lower_mc(const ProbVector& p, std::size_t n, std::size_t k_shuffles,
                         Statistic statistic, std::size_t replicates, std::uint64_t seed,
                         ExecMode mode, double delta) {
  if (n < 2) throw std::invalid_argument("tv_lower_mc: need N >= 2");
  if (replicates == 0) throw std::invalid_argument("tv_lower_mc: need replicates >= 1");
  ColdSpotPlan plan;
  if (statistic == Statistic::AscentsInH)
    plan = cold_spot_plan(p, n, std::max<std::size_t>(k_shuffles, 2), delta);

  std::vector<std::size_t> t_sh(replicates), t_un(replicates);
  for_each_replicate(replicates, mode, [&](std::size_t r) {
    RngStream rng(seed, r);
    Permutation shuffled;
    if (k_shuffles == 0) {
      shuffled = identity_permutation(n);
    } else {
      shuffled = sample_inverse_representation(p, n, k_shuffles, rng).first;
    }
    const Permutation uniform = random_permutation(n, rng);
    if (statistic == Statistic::LongestIncreasingRun) {
      t_sh[r] = longest_increasing_run(shuffled);
      t_un[r] = longest_increasing_run(uniform);
    } else {
      t_sh[r] = ascents_in_h(shuffled, plan);
      t_un[r] = ascents_in_h(uniform, plan);
    }
  });

  // max over thresholds of the empirical survival-function gap
  const std::size_t max_t = n + 1;
  std::vector<std::size_t> hist_sh(max_t + 2, 0), hist_un(max_t + 2, 0);
  for (std::size_t r = 0; r < replicates; ++r) {
    ++hist_sh[std::min(t_sh[r], max_t)];
    ++hist_un[std::min(t_un[r], max_t)];
  }
  TvLowerBound out;
  out.replicates = replicates;
  out.seed = seed;
  double tail_sh = 0.0, tail_un = 0.0;
  const double r_inv = 1.0 / static_cast<double>(replicates);
  for (std::size_t c = max_t + 1; c-- > 0;) {
    tail_sh += static_cast<double>(hist_sh[c + 1]) * r_inv;
    tail_un += static_cast<double>(hist_un[c + 1]) * r_inv;
    const double gap = std::abs(tail_sh - tail_un);
    if (gap > out.raw) {
      out.raw = gap;
      out.threshold = c + 1;
    }
  }
  // two-sided 95% DKW band on each empirical curve
  const double eps = std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(replicates)));
  out.penalized = std::max(0.0, out.raw - 2.0 * eps);
  return out;
}

std::vector<ProfileRow> cutoff_profile(const ProbVector& p, std::size_t n, std::size_t k_min,
                                       std::size_t k_max, Statistic statistic,
                                       std::size_t replicates, std::uint64_t seed, ExecMode mode) {
  if (k_min < 2 || k_max < k_min) throw std::invalid_argument("cutoff_profile: bad K range");
  std::vector<ProfileRow> rows;
  rows.reserve(k_max - k_min + 1);
  for (std::size_t k = k_min; k <= k_max; ++k) {
    ProfileRow row;
    row.k_shuffles = k;
    // same seed across K: common random numbers for the monotone sweep
    row.lower = tv_lower_mc(p, n, k, statistic, replicates, seed, mode);
    row.edges = mc_edge_intersection(p, n, k, replicates, seed, mode);
    row.hazard = exploration_hazard(p, n, k, replicates, seed, mode);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace riffle
