#include "riffle/shuffle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace riffle {

RationalProbVector::RationalProbVector(std::vector<Rational> weights) : w_(std::move(weights)) {
  if (w_.size() < 2) throw std::invalid_argument("RationalProbVector: need k >= 2 entries");
  Rational sum = 0;
  for (const auto& p : w_) {
    if (p <= 0) throw std::invalid_argument("RationalProbVector: entries must be positive");
    sum += p;
  }
  if (sum != 1) throw std::invalid_argument("RationalProbVector: entries must sum to exactly 1");
}

RationalProbVector RationalProbVector::from_integer_weights(
    const std::vector<std::uint64_t>& nums) {
  BigInt den = 0;
  for (auto v : nums) den += v;
  std::vector<Rational> w;
  w.reserve(nums.size());
  for (auto v : nums) w.emplace_back(BigInt(v), den);
  return RationalProbVector(std::move(w));
}

std::vector<double> RationalProbVector::to_doubles() const {
  std::vector<double> out;
  out.reserve(w_.size());
  for (const auto& p : w_) out.push_back(static_cast<double>(p));
  return out;
}

Rational RationalProbVector::phi2() const {
  Rational s = 0;
  for (const auto& p : w_) s += p * p;
  return s;
}

Rational ExactDistribution::at(const Permutation& pi) const {
  auto it = prob.find(pi);
  return it == prob.end() ? Rational(0) : it->second;
}

std::string ExactDistribution::to_json() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [pi, pr] : prob) {
    if (!first) out += ",";
    first = false;
    out += "\"" + permutation_to_string(pi) + "\":\"" + rational_to_string(pr) + "\"";
  }
  out += "}";
  return out;
}

Permutation forward_shuffle(const Permutation& deck, const ProbVector& p, RngStream& rng) {
  const std::size_t n = deck.size();
  const int k = p.k();
  // multinomial cut sizes from n i.i.d. digit draws
  const DigitSampler sampler(p.weights());
  std::vector<std::size_t> pile_size(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < n; ++i) ++pile_size[static_cast<std::size_t>(sampler(rng))];

  std::vector<std::size_t> next(static_cast<std::size_t>(k));
  std::size_t acc = 0;
  for (std::size_t j = 0; j < next.size(); ++j) {
    next[j] = acc;
    acc += pile_size[j];
  }
  std::vector<std::size_t> remaining = pile_size;

  // proportional drop rule == uniform interleaving given pile sizes
  Permutation out(n);
  std::size_t left = n;
  for (std::size_t t = 0; t < n; ++t) {
    std::uint64_t u = rng.next_below(left);
    std::size_t j = 0;
    while (u >= remaining[j]) {
      u -= remaining[j];
      ++j;
    }
    out[t] = deck[next[j]];
    ++next[j];
    --remaining[j];
    --left;
  }
  return out;
}

ProbVector convolve(const ProbVector& p, const ProbVector& q) {
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(p.k()) * static_cast<std::size_t>(q.k()));
  for (double pi : p.weights())
    for (double qj : q.weights()) w.push_back(pi * qj);
  return ProbVector(std::move(w));
}

RationalProbVector convolve(const RationalProbVector& p, const RationalProbVector& q) {
  std::vector<Rational> w;
  w.reserve(static_cast<std::size_t>(p.k()) * static_cast<std::size_t>(q.k()));
  for (const auto& pi : p.weights())
    for (const auto& qj : q.weights()) w.push_back(pi * qj);
  return RationalProbVector(std::move(w));
}

std::pair<Permutation, ShuffleGraph> sample_inverse_representation(const ProbVector& p,
                                                                   std::size_t n,
                                                                   std::size_t k_shuffles,
                                                                   RngStream& rng) {
  if (n == 0 || k_shuffles == 0)
    throw std::invalid_argument("sample_inverse_representation: N, K must be >= 1");
  const SortedStringSeq s = sample_sorted_sequence(p, n, k_shuffles, rng);
  ShuffleGraph g = build_shuffle_graph(s);
  const Permutation pi = random_permutation(n, rng);
  return {g_modify(pi, g), std::move(g)};
}

namespace {

// All exact accumulation is done with a shared integer denominator; entries
// are converted to canonical rationals only when the map is materialized.
ExactDistribution normalize(std::map<Permutation, BigInt>&& nums, const BigInt& den) {
  ExactDistribution dist;
  for (auto& [pi, num] : nums)
    if (num != 0) dist.prob.emplace(pi, Rational(num, den));
  return dist;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<Permutation> out;
  Permutation pi = identity_permutation(n);
  do {
    out.push_back(pi);
  } while (std::next_permutation(pi.begin(), pi.end()));
  return out;
}

}  // namespace

ExactDistribution exact_forward_distribution(const RationalProbVector& p, std::size_t n,
                                             std::size_t k_shuffles, const ExactCaps& caps) {
  if (n == 0) throw std::invalid_argument("exact_forward_distribution: N must be >= 1");
  if (n > caps.max_n) throw std::invalid_argument("exact_forward_distribution: N exceeds cap");
  if (k_shuffles == 0) {
    ExactDistribution dist;
    dist.prob.emplace(identity_permutation(n), Rational(1));
    return dist;
  }
  // collapse K shuffles into a single (p^{*K})-shuffle
  RationalProbVector q = p;
  for (std::size_t i = 1; i < k_shuffles; ++i) {
    if (static_cast<std::size_t>(q.k()) * static_cast<std::size_t>(p.k()) > caps.max_piles)
      throw std::invalid_argument("exact_forward_distribution: k^K exceeds pile cap");
    q = convolve(q, p);
  }
  if (static_cast<std::size_t>(q.k()) > caps.max_piles)
    throw std::invalid_argument("exact_forward_distribution: k^K exceeds pile cap");

  const std::size_t m = static_cast<std::size_t>(q.k());
  // common denominator D and integer numerators for the pile weights
  BigInt den = 1;
  for (const auto& w : q.weights()) den *= denominator(w);
  std::vector<BigInt> wnum(m);
  for (std::size_t j = 0; j < m; ++j)
    wnum[j] = numerator(q.weights()[j]) * (den / denominator(q.weights()[j]));

  std::map<Permutation, BigInt> nums;
  const BigInt total_den = big_pow(den, n);
  for (const Permutation& sigma : all_permutations(n)) {
    const Permutation tau = invert(sigma);
    // pile assignment DP over values v = 0..n-1: weakly increasing pile
    // labels, strict increase wherever tau descends
    std::vector<BigInt> f(wnum.begin(), wnum.end());
    for (std::size_t v = 0; v + 1 < n; ++v) {
      const bool strict = tau[v] > tau[v + 1];
      std::vector<BigInt> pref(m + 1);
      for (std::size_t j = 0; j < m; ++j) pref[j + 1] = pref[j] + f[j];
      for (std::size_t j = 0; j < m; ++j) f[j] = (strict ? pref[j] : pref[j + 1]) * wnum[j];
    }
    BigInt tot = 0;
    for (const auto& x : f) tot += x;
    if (tot != 0) nums.emplace(sigma, std::move(tot));
  }
  return normalize(std::move(nums), total_den);
}

namespace {

struct InverseEnumerator {
  std::size_t n, length, m;
  const std::vector<BigInt>* string_num;  // numerator of lambda_s over den^K
  std::vector<std::size_t> multiset;      // non-decreasing string ids
  std::map<Permutation, BigInt>* nums;
  const std::vector<Permutation>* perms;
  BigInt n_factorial;

  void run() { recurse(0, 0); }

  void recurse(std::size_t depth, std::size_t min_id) {
    if (depth == n) {
      accumulate();
      return;
    }
    for (std::size_t id = min_id; id < m; ++id) {
      multiset.push_back(id);
      recurse(depth + 1, id);
      multiset.pop_back();
    }
  }

  void accumulate() {
    // multiplicity pattern -> component sizes of G(S), multinomial count,
    // and the product of string probabilities
    BigInt weight = n_factorial;  // N! / prod mult! * prod lambda-numerators
    BigInt lam = 1;
    std::vector<std::size_t> comps;
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && multiset[j + 1] == multiset[i]) ++j;
      const std::size_t mult = j - i + 1;
      comps.push_back(mult);
      weight /= big_factorial(mult);
      for (std::size_t t = 0; t < mult; ++t) lam *= (*string_num)[multiset[i]];
      i = j + 1;
    }
    weight *= lam;

    BigInt vfact = 1;
    for (auto v : comps) vfact *= big_factorial(v);
    const BigInt contrib = weight * vfact;  // over den^{KN} * N!

    for (const Permutation& sigma : *perms) {
      // sigma^G == sigma iff sigma ascends within every component
      bool ok = true;
      std::size_t pos = 0;
      for (auto v : comps) {
        for (std::size_t t = pos; ok && t + 1 < pos + v; ++t) ok = sigma[t] < sigma[t + 1];
        if (!ok) break;
        pos += v;
      }
      if (ok) (*nums)[invert(sigma)] += contrib;
    }
  }
};

}  // namespace

ExactDistribution exact_inverse_distribution(const RationalProbVector& p, std::size_t n,
                                             std::size_t k_shuffles, const ExactCaps& caps) {
  if (n == 0) throw std::invalid_argument("exact_inverse_distribution: N must be >= 1");
  if (n > caps.max_n) throw std::invalid_argument("exact_inverse_distribution: N exceeds cap");
  if (k_shuffles == 0) {
    ExactDistribution dist;
    dist.prob.emplace(identity_permutation(n), Rational(1));
    return dist;
  }
  const std::size_t k = static_cast<std::size_t>(p.k());
  std::size_t m = 1;
  for (std::size_t i = 0; i < k_shuffles; ++i) {
    if (m > caps.max_multisets) break;
    m *= k;
  }
  const BigInt multisets = big_binomial(BigInt(m) + static_cast<std::int64_t>(n) - 1, n);
  if (multisets > caps.max_multisets)
    throw std::invalid_argument("exact_inverse_distribution: multiset count exceeds cap");

  // per-digit common denominator
  BigInt den = 1;
  for (const auto& w : p.weights()) den *= denominator(w);
  std::vector<BigInt> dnum(k);
  for (std::size_t j = 0; j < k; ++j)
    dnum[j] = numerator(p.weights()[j]) * (den / denominator(p.weights()[j]));

  // numerator of lambda_s over den^K for every string id; string id in base k
  // (most significant digit first) matches lexicographic order
  std::vector<BigInt> string_num(m, 1);
  for (std::size_t id = 0; id < m; ++id) {
    BigInt num = 1;
    std::size_t rest = id;
    for (std::size_t pos = 0; pos < k_shuffles; ++pos) {
      num *= dnum[rest % k];
      rest /= k;
    }
    string_num[id] = std::move(num);
  }

  std::map<Permutation, BigInt> nums;
  const std::vector<Permutation> perms = all_permutations(n);
  InverseEnumerator en;
  en.n = n;
  en.length = k_shuffles;
  en.m = m;
  en.string_num = &string_num;
  en.nums = &nums;
  en.perms = &perms;
  en.n_factorial = big_factorial(n);
  en.multiset.reserve(n);
  en.run();

  const BigInt total_den = big_pow(den, n * k_shuffles) * big_factorial(n);
  return normalize(std::move(nums), total_den);
}

ExactDistribution exact_compose(const ExactDistribution& outer, const ExactDistribution& inner) {
  std::map<Permutation, Rational> out;
  for (const auto& [a, pa] : outer.prob) {
    for (const auto& [b, pb] : inner.prob) {
      Permutation c(a.size());
      for (std::size_t t = 0; t < a.size(); ++t)
        c[t] = a[static_cast<std::size_t>(b[t])];
      out[c] += pa * pb;
    }
  }
  ExactDistribution dist;
  dist.prob = std::move(out);
  return dist;
}

ExactDistribution uniform_distribution(std::size_t n) {
  ExactDistribution dist;
  const Rational u(BigInt(1), big_factorial(n));
  for (const Permutation& pi : all_permutations(n)) dist.prob.emplace(pi, u);
  return dist;
}

Rational tv_exact(const ExactDistribution& dist, std::size_t n) {
  const Rational u(BigInt(1), big_factorial(n));
  Rational tot = 0;
  BigInt support = 0;
  for (const auto& [pi, pr] : dist.prob) {
    tot += abs(pr - u);
    ++support;
  }
  // permutations outside the support each contribute u
  tot += u * Rational(big_factorial(n) - support, 1);
  return tot / 2;
}

Rational tv_exact(const RationalProbVector& p, std::size_t n, std::size_t k_shuffles,
                  const ExactCaps& caps) {
  return tv_exact(exact_forward_distribution(p, n, k_shuffles, caps), n);
}

std::vector<BigInt> eulerian_numbers(std::size_t n) {
  // E[j] = permutations of n with j descents; A(n, r) = E[r-1]
  std::vector<BigInt> e{1};
  for (std::size_t m = 2; m <= n; ++m) {
    std::vector<BigInt> nxt(m);
    for (std::size_t j = 0; j < m; ++j) {
      BigInt v = 0;
      if (j < e.size()) v += e[j] * static_cast<std::int64_t>(j + 1);
      if (j >= 1 && j - 1 < e.size()) v += e[j - 1] * static_cast<std::int64_t>(m - j);
      nxt[j] = std::move(v);
    }
    e = std::move(nxt);
  }
  return e;
}

Rational tv_symmetric_eulerian(std::uint64_t k, std::size_t n, std::size_t k_shuffles) {
  if (n == 0) throw std::invalid_argument("tv_symmetric_eulerian: N must be >= 1");
  if (k < 2) throw std::invalid_argument("tv_symmetric_eulerian: k must be >= 2");
  const BigInt a = big_pow(BigInt(k), k_shuffles);
  const BigInt a_n = big_pow(a, n);
  const BigInt n_fact = big_factorial(n);
  const std::vector<BigInt> eul = eulerian_numbers(n);
  Rational tot = 0;
  for (std::size_t r = 1; r <= n; ++r) {
    const BigInt ways = big_binomial(a + static_cast<std::int64_t>(n) - static_cast<std::int64_t>(r), n);
    // |ways/a^N - 1/N!| with a shared exact denominator
    const Rational diff = Rational(ways, a_n) - Rational(1, n_fact);
    tot += Rational(eul[r - 1], 1) * abs(diff);
  }
  return tot / 2;
}

}  // namespace riffle
