#include "riffle/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace riffle {

PrefixInterval prefix_interval(const ProbVector& p, const DigitString& x) {
  PrefixInterval out;
  out.x = x;
  const auto& w = p.weights();
  double below = 0.0;   // t_x accumulated digit by digit
  double prefix = 1.0;  // measure of the digits consumed so far
  for (auto d : x) {
    if (d >= p.k()) throw std::invalid_argument("prefix_interval: digit out of range");
    double lighter = 0.0;
    for (int j = 0; j < d; ++j) lighter += w[static_cast<std::size_t>(j)];
    below += prefix * lighter;
    prefix *= w[d];
  }
  out.t = below;
  out.lambda = prefix;
  return out;
}

DigitProfile digit_profile(const DigitString& x, std::size_t n, int k) {
  if (n < 3) throw std::invalid_argument("digit_profile: N must be >= 3");
  const double log_n = std::log(static_cast<double>(n));
  DigitProfile prof;
  prof.c.assign(static_cast<std::size_t>(k), 0.0);
  std::size_t lead = 0;
  if (!x.empty()) {
    const std::uint8_t first = x[0];
    if (first == 0 || first == k - 1) {
      while (lead < x.size() && x[lead] == first) ++lead;
      (first == 0 ? prof.b0 : prof.bk1) = static_cast<double>(lead) / log_n;
    }
  }
  for (std::size_t i = lead; i < x.size(); ++i) {
    if (x[i] >= k) throw std::invalid_argument("digit_profile: digit out of range");
    prof.c[x[i]] += 1.0 / log_n;
  }
  return prof;
}

ProfileExponents profile_exponents(const DigitProfile& profile, const ProbVector& p,
                                   double c_ratio) {
  const auto& w = p.weights();
  const double l0 = std::log(1.0 / w.front());
  const double lk = std::log(1.0 / w.back());
  double c_log_sum = 0.0;
  for (std::size_t i = 0; i < profile.c.size(); ++i)
    c_log_sum += profile.c[i] * std::log(1.0 / w[i]);
  const double lead = profile.b0 * l0 + profile.bk1 * lk;
  const double c_tot = profile.c_tot();

  ProfileExponents e;
  e.c_l = 1.0 - lead - c_log_sum;
  e.c_f = (1.0 - lead) / 2.0;
  e.c_d = e.c_l - e.c_f;
  e.c_e = (profile.b0 + profile.bk1 + c_tot - c_ratio) * psi(p, 2.0);
  e.c_x = c_tot * entropy(profile.c) + 5.0 * e.c_l - 2.0 * e.c_f + 2.0 * e.c_e;
  return e;
}

namespace {

struct StableDfs {
  const ProbVector* p;
  double log_n;
  double two_delta;
  std::size_t max_length;
  std::vector<double> neg_log_p;  // log(1/p_i)
  DigitString current;
  std::vector<DigitString>* leaves;

  // c_D maintained incrementally along the DFS stack
  void visit(double lead_sum, double c_sum, std::size_t lead_len) {
    const double c_d = (1.0 - lead_sum) / 2.0 - c_sum;
    const bool stable = c_d >= two_delta;
    if (!stable || current.size() == max_length) {
      leaves->push_back(current);
      return;
    }
    const int k = p->k();
    for (int d = 0; d < k; ++d) {
      const double nl = neg_log_p[static_cast<std::size_t>(d)] / log_n;
      const bool extends_lead =
          current.size() == lead_len &&
          ((d == 0 && (current.empty() || current[0] == 0)) ||
           (d == k - 1 && (current.empty() || current[0] == k - 1)));
      current.push_back(static_cast<std::uint8_t>(d));
      if (extends_lead)
        visit(lead_sum + nl, c_sum, lead_len + 1);
      else
        visit(lead_sum, c_sum + nl, lead_len);
      current.pop_back();
    }
  }
};

}  // namespace

StablePartition build_stable_partition(const ProbVector& p, std::size_t n, std::size_t length,
                                       double delta) {
  if (!(delta > 0.0) || delta >= 0.25)
    throw std::invalid_argument("build_stable_partition: delta must lie in (0, 0.25)");
  if (n < 3 || length == 0) throw std::invalid_argument("build_stable_partition: bad N or K");
  StablePartition part;
  part.delta = delta;
  part.n = n;
  part.length = length;

  StableDfs dfs;
  dfs.p = &p;
  dfs.log_n = std::log(static_cast<double>(n));
  dfs.two_delta = 2.0 * delta;
  dfs.max_length = length;
  dfs.neg_log_p.reserve(static_cast<std::size_t>(p.k()));
  for (double w : p.weights()) dfs.neg_log_p.push_back(std::log(1.0 / w));
  dfs.leaves = &part.leaves;
  dfs.visit(0.0, 0.0, 0);
  if (part.leaves.empty() || (part.leaves.size() == 1 && part.leaves.front().empty()))
    throw std::invalid_argument("build_stable_partition: degenerate parameters (empty tree)");
  return part;
}

namespace {

// compare the first min(M, K) digits of a row against x (equal-length bytes)
bool row_prefix_less(const SortedStringSeq& s, std::size_t i, const DigitString& x) {
  return std::memcmp(s.row(i), x.data(), x.size()) < 0;
}

bool row_prefix_leq(const SortedStringSeq& s, std::size_t i, const DigitString& x) {
  return std::memcmp(s.row(i), x.data(), x.size()) <= 0;
}

}  // namespace

std::pair<std::size_t, std::size_t> block_interval(const SortedStringSeq& s,
                                                   const DigitString& x) {
  if (x.size() > s.length())
    throw std::invalid_argument("block_interval: prefix longer than strings");
  if (x.empty()) return {1, s.size()};
  // rows sorted => rows with prefix < x, == x, > x are consecutive
  std::size_t lo = 0, hi = s.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (row_prefix_less(s, mid, x))
      lo = mid + 1;
    else
      hi = mid;
  }
  const std::size_t n_less = lo;
  hi = s.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (row_prefix_leq(s, mid, x))
      lo = mid + 1;
    else
      hi = mid;
  }
  return {n_less + 1, lo};
}

namespace {

struct BlocksDfs {
  const DigitString* s_a;
  const DigitString* s_b;
  std::size_t length;
  int k;
  DigitString current;
  std::vector<DigitString>* out;

  DigitString padded(std::uint8_t fill) const {
    DigitString t = current;
    t.resize(length, fill);
    return t;
  }

  void visit() {
    const DigitString lo = padded(0);
    const DigitString hi = padded(static_cast<std::uint8_t>(k - 1));
    // open interval (s_a, s_b): skip blocks entirely outside
    if (lex_compare(hi, *s_a) <= 0 || lex_compare(lo, *s_b) >= 0) return;
    if (lex_compare(lo, *s_a) > 0 && lex_compare(hi, *s_b) < 0) {
      out->push_back(current);
      return;
    }
    if (current.size() == length) return;  // single string on the boundary
    for (int d = 0; d < k; ++d) {
      current.push_back(static_cast<std::uint8_t>(d));
      visit();
      current.pop_back();
    }
  }
};

}  // namespace

std::vector<DigitString> blocks_decompose(const DigitString& s_a, const DigitString& s_b,
                                          std::size_t length, int k) {
  if (lex_compare(s_a, s_b) >= 0)
    throw std::invalid_argument("blocks_decompose: need s_a < s_b");
  if (s_a.size() > length || s_b.size() > length)
    throw std::invalid_argument("blocks_decompose: endpoint longer than K");
  BlocksDfs dfs;
  dfs.s_a = &s_a;
  dfs.s_b = &s_b;
  dfs.length = length;
  dfs.k = k;
  std::vector<DigitString> result;
  dfs.out = &result;
  dfs.visit();
  return result;
}

namespace {

// c_X on the (0,0,c) family with c = c_tot * chat for a simplex point chat.
// The stability slab pins c_tot between two endpoints; c_X is affine in
// c_tot, so both are tried.
struct FamilyCandidate {
  double value;
  DigitProfile profile;
};

FamilyCandidate eval_c_family(const ProbVector& p, double c_ratio, double delta,
                              const std::vector<double>& chat) {
  double isum = 0.0;
  for (std::size_t i = 0; i < chat.size(); ++i)
    isum += chat[i] * std::log(1.0 / p.weights()[i]);
  FamilyCandidate best{-1e300, {}};
  for (double d : {delta, 2.0 * delta}) {
    const double c_tot = (0.5 - d) / isum;
    DigitProfile prof;
    prof.c.resize(chat.size());
    for (std::size_t i = 0; i < chat.size(); ++i) prof.c[i] = c_tot * chat[i];
    const double v = profile_exponents(prof, p, c_ratio).c_x;
    if (v > best.value) best = {v, std::move(prof)};
  }
  return best;
}

}  // namespace

CxMaxResult c_x_max(const ProbVector& p, double c_ratio, double delta, ExecMode mode) {
  if (!(c_ratio > 0.0)) throw std::invalid_argument("c_x_max: C must be positive");
  if (!(delta > 0.0) || delta >= 0.25)
    throw std::invalid_argument("c_x_max: delta must lie in (0, 0.25)");
  CxMaxResult best;
  best.value = -1e300;

  auto consider = [&](double value, const DigitProfile& prof) {
    if (value > best.value) {
      best.value = value;
      best.argmax = prof;
    }
  };

  // endpoint families (b0, 0, ..., 0) and (0, bk1, 0, ..., 0):
  // c_D = (1 - b*log(1/p))/2 in [delta, 2delta], affine in b
  for (int side = 0; side < 2; ++side) {
    const double lp = std::log(1.0 / (side == 0 ? p.front() : p.back()));
    for (double d : {delta, 2.0 * delta}) {
      DigitProfile prof;
      prof.c.assign(static_cast<std::size_t>(p.k()), 0.0);
      (side == 0 ? prof.b0 : prof.bk1) = (1.0 - 2.0 * d) / lp;  // solves (1 - b*lp)/2 = d
      consider(profile_exponents(prof, p, c_ratio).c_x, prof);
    }
  }

  // (0,0,c) family: search the tilt curve chat = p^s, which carries every
  // interior stationary point of the entropy/linear-constraint problem
  double s_lo = 1e-3, s_hi = 64.0;
  const std::size_t grid = 200;
  for (int round = 0; round < 3; ++round) {
    std::vector<double> values(grid + 1);
    std::vector<DigitProfile> profiles(grid + 1);
    const double step = (s_hi - s_lo) / static_cast<double>(grid);
    for_each_replicate(grid + 1, mode, [&](std::size_t i) {
      const double s = s_lo + step * static_cast<double>(i);
      const FamilyCandidate cand = eval_c_family(p, c_ratio, delta, tilt(p, s).weights());
      values[i] = cand.value;
      profiles[i] = cand.profile;
    });
    std::size_t arg = 0;
    for (std::size_t i = 0; i <= grid; ++i)
      if (values[i] > values[arg]) arg = i;
    consider(values[arg], profiles[arg]);
    // 10x local refinement around the best grid point
    const double center = s_lo + step * static_cast<double>(arg);
    const double width = (s_hi - s_lo) / 10.0;
    s_lo = std::max(1e-6, center - width / 2.0);
    s_hi = center + width / 2.0;
  }
  return best;
}

double c_x_closed_form(const ProbVector& p, double c_ratio) {
  if (!(c_ratio > 0.0)) throw std::invalid_argument("c_x_closed_form: C must be positive");
  return (3.0 + theta(p)) / 2.0 - 2.0 * c_ratio * psi(p, 2.0);
}

}  // namespace riffle
