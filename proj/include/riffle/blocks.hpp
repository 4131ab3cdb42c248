// Prefix intervals, digit profiles, the stable tree partition, the
// lexicographic-interval block decomposition, and the digit-profile
// exponent maximization with its closed form.
#pragma once

#include <cstdint>
#include <vector>

#include "riffle/constants.hpp"
#include "riffle/core.hpp"
#include "riffle/parallel.hpp"

namespace riffle {

// J_x = [t_x, t_x + lambda_x) with t_x = P[y < x lexicographically] and
// lambda_x = prod p_{x[i]}, for y a p-random string of the same length.
struct PrefixInterval {
  DigitString x;
  double t = 0.0;
  double lambda = 1.0;
};

PrefixInterval prefix_interval(const ProbVector& p, const DigitString& x);

// Digit profile of a prefix: leading-0 run b0, leading-(k-1) run bk1, and
// remaining digit counts c_i, all divided by log N.
struct DigitProfile {
  double b0 = 0.0;
  double bk1 = 0.0;
  std::vector<double> c;

  double c_tot() const {
    double s = 0.0;
    for (double v : c) s += v;
    return s;
  }
};

DigitProfile digit_profile(const DigitString& x, std::size_t n, int k);

// The derived exponents; c_ratio = K / log N fixes c_E.
struct ProfileExponents {
  double c_l = 0.0;
  double c_f = 0.0;
  double c_d = 0.0;
  double c_e = 0.0;
  double c_x = 0.0;
};

ProfileExponents profile_exponents(const DigitProfile& profile, const ProbVector& p,
                                   double c_ratio);

struct StablePartition {
  std::vector<DigitString> leaves;  // lexicographic order
  double delta = 0.0;
  std::size_t n = 0;
  std::size_t length = 0;  // K
};

// Depth-first construction: expand x while c_D(x) >= 2*delta, keep the
// children where it first drops below. Never materializes the k^K tree.
StablePartition build_stable_partition(const ProbVector& p, std::size_t n, std::size_t length,
                                       double delta);

// iota(x) = #{i : s_i < x} + 1 and tau(x) = #{i : s_i < x or s_i in B_x},
// 1-based; |I(B_x)| = tau - iota + 1 even when the interval is empty.
std::pair<std::size_t, std::size_t> block_interval(const SortedStringSeq& s, const DigitString& x);

// Blocks(s_a, s_b): at most 2*K*k prefixes whose blocks partition
// {s of length K : s_a < s < s_b} (maximal blocks inside the open interval).
std::vector<DigitString> blocks_decompose(const DigitString& s_a, const DigitString& s_b,
                                          std::size_t length, int k);

struct CxMaxResult {
  double value = 0.0;
  DigitProfile argmax;
};

// Maximize c_X over delta-stable profiles: endpoint families
// (b0,0,0,...)/(0,bk1,0,...) are affine and evaluated at their interval
// endpoints; the (0,0,c) family is searched on the simplex slice by grid
// plus two rounds of local refinement. Deterministic; grid shards can run
// in parallel with a fixed reduction order.
CxMaxResult c_x_max(const ProbVector& p, double c_ratio, double delta,
                    ExecMode mode = ExecMode::OpenMP);

// (3 + theta_p)/2 - 2 C psi_p(2): the delta -> 0 limit of the maximum.
double c_x_closed_form(const ProbVector& p, double c_ratio);

}  // namespace riffle
