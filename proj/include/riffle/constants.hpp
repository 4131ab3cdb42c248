// Closed-form mixing constants for p-shuffles.
//
// phi_p(t) = sum p_i^t, psi_p(t) = -log phi_p(t), theta_p solves
// psi(theta) = 2 psi(2), and the cutoff coefficients follow:
//   C      = (3 + theta) / (4 psi(2))
//   Ctilde = 1 / log(1/p_max)
//   Cbar   = max(C, Ctilde)            (total-variation cutoff at Cbar log N)
//   Cunder = max(C, 1/log(1/p_0), 1/log(1/p_{k-1}))
#pragma once

#include <utility>
#include <vector>

#include "riffle/core.hpp"

namespace riffle {

struct CutoffConstants {
  double phi2 = 0.0;
  double psi2 = 0.0;
  double theta = 0.0;
  double C = 0.0;
  double Ctilde = 0.0;
  double Cbar = 0.0;
  double Cunder = 0.0;
};

double phi(const ProbVector& p, double t);
double psi(const ProbVector& p, double t);
ProbVector tilt(const ProbVector& p, double t);

// Normalized entropy of a tuple of non-negative weights:
// H(a) = sum a_i log(a_tot / a_i) / a_tot, with H = 0 for the all-zero tuple
// and 0 log(.) terms dropped. Invariant under scaling.
double entropy(const std::vector<double>& a);

// I(p, p^t) = sum (p^t)_i log(1/p_i); satisfies H(p^t) = t I - psi(t).
double rate_I(const ProbVector& p, double t);

// Unique root of phi(theta) = phi(2)^2, bisected on [2, 64] to 1e-12.
double theta(const ProbVector& p);

CutoffConstants cutoff_constants(const ProbVector& p);

// The two p values where C_p = Ctilde_p for p = (p, 1-p), each to 1e-6.
std::pair<double, double> crossover_points();

struct MixingTableRow {
  double p;
  double coefficient;           // Cbar for (p, 1-p)
  std::vector<double> entries;  // Cbar * log(N) per deck size
};

std::vector<MixingTableRow> mixing_table(const std::vector<double>& ps,
                                         const std::vector<std::size_t>& deck_sizes);

}  // namespace riffle
