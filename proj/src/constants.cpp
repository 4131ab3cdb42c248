#include "riffle/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace riffle {

double phi(const ProbVector& p, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("phi: t must be positive");
  double s = 0.0;
  for (double pi : p.weights()) s += std::pow(pi, t);
  return s;
}

double psi(const ProbVector& p, double t) { return -std::log(phi(p, t)); }

ProbVector tilt(const ProbVector& p, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("tilt: t must be positive");
  const double norm = phi(p, t);
  std::vector<double> w;
  w.reserve(p.weights().size());
  for (double pi : p.weights()) w.push_back(std::pow(pi, t) / norm);
  return ProbVector(std::move(w));
}

double entropy(const std::vector<double>& a) {
  double tot = 0.0;
  for (double v : a) {
    if (v < 0.0) throw std::invalid_argument("entropy: negative entry");
    tot += v;
  }
  if (tot == 0.0) return 0.0;
  double h = 0.0;
  for (double v : a)
    if (v > 0.0) h += v * std::log(tot / v);
  return h / tot;
}

double rate_I(const ProbVector& p, double t) {
  const double norm = phi(p, t);
  double s = 0.0;
  for (double pi : p.weights()) s += std::pow(pi, t) * std::log(1.0 / pi);
  return s / norm;
}

double theta(const ProbVector& p) {
  const double target = phi(p, 2.0) * phi(p, 2.0);
  double lo = 2.0, hi = 64.0;
  if (phi(p, lo) <= target || phi(p, hi) >= target)
    throw std::runtime_error("theta: root not bracketed");  // cannot occur for valid p
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (phi(p, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

CutoffConstants cutoff_constants(const ProbVector& p) {
  CutoffConstants c;
  c.phi2 = phi(p, 2.0);
  c.psi2 = -std::log(c.phi2);
  c.theta = theta(p);
  c.C = (3.0 + c.theta) / (4.0 * c.psi2);
  c.Ctilde = 1.0 / std::log(1.0 / p.p_max());
  c.Cbar = std::max(c.C, c.Ctilde);
  c.Cunder =
      std::max(c.C, std::max(1.0 / std::log(1.0 / p.front()), 1.0 / std::log(1.0 / p.back())));
  return c;
}

namespace {

// C_p - Ctilde_p for p = (q, 1-q); negative near the edges, positive at 1/2.
double coefficient_gap(double q) {
  const ProbVector p({q, 1.0 - q});
  const CutoffConstants c = cutoff_constants(p);
  return c.C - c.Ctilde;
}

double bisect_gap(double lo, double hi) {
  // gap(lo) and gap(hi) must have opposite signs
  double flo = coefficient_gap(lo);
  while (hi - lo > 1e-9) {  // margin below the 1e-6 contract
    const double mid = 0.5 * (lo + hi);
    const double fm = coefficient_gap(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::pair<double, double> crossover_points() {
  const double lower = bisect_gap(0.05, 0.5);
  const double upper = bisect_gap(0.5, 0.95);
  return {lower, upper};
}

std::vector<MixingTableRow> mixing_table(const std::vector<double>& ps,
                                         const std::vector<std::size_t>& deck_sizes) {
  std::vector<MixingTableRow> rows;
  rows.reserve(ps.size());
  for (double q : ps) {
    MixingTableRow row;
    row.p = q;
    row.coefficient = cutoff_constants(ProbVector({q, 1.0 - q})).Cbar;
    for (std::size_t n : deck_sizes)
      row.entries.push_back(row.coefficient * std::log(static_cast<double>(n)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace riffle
