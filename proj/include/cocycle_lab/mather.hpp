#pragma once

// Mather sets through their periodic skeleton, calibrated vectors, dominated
// splittings from singular-value gaps, and the diagonal cocycle
// diag(1, e^{-f}) with f(y) = d(y, 0^inf)^theta whose calibrated cones are not
// subspaces.

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/norms.hpp"
#include "cocycle_lab/spectral.hpp"

#include <optional>
#include <vector>

namespace cocycle_lab {

struct MatherApprox {
  int index_p;
  std::vector<PeriodicWord> orbits;
  std::vector<std::vector<double>> spectra;  // per orbit, chi_1 >= ... >= chi_d
  double tol;
  double beta_used;
  double beta_wedge;  // beta_lower of the p-th exterior power
};

/// Periodic orbits up to max_period whose top p exponents are within tol of
/// beta_lower; throws Empty when none qualifies.
MatherApprox mather_set_approx(const Cocycle& c, int p, int max_period, double tol);

struct SplittingReport {
  int p;
  double tau;
  double c;  // exp(intercept)
  double r_squared;
  std::vector<double> max_log_ratio;  // per n = 1..n_max, max over samples of log(s_{p+1}/s_p)
  std::vector<Point> points;
  std::vector<Matrix> subspaces;  // d x p orthonormal, one per sample
};

struct SplittingFit {
  double tau, c, r_squared;
  bool below_line;  // all data <= fit + 0.5
  std::vector<double> max_log_ratio;
};

/// Raw gap data and the least-squares line, regardless of the verdict.
SplittingFit splitting_fit(const Cocycle& c, const std::vector<Point>& samples, int p, int n_max);

/// Reports a splitting when tau > 0, r^2 >= 0.9 and all data lie below the fitted
/// line + 0.5; nullopt otherwise.
std::optional<SplittingReport> dominated_splitting_test(const Cocycle& c, const std::vector<Point>& samples, int p, int n_max);

/// Top-p left singular space of Phi^n_{T^-n x}.
Matrix dominating_subspace(const Cocycle& c, const Point& x, int p, int n);

/// |||Phi^n u||| = e^{n beta} |||u||| within 1e-6 relative for all |n| <= n_window.
bool calibrated_check(const Cocycle& c, const NormField& norm, double beta, const Point& x, const Vector& u, int n_window);

struct SubordinationReport {
  std::vector<PeriodicWord> passed;
  std::vector<PeriodicWord> violations;      // chi_1 off beta by more than tol
  std::vector<PeriodicWord> outside_support; // blocks not found in the Mather skeleton
  std::vector<double> exponents;             // chi_1 for every extra orbit, in input order
  bool ok() const { return violations.empty() && outside_support.empty(); }
};

SubordinationReport subordination_check(const Cocycle& c, const MatherApprox& mather,
                                        const std::vector<PeriodicWord>& extra_orbits, int block_length = 1);

/// Full 2-shift with fixed point x0 = 0^inf and f(y) = e^{-lambda theta k(y)}, k(y)
/// the smallest |n| with y_n != 0 (f(x0) = 0).
struct NonSpaceExample {
  double lambda = 1.0;
  double theta = 1.0;

  Sft base() const { return Sft::full_shift(2, lambda); }
  double f(const Point& y) const;
  /// diag(1, e^{-f}) with f evaluated on windows of radius r (f = 0 on the zero window).
  Cocycle truncated(int r = 4) const;
};

struct ConeSlope {
  double slope;            // exp of the full sum (tail summed in closed form)
  double truncated_slope;  // exp of the first n_terms terms
  double tail_bound;       // sum of the omitted terms
};

/// exp(sum_{n >= 1} f(T^-n x)) for x in W^u(x0); throws NotOnUnstableSet.
ConeSlope calibrated_cone_slope(const NonSpaceExample& ex, const Point& x, int n_terms = 60);

}  // namespace cocycle_lab
