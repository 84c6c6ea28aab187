#pragma once

// Stable and unstable holonomies by the limit formulas
//
//     H^s_{y<-x} = lim_{n -> +inf} (Phi^n_y)^{-1} Phi^n_x
//     H^u_{y<-x} = lim_{n -> +inf} Phi^n_{T^-n y} (Phi^n_{T^-n x})^{-1}
//
// For a locally constant cocycle the sequence is eventually constant once the
// windows along the two orbits coincide; that index is known symbolically.

#include "cocycle_lab/cocycle.hpp"

#include <vector>

namespace cocycle_lab {

struct HolonomyResult {
  Matrix matrix;
  int iterations_used = 0;
  double last_increment_norm = 0.0;
  bool certified = false;
  std::vector<double> increments;  // |H_{n+1} - H_n| for n = 0, 1, ...
};

inline constexpr double kHolonomyTol = 1e-10;
inline constexpr int kHolonomyMaxSteps = 200;

/// Requires y in W^s(x) (NotOnStableSet). Throws Diverging when the increments
/// grow over 5 consecutive steps. Certification also requires fiber bunching at theta.
HolonomyResult stable_holonomy(const Cocycle& c, const Point& x, const Point& y, double tol = kHolonomyTol,
                               int n_max = kHolonomyMaxSteps, double theta = 1.0);
HolonomyResult unstable_holonomy(const Cocycle& c, const Point& x, const Point& y, double tol = kHolonomyTol,
                                 int n_max = kHolonomyMaxSteps, double theta = 1.0);

/// Phi_p^{-k} H^s_{p<-T^k q} Phi^{2k}_{T^-k q} H^u_{T^-k q<-p} Phi_p^{-k} for a fixed
/// point p and q homoclinic to p. Throws NotHomoclinic.
Matrix loop_holonomy(const Cocycle& c, const Point& p, const Point& q, int k = 1);

/// Largest n with x_n != y_n (resp. smallest); nullopt when x = y.
std::optional<long> last_difference(const Point& x, const Point& y);
std::optional<long> earliest_difference(const Point& x, const Point& y);

}  // namespace cocycle_lab
