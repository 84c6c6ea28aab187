#pragma once

// Extremal and Barabanov norms.
//
// For a fiber-bunched cocycle with maximal exponent beta the Barabanov norm is
//
//     |||u|||_x = limsup_n e^{-beta n} sup_{v in W^u_loc(u)} |Phi^n(v)|.
//
// For a locally constant cocycle of radius r the local unstable holonomy from x
// to y in W^u_loc(x) is the finite product Phi^r_{T^-r y} (Phi^r_{T^-r x})^{-1},
// so the supremum runs over finitely many forward words and the value depends
// on x only through the context x_{-2r} .. x_0.

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/norms.hpp"

#include <cstdint>
#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace cocycle_lab {

class BarabanovEvaluator {
 public:
  /// Throws NotBunched unless fiber_bunching_check(c, theta) passes.
  BarabanovEvaluator(Cocycle c, double beta, int n_max, NormField base = NormField::euclidean(), double theta = 1.0);

  double operator()(const Point& x, const Vector& u) const;

  const Cocycle& cocycle() const { return c_; }
  double beta() const { return beta_; }
  int depth() const { return n_max_; }
  /// Symbols of x the value depends on: indices [-2r, max(0, r - 1)].
  Word context(const Point& x) const { return x.symbols(-2 * c_.radius(), std::max(1, c_.radius())); }

 private:
  struct Context {
    Matrix pull_back;               // (Phi^r_{T^-r x})^{-1}
    std::vector<Matrix> products;   // e^{-beta n} Phi^{n+r}_{T^-r y}, deduplicated
  };
  const Context& context_data(const Point& x) const;

  Cocycle c_;
  double beta_;
  int n_max_;
  NormField base_;
  mutable std::mutex mu_;
  mutable std::map<Word, std::shared_ptr<const Context>> cache_;
};

/// Finite-depth value of the Barabanov formula (max over n in [n_max/2, n_max]).
double barabanov_eval(const Cocycle& c, double beta, const Point& x, const Vector& u, int n_max,
                      const NormField& base = NormField::euclidean(), double theta = 1.0);

struct ExtremalityReport {
  double sup_log_operator_norm;
  double beta_used;
  double slack;  // sup_log_operator_norm - beta_used
  double tolerance;
  bool extremal;
  Word worst_window;
  Vector worst_direction;
};

ExtremalityReport extremality_check(const Cocycle& c, const NormField& norm, double beta);

struct BarabanovIteration {
  NormField norm;                // polytope (d = 2) or Barabanov evaluator (d >= 3)
  std::vector<double> values;    // g_j = |e_j| on the grid (d = 2)
  double residual;               // sup_j |e^-beta max_i g(A_i e_j) - g_j|
  std::vector<double> residual_history;
  int iterations;
};

/// Value iteration g <- e^-beta max_i g o A_i on `grid` directions (even) of the
/// circle. Throws NotConverged when the residual stalls above 1e-3 for 50 steps.
BarabanovIteration constant_barabanov_iterate(const std::vector<Matrix>& matrices, double beta, int grid, int iters);

/// sup over `directions` grid/random unit vectors of
/// |e^-beta max_i |A_i u| - |u|| / |u| for a constant norm (the classical Barabanov equation).
double barabanov_equation_residual(const std::vector<Matrix>& matrices, const NormField& norm, double beta,
                                   int directions = 720);

/// Fraction of seeded random samples (x, u) for which some v = H^u_{y<-x} u with
/// y in W^u_loc(x) attains |||Phi(v)|||_{Ty} = e^beta |||u|||_x within 1e-6 relative.
double calibration_check(const Cocycle& c, const NormField& norm, double beta, int samples, std::uint64_t seed = 0);

struct ObstructionReport {
  double loop_norm;
  bool obstructed;
  std::vector<double> loop_norms;  // k = 1..5
  Matrix loop;                     // loop holonomy at k = 5
};

/// Requires Phi_p = s O with O orthogonal with non-real eigenvalues (and log s = beta
/// when beta is given); throws NotRotationFixedPoint otherwise.
ObstructionReport riemannian_obstruction(const Cocycle& c, const Point& p, const Point& q,
                                         std::optional<double> beta = std::nullopt);

}  // namespace cocycle_lab
