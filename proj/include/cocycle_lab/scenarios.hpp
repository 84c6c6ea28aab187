#pragma once

// Worked examples: the rotation/shear pair (A0, A1), its perturbation that
// unlocks the fixed point, and the diagonal cocycle with non-subspace
// calibrated cones. Also the unit-ball tracer used for plotting.

#include "cocycle_lab/extremal.hpp"
#include "cocycle_lab/mather.hpp"
#include "cocycle_lab/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cocycle_lab {

/// A0 = rotation by pi/2, A1 = [[0.8, -0.1], [0.8, 0.1]].
std::vector<Matrix> two_matrix_pair();
Cocycle two_matrix_cocycle(double lambda = 1.0);

struct NoRiemannianResult {
  BetaBracket bracket;
  ExtremalityReport max_norm;
  ExtremalityReport euclidean;
  Matrix loop_k1;
  ObstructionReport obstruction;
};

NoRiemannianResult no_riemannian_example(int budget = 16);

struct PerturbedExample {
  int m;
  std::vector<Matrix> matrices;  // rotation by pi/2 - pi/(4m), A1
  Matrix product_check;          // A0~^m A1
  PeriodicWord word;             // 1 0^m
  double periodic_exponent;
};

/// Requires m = 2 (mod 4).
PerturbedExample perturbed_example(int m);

struct NonSpaceResult {
  NonSpaceExample example;
  MatherApprox m1, m2;
  ConeSlope slope;  // at the point with a single 1 at index 0
  std::optional<SplittingReport> splitting;
};

NonSpaceResult non_space_example(double lambda = 1.0, double theta = 1.0, int max_period = 6, int radius = 4);

struct BallRow {
  std::string curve;
  double angle;
  double radius;
};

/// Boundary of the unit ball at x (angles pi k / resolution, k < 2 resolution),
/// followed by its image under each matrix, labelled `label`, `label_image_i`.
std::vector<BallRow> emit_ball(const NormField& norm, int resolution, const std::vector<Matrix>& images = {},
                               const std::string& label = "ball", const Point& x = Point::fixed(0));

}  // namespace cocycle_lab
