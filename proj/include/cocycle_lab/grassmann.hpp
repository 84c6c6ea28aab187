#pragma once

// Grassmannian metric and related utilities.
//
//     d(V1, V2) = inf |F1 - F2|  over linear F_i : R^p -> V_i with |F_i^{-1}| <= 1.
//
// For lines this is 2 sin(phi / 2), phi the angle between them.

#include "cocycle_lab/linalg.hpp"

#include <cstdint>
#include <random>

namespace cocycle_lab {

/// d x p matrix with orthonormal columns.
using Subspace = Matrix;

Subspace make_subspace(const Matrix& columns);
Subspace random_subspace(int d, int p, std::mt19937_64& rng);
/// Principal angles, ascending.
std::vector<double> principal_angles(const Subspace& v1, const Subspace& v2);

/// Exact for p = 1; for p >= 2 a numerical upper bound seeded at the aligned
/// principal frames (value max_i 2 sin(phi_i / 2)) and refined by local search.
double grassmann_distance(const Subspace& v1, const Subspace& v2);

/// Brute-force evaluation of the definition for lines in the plane: grid over
/// t1, t2 in [1, t_max] and both signs.
double grassmann_distance_bruteforce_lines(const Vector& u1, const Vector& u2, double t_max = 10.0, int steps = 1000);

struct LipschitzReport {
  double max_ratio;
  double bolicity;
  int violations;  // ratios above bol (1 + 1e-6)
};

/// max over random subspace pairs of d(L V1, L V2) / d(V1, V2).
LipschitzReport lipschitz_bolicity_property(const Matrix& l, int trials, int p = 1, std::uint64_t seed = 0);

/// Maximal-area ellipse {v : v^T Q v <= 1} inscribed in the convex hull of the
/// +-columns of `vertices` (2 x k). Throws Degenerate for collinear input.
Matrix john_ellipse(const Matrix& vertices, double tol = 1e-8);

}  // namespace cocycle_lab
