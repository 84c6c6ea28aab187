#pragma once

// Dense linear algebra on small real matrices: singular values, bolicity,
// exterior powers and eigenvalue moduli. Dimensions are tiny (d <= 4 in every
// use we have), so everything is dynamic-size Eigen with closed forms for 2x2.

#include <Eigen/Dense>

#include <vector>

namespace cocycle_lab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Condition-number cap beyond which a matrix is treated as singular.
inline constexpr double kConditionCap = 1e12;

/// Singular values sorted nonincreasing.
std::vector<double> singular_values(const Matrix& m);

/// Euclidean operator norm (largest singular value).
double operator_norm2(const Matrix& m);

/// bol(M) = |M| |M^-1| = s_1 / s_d. Throws SingularMatrix above the condition cap.
double bolicity(const Matrix& m);

/// Matrix of the p-th exterior power in the lexicographic basis of p-subsets.
Matrix exterior_power(const Matrix& m, int p);

/// Moduli of the eigenvalues sorted nonincreasing.
std::vector<double> eigenvalue_moduli(const Matrix& m);

double spectral_radius(const Matrix& m);

/// Inverse with the condition-number guard.
Matrix checked_inverse(const Matrix& m);

Matrix rotation2(double angle);

/// Orthonormal basis (columns) of the column span, rank decided at `tol`.
Matrix orthonormal_basis(const Matrix& columns, double tol = 1e-10);

/// Orthonormal basis of the orthogonal complement of span(q), q orthonormal.
Matrix orthogonal_complement(const Matrix& q);

/// All p-subsets of {0..d-1} in lexicographic order.
std::vector<std::vector<int>> index_subsets(int d, int p);

long long binomial(int n, int k);

}  // namespace cocycle_lab
