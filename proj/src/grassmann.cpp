#include "cocycle_lab/grassmann.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/norms.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle_lab {

namespace {

// Raise every singular value of s to at least 1.
Matrix clamp_below(const Matrix& s) {
  Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) sv(i) = std::max(sv(i), 1.0);
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace

Subspace make_subspace(const Matrix& columns) {
  const Matrix q = orthonormal_basis(columns);
  if (q.cols() != columns.cols()) throw Error(ErrorCode::Degenerate, "subspace columns are linearly dependent");
  return q;
}

Subspace random_subspace(int d, int p, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, p);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = g(rng);
  return make_subspace(m);
}

std::vector<double> principal_angles(const Subspace& v1, const Subspace& v2) {
  if (v1.rows() != v2.rows() || v1.cols() != v2.cols()) throw Error(ErrorCode::DimensionMismatch, "subspaces differ in shape");
  Eigen::JacobiSVD<Matrix> svd(v1.transpose() * v2);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) out.push_back(std::acos(std::clamp(svd.singularValues()(i), 0.0, 1.0)));
  std::sort(out.begin(), out.end());
  return out;
}

double grassmann_distance(const Subspace& v1, const Subspace& v2) {
  if (v1.rows() != v2.rows() || v1.cols() != v2.cols()) throw Error(ErrorCode::DimensionMismatch, "subspaces differ in shape");
  const int p = static_cast<int>(v1.cols());
  if (p == 1) {
    // |u1 - u2| = 2 sin(phi / 2) once the signs are aligned.
    const double sign = v1.col(0).dot(v2.col(0)) >= 0 ? 1.0 : -1.0;
    return (v1.col(0) - sign * v2.col(0)).norm();
  }
  Eigen::JacobiSVD<Matrix> svd(v1.transpose() * v2, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix f1 = v1 * svd.matrixU(), f2 = v2 * svd.matrixV();
  double best = operator_norm2(f1 - f2);
  // Local search over F_i = f_i S_i with singular values of S_i at least 1.
  Matrix s1 = Matrix::Identity(p, p), s2 = Matrix::Identity(p, p);
  std::mt19937_64 rng(0x9a55);
  std::normal_distribution<double> g;
  double step = 0.05;
  for (int it = 0; it < 300 && best > 0.0; ++it) {
    Matrix d1(p, p), d2(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        d1(i, j) = g(rng);
        d2(i, j) = g(rng);
      }
    const Matrix c1 = clamp_below(s1 + step * d1), c2 = clamp_below(s2 + step * d2);
    const double v = operator_norm2(f1 * c1 - f2 * c2);
    if (v < best) {
      best = v;
      s1 = c1;
      s2 = c2;
    } else if (it % 20 == 19) {
      step *= 0.5;
    }
  }
  return best;
}

double grassmann_distance_bruteforce_lines(const Vector& u1, const Vector& u2, double t_max, int steps) {
  const Vector a = u1.normalized(), b = u2.normalized();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double t1 = 1.0 + (t_max - 1.0) * i / steps;
    for (int j = 0; j <= steps; ++j) {
      const double t2 = 1.0 + (t_max - 1.0) * j / steps;
      best = std::min({best, (t1 * a - t2 * b).norm(), (t1 * a + t2 * b).norm()});
    }
  }
  return best;
}

LipschitzReport lipschitz_bolicity_property(const Matrix& l, int trials, int p, std::uint64_t seed) {
  const int d = static_cast<int>(l.rows());
  if (p < 1 || p >= d) throw Error(ErrorCode::PreconditionViolated, "need 1 <= p < d");
  LipschitzReport rep{0.0, bolicity(l), 0};
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Subspace a = random_subspace(d, p, rng), b = random_subspace(d, p, rng);
    const double base = grassmann_distance(a, b);
    if (base < 1e-12) continue;
    const double ratio = grassmann_distance(make_subspace(l * a), make_subspace(l * b)) / base;
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > rep.bolicity * (1.0 + 1e-6)) ++rep.violations;
  }
  return rep;
}

Matrix john_ellipse(const Matrix& vertices, double tol) {
  if (vertices.rows() != 2) throw Error(ErrorCode::Unsupported, "John ellipse is implemented for d = 2");
  Matrix hull;
  Matrix normals;
  try {
    hull = symmetric_hull(vertices);
    normals = facet_normals(hull);
  } catch (const Error&) {
    throw Error(ErrorCode::Degenerate, "vertices are collinear");
  }
  // Polar body has vertices at the facet normals. Khachiyan's iteration for the
  // origin-centred minimum-volume enclosing ellipse {y : y^T X^{-1} y <= 2}.
  const Eigen::Index k = normals.cols();
  const double dim = 2.0;
  Vector u = Vector::Constant(k, 1.0 / k);
  Matrix x(2, 2);
  double excess = 0.0;
  for (int it = 0; it < 100000; ++it) {
    x = normals * u.asDiagonal() * normals.transpose();
    const Matrix xi = x.inverse();
    Eigen::Index j = 0;
    double mj = -1.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double m = normals.col(i).dot(xi * normals.col(i));
      if (m > mj) {
        mj = m;
        j = i;
      }
    }
    excess = (mj - dim) / dim;
    if (excess <= tol) break;
    const double step = (mj - dim) / (dim * (mj - 1.0));
    u *= (1.0 - step);
    u(j) += step;
  }
  // All normals satisfy n^T X^{-1} n <= d (1 + excess); the polar of that
  // enclosing ellipse is {v : v^T (d (1 + excess) X) v <= 1}, inscribed in the polygon.
  return dim * (1.0 + std::max(excess, 0.0)) * x;
}

}  // namespace cocycle_lab
