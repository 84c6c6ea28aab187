#include "cocycle_lab/linalg.hpp"

#include "cocycle_lab/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace cocycle_lab {

namespace {

// Closed-form singular values of a 2x2 matrix.
std::pair<double, double> singular_values2(const Matrix& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double e = 0.5 * (a + d), f = 0.5 * (a - d);
  const double g = 0.5 * (c + b), h = 0.5 * (c - b);
  const double q = std::hypot(e, h), r = std::hypot(f, g);
  return {q + r, std::abs(q - r)};
}

}  // namespace

std::vector<double> singular_values(const Matrix& m) {
  if (m.rows() == 2 && m.cols() == 2) {
    auto [s1, s2] = singular_values2(m);
    return {s1, s2};
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double operator_norm2(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 2 && m.cols() == 2) return singular_values2(m).first;
  return singular_values(m).front();
}

double bolicity(const Matrix& m) {
  const auto s = singular_values(m);
  if (s.back() <= 0.0 || s.front() / s.back() > kConditionCap) {
    throw Error(ErrorCode::SingularMatrix, "condition number above cap");
  }
  return s.front() / s.back();
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::vector<int>> index_subsets(int d, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(p);
  for (int i = 0; i < p; ++i) cur[i] = i;
  if (p == 0) return {{}};
  while (true) {
    out.push_back(cur);
    int i = p - 1;
    while (i >= 0 && cur[i] == d - p + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < p; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

Matrix exterior_power(const Matrix& m, int p) {
  const int d = static_cast<int>(m.rows());
  if (p < 1 || p > d) throw Error(ErrorCode::PreconditionViolated, "exterior power degree out of range");
  const auto subsets = index_subsets(d, p);
  const int n = static_cast<int>(subsets.size());
  Matrix out(n, n);
  Matrix minor(p, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) minor(a, b) = m(subsets[i][a], subsets[j][b]);
      out(i, j) = p == 1 ? minor(0, 0) : minor.determinant();
    }
  }
  return out;
}

std::vector<double> eigenvalue_moduli(const Matrix& m) {
  if (m.rows() == 1) return {std::abs(m(0, 0))};
  if (m.rows() == 2) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = 0.25 * tr * tr - det;
    if (disc < 0.0) {
      const double r = std::sqrt(det);
      return {r, r};
    }
    const double big = std::abs(0.5 * tr) + std::sqrt(disc);
    const double small = big == 0.0 ? 0.0 : std::abs(det) / big;
    return {big, small};
  }
  Eigen::EigenSolver<Matrix> es(m, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double spectral_radius(const Matrix& m) { return eigenvalue_moduli(m).front(); }

Matrix checked_inverse(const Matrix& m) {
  const auto s = singular_values(m);
  if (s.back() <= 0.0 || s.front() / s.back() > kConditionCap) {
    throw Error(ErrorCode::SingularMatrix, "condition number above cap");
  }
  if (m.rows() == 2) {
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Matrix inv(2, 2);
    inv << m(1, 1) / det, -m(0, 1) / det, -m(1, 0) / det, m(0, 0) / det;
    return inv;
  }
  return m.partialPivLu().inverse();
}

Matrix rotation2(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

Matrix orthonormal_basis(const Matrix& columns, double tol) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(columns);
  qr.setThreshold(tol);
  const auto rank = qr.rank();
  Matrix q = qr.householderQ() * Matrix::Identity(columns.rows(), rank);
  return q;
}

Matrix orthogonal_complement(const Matrix& q) {
  const auto d = q.rows();
  const auto k = q.cols();
  if (k == 0) return Matrix::Identity(d, d);
  Eigen::HouseholderQR<Matrix> qr(q);
  Matrix full = qr.householderQ() * Matrix::Identity(d, d);
  return full.rightCols(d - k);
}

}  // namespace cocycle_lab
