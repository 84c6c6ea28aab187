#include "cocycle_lab/norms.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/extremal.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle_lab {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Not a strict left turn, up to rounding relative to the edge lengths.
bool drop_middle(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return cross(o, a, b) <= 1e-12 * (a - o).norm() * (b - o).norm();
}

}  // namespace

Matrix symmetric_hull(const Matrix& points) {
  if (points.rows() != 2) throw Error(ErrorCode::Unsupported, "polytope norms are implemented for d = 2 only");
  std::vector<Eigen::Vector2d> pts;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    pts.emplace_back(points(0, j), points(1, j));
    pts.emplace_back(-points(0, j), -points(1, j));
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  // Andrew's monotone chain; collinear and coincident points are dropped.
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && drop_middle(hull[k - 2], hull[k - 1], p)) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && drop_middle(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);
  Matrix out(2, static_cast<Eigen::Index>(hull.size()));
  for (std::size_t j = 0; j < hull.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = hull[j];
  return out;
}

Matrix facet_normals(const Matrix& hull) {
  const Eigen::Index m = hull.cols();
  if (m < 3) throw Error(ErrorCode::Degenerate, "polygon has fewer than three vertices");
  Matrix n(2, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Vector2d a = hull.col(j), b = hull.col((j + 1) % m);
    const double area = a.x() * b.y() - a.y() * b.x();
    if (!(area > 1e-14)) throw Error(ErrorCode::Degenerate, "polygon does not contain the origin strictly");
    n(0, j) = (b.y() - a.y()) / area;
    n(1, j) = (a.x() - b.x()) / area;
  }
  return n;
}

NormField NormField::euclidean() { return NormField(Kind::Euclidean); }
NormField NormField::max() { return NormField(Kind::Max); }

NormField NormField::polytope(const Matrix& vertices) {
  NormField f(Kind::Polytope);
  f.vertices_ = symmetric_hull(vertices);
  f.normals_ = facet_normals(f.vertices_);
  return f;
}

NormField NormField::ellipse(const Matrix& q) {
  if (q.rows() != q.cols()) throw Error(ErrorCode::DimensionMismatch, "ellipse form must be square");
  if ((q - q.transpose()).norm() > 1e-12 * std::max(1.0, q.norm())) {
    throw Error(ErrorCode::PreconditionViolated, "ellipse form must be symmetric");
  }
  Eigen::LLT<Matrix> llt(q);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::PreconditionViolated, "ellipse form must be positive definite");
  NormField f(Kind::Ellipse);
  f.form_ = q;
  f.chol_ = llt.matrixU();  // Q = U^T U, |u| = |U u|
  f.chol_inv_ = checked_inverse(f.chol_);
  return f;
}

NormField NormField::barabanov(std::shared_ptr<const BarabanovEvaluator> evaluator) {
  if (!evaluator) throw Error(ErrorCode::PreconditionViolated, "null evaluator");
  NormField f(Kind::Barabanov);
  f.evaluator_ = std::move(evaluator);
  return f;
}

std::string NormField::name() const {
  switch (kind_) {
    case Kind::Euclidean: return "euclidean";
    case Kind::Max: return "max";
    case Kind::Polytope: return "polytope";
    case Kind::Ellipse: return "ellipse";
    case Kind::Barabanov: return "barabanov";
  }
  return "unknown";
}

const BarabanovEvaluator& NormField::evaluator() const {
  if (!evaluator_) throw Error(ErrorCode::PreconditionViolated, "not a Barabanov norm field");
  return *evaluator_;
}

double NormField::raw(const Vector& u) const {
  switch (kind_) {
    case Kind::Euclidean: return u.norm();
    case Kind::Max: return u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
    case Kind::Polytope: {
      if (u.size() != 2) throw Error(ErrorCode::DimensionMismatch, "polytope norm is two-dimensional");
      return (normals_.transpose() * u).maxCoeff();
    }
    case Kind::Ellipse: {
      if (u.size() != chol_.cols()) throw Error(ErrorCode::DimensionMismatch, "vector size does not match the ellipse");
      return (chol_ * u).norm();
    }
    case Kind::Barabanov: break;
  }
  throw Error(ErrorCode::PreconditionViolated, "Barabanov norm needs a base point");
}

double NormField::operator()(const Vector& u) const { return scale_ * raw(u); }

double NormField::operator()(const Point& x, const Vector& u) const {
  if (kind_ == Kind::Barabanov) return scale_ * (*evaluator_)(x, u);
  return scale_ * raw(u);
}

double NormField::operator_norm(const Matrix& a) const {
  switch (kind_) {
    case Kind::Euclidean: return operator_norm2(a);
    case Kind::Max: return a.cwiseAbs().rowwise().sum().maxCoeff();
    case Kind::Polytope: {
      double best = 0.0;
      for (Eigen::Index j = 0; j < vertices_.cols(); ++j) best = std::max(best, raw(a * vertices_.col(j)));
      return best;
    }
    case Kind::Ellipse: return operator_norm2(chol_ * a * chol_inv_);
    case Kind::Barabanov: break;
  }
  throw Error(ErrorCode::PreconditionViolated, "operator norm needs a constant norm");
}

NormField NormField::scaled(double s) const {
  if (!(s > 0.0)) throw Error(ErrorCode::PreconditionViolated, "scale must be > 0");
  NormField f = *this;
  f.scale_ *= s;
  return f;
}

}  // namespace cocycle_lab
