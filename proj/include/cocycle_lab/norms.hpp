#pragma once

// Norm fields on the trivial bundle X x R^d.
//
// Constant variants (Euclidean, max, polytope, ellipse) ignore the base point.
// The Barabanov variant delegates to an evaluator that depends on the point
// through finitely many past symbols.

#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/symbolic.hpp"

#include <memory>
#include <string>

namespace cocycle_lab {

class BarabanovEvaluator;

class NormField {
 public:
  enum class Kind { Euclidean, Max, Polytope, Ellipse, Barabanov };

  static NormField euclidean();
  static NormField max();
  /// Unit ball = convex hull of +-columns of `vertices` (d = 2 only).
  static NormField polytope(const Matrix& vertices);
  /// |u| = sqrt(u^T Q u), Q positive definite.
  static NormField ellipse(const Matrix& q);
  static NormField barabanov(std::shared_ptr<const BarabanovEvaluator> evaluator);

  Kind kind() const { return kind_; }
  std::string name() const;
  bool is_constant() const { return kind_ != Kind::Barabanov; }
  /// Exact operator norms are available (max, polytope).
  bool is_exact_polyhedral() const { return kind_ == Kind::Max || kind_ == Kind::Polytope; }

  /// Constant norms only; throws PreconditionViolated for the Barabanov variant.
  double operator()(const Vector& u) const;
  double operator()(const Point& x, const Vector& u) const;

  /// sup_{u != 0} |A u| / |u| for constant norms.
  double operator_norm(const Matrix& a) const;

  /// The norm s |.|, s > 0.
  NormField scaled(double s) const;
  double scale() const { return scale_; }

  /// Hull vertices in counterclockwise order (polytope) and facet normals n_k with
  /// n_k . v = 1 on facet k.
  const Matrix& vertices() const { return vertices_; }
  const Matrix& normals() const { return normals_; }
  /// Q for the ellipse variant.
  const Matrix& form() const { return form_; }
  const BarabanovEvaluator& evaluator() const;

 private:
  explicit NormField(Kind k) : kind_(k) {}

  double raw(const Vector& u) const;

  Kind kind_;
  double scale_ = 1.0;
  Matrix vertices_, normals_;
  Matrix form_, chol_, chol_inv_;
  std::shared_ptr<const BarabanovEvaluator> evaluator_;
};

/// Counterclockwise convex hull of the columns together with their negatives.
Matrix symmetric_hull(const Matrix& points);

/// Facet normals of a counterclockwise polygon containing the origin strictly.
Matrix facet_normals(const Matrix& hull);

}  // namespace cocycle_lab
