#include "cocycle_lab/holonomy.hpp"

#include "cocycle_lab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cocycle_lab {

namespace {

struct Range {
  long lo, hi;
};

Range comparison_range(const Point& x, const Point& y) {
  const long hi = std::max(x.future_start(), y.future_start()) +
                  static_cast<long>(std::lcm(x.right_period().size(), y.right_period().size()));
  const long lo = std::min(x.past_start(), y.past_start()) -
                  static_cast<long>(std::lcm(x.left_period().size(), y.left_period().size()));
  return {lo, hi};
}

bool nonincreasing_tail(const std::vector<double>& inc, std::size_t len) {
  const std::size_t n = inc.size();
  const std::size_t from = n > len ? n - len : 0;
  for (std::size_t i = from + 1; i < n; ++i)
    if (inc[i] > inc[i - 1]) return false;
  return true;
}

bool growing_tail(const std::vector<double>& inc, std::size_t steps, double tol) {
  if (inc.size() < steps + 1 || inc.back() <= tol) return false;
  for (std::size_t i = inc.size() - steps; i < inc.size(); ++i)
    if (!(inc[i] > inc[i - 1])) return false;
  return true;
}

// Shared driver: H_{m+1} = H_m + L_m (G_m - I) R_m, where the step callback
// supplies the two window codes at step m and updates L_m, R_m.
//   stable:   L = (Phi^m_y)^{-1},       G = F(T^m y)^{-1} F(T^m x),  R = Phi^m_x
//   unstable: L = Phi^m_{T^-m y},       G = F(T^-m-1 y) F(T^-m-1 x)^{-1},  R = (Phi^m_{T^-m x})^{-1}
template <class Step>
HolonomyResult drive(const Cocycle& c, long n_exact, double tol, int n_max, double theta, Step&& step) {
  const int d = c.dimension();
  HolonomyResult res;
  res.matrix = Matrix::Identity(d, d);
  Matrix left = Matrix::Identity(d, d), right = Matrix::Identity(d, d);
  const bool bunched = fiber_bunching_check(c, theta).fiber_bunched;
  for (int m = 0; m < n_max; ++m) {
    Matrix delta;
    const bool differs = step(m, left, right, delta);  // fills delta, then advances left/right to m + 1
    double inc = 0.0;
    if (differs) {
      res.matrix += delta;
      inc = delta.norm();
    }
    res.increments.push_back(inc);
    res.iterations_used = m + 1;
    res.last_increment_norm = inc;
    if (growing_tail(res.increments, 5, tol)) {
      throw Error(ErrorCode::Diverging, "holonomy increments grew over 5 consecutive steps (last " + std::to_string(inc) + ")");
    }
    if (inc < tol && m + 1 >= n_exact && nonincreasing_tail(res.increments, 5)) {
      res.certified = bunched;
      return res;
    }
  }
  res.certified = false;
  return res;
}

}  // namespace

std::optional<long> last_difference(const Point& x, const Point& y) {
  const auto r = comparison_range(x, y);
  for (long n = r.hi; n >= r.lo; --n)
    if (x[n] != y[n]) return n;
  return std::nullopt;
}

std::optional<long> earliest_difference(const Point& x, const Point& y) {
  const auto r = comparison_range(x, y);
  for (long n = r.lo; n <= r.hi; ++n)
    if (x[n] != y[n]) return n;
  return std::nullopt;
}

HolonomyResult stable_holonomy(const Cocycle& c, const Point& x, const Point& y, double tol, int n_max, double theta) {
  c.base().validate(x);
  c.base().validate(y);
  if (!on_stable_set(x, y)) throw Error(ErrorCode::NotOnStableSet, "y is not on the stable set of x");
  const auto k = last_difference(x, y);
  if (!k) {
    HolonomyResult res;
    res.matrix = Matrix::Identity(c.dimension(), c.dimension());
    res.certified = true;
    return res;
  }
  const int r = c.radius();
  const long n_exact = std::max(0L, *k + r + 1);
  return drive(c, n_exact, tol, n_max, theta, [&](int m, Matrix& left, Matrix& right, Matrix& delta) {
    const Word wx = x.symbols(m - r, m + r + 1), wy = y.symbols(m - r, m + r + 1);
    const bool differs = wx != wy;
    const Matrix& fx = c.matrix(wx);
    const Matrix& fy_inv = c.inverse(wy);
    if (differs) delta = left * (fy_inv * fx - Matrix::Identity(fx.rows(), fx.cols())) * right;
    left = left * fy_inv;
    right = fx * right;
    return differs;
  });
}

HolonomyResult unstable_holonomy(const Cocycle& c, const Point& x, const Point& y, double tol, int n_max, double theta) {
  c.base().validate(x);
  c.base().validate(y);
  if (!on_unstable_set(x, y)) throw Error(ErrorCode::NotOnUnstableSet, "y is not on the unstable set of x");
  const auto k = earliest_difference(x, y);
  if (!k) {
    HolonomyResult res;
    res.matrix = Matrix::Identity(c.dimension(), c.dimension());
    res.certified = true;
    return res;
  }
  const int r = c.radius();
  const long n_exact = std::max(0L, r - *k);
  return drive(c, n_exact, tol, n_max, theta, [&](int m, Matrix& left, Matrix& right, Matrix& delta) {
    const long at = -(m + 1);
    const Word wx = x.symbols(at - r, at + r + 1), wy = y.symbols(at - r, at + r + 1);
    const bool differs = wx != wy;
    const Matrix& gy = c.matrix(wy);
    const Matrix& gx_inv = c.inverse(wx);
    if (differs) delta = left * (gy * gx_inv - Matrix::Identity(gy.rows(), gy.cols())) * right;
    left = left * gy;
    right = gx_inv * right;
    return differs;
  });
}

Matrix loop_holonomy(const Cocycle& c, const Point& p, const Point& q, int k) {
  if (k < 1) throw Error(ErrorCode::PreconditionViolated, "k must be >= 1");
  c.base().validate(p);
  c.base().validate(q);
  if (p != p.shifted(1)) throw Error(ErrorCode::PreconditionViolated, "p must be a fixed point");
  if (q == p || !on_stable_set(p, q) || !on_unstable_set(p, q)) {
    throw Error(ErrorCode::NotHomoclinic, "q must be homoclinic to p and distinct from it");
  }
  const Matrix back = cocycle_product(c, p, -k);
  const Matrix hs = stable_holonomy(c, q.shifted(k), p).matrix;
  const Matrix hu = unstable_holonomy(c, p, q.shifted(-k)).matrix;
  const Matrix excursion = cocycle_product(c, q.shifted(-k), 2L * k);
  return back * hs * excursion * hu * back;
}

}  // namespace cocycle_lab
