#include "cocycle_lab/scenarios.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/holonomy.hpp"

#include <cmath>
#include <numbers>

namespace cocycle_lab {

std::vector<Matrix> two_matrix_pair() {
  Matrix a0(2, 2), a1(2, 2);
  a0 << 0, -1, 1, 0;
  a1 << 0.8, -0.1, 0.8, 0.1;
  return {a0, a1};
}

Cocycle two_matrix_cocycle(double lambda) { return Cocycle::one_step(two_matrix_pair(), lambda); }

NoRiemannianResult no_riemannian_example(int budget) {
  const Cocycle c = two_matrix_cocycle();
  NoRiemannianResult r{};
  r.bracket = estimate_beta(c, budget);
  r.max_norm = extremality_check(c, NormField::max(), 0.0);
  r.euclidean = extremality_check(c, NormField::euclidean(), 0.0);
  const Point p = Point::fixed(0);
  const Point q = Point::with_block(0, Word{1}, 0);
  r.loop_k1 = loop_holonomy(c, p, q, 1);
  r.obstruction = riemannian_obstruction(c, p, q, 0.0);
  return r;
}

PerturbedExample perturbed_example(int m) {
  if (m < 2 || m % 4 != 2) throw Error(ErrorCode::PreconditionViolated, "m must be 2 mod 4");
  PerturbedExample ex{};
  ex.m = m;
  ex.matrices = {rotation2(std::numbers::pi / 2 - std::numbers::pi / (4.0 * m)), two_matrix_pair()[1]};
  Matrix power = Matrix::Identity(2, 2);
  for (int i = 0; i < m; ++i) power = ex.matrices[0] * power;
  ex.product_check = power * ex.matrices[1];
  Word w(m + 1, 0);
  w[0] = 1;
  const Cocycle c = Cocycle::one_step(ex.matrices);
  ex.word = make_periodic_word(c.base(), w);
  ex.periodic_exponent = lyapunov_spectrum_periodic(c, ex.word)[0];
  return ex;
}

NonSpaceResult non_space_example(double lambda, double theta, int max_period, int radius) {
  NonSpaceResult r{};
  r.example = NonSpaceExample{lambda, theta};
  const Cocycle c = r.example.truncated(radius);
  r.m1 = mather_set_approx(c, 1, max_period, 1e-6);
  r.m2 = mather_set_approx(c, 2, max_period, 1e-6);
  r.slope = calibrated_cone_slope(r.example, Point::with_block(0, Word{1}, 0));
  std::vector<Point> samples;
  const Point orbit = Point::periodic(Word{0, 0, 1});
  for (int i = 0; i < 3; ++i) samples.push_back(orbit.shifted(i));
  r.splitting = dominated_splitting_test(c, samples, 1, 30);
  return r;
}

std::vector<BallRow> emit_ball(const NormField& norm, int resolution, const std::vector<Matrix>& images,
                               const std::string& label, const Point& x) {
  if (resolution < 1) throw Error(ErrorCode::PreconditionViolated, "resolution must be >= 1");
  std::vector<BallRow> rows;
  std::vector<Vector> boundary;
  for (int k = 0; k < 2 * resolution; ++k) {
    const double a = std::numbers::pi * k / resolution;
    Vector u(2);
    u << std::cos(a), std::sin(a);
    const double rad = 1.0 / norm(x, u);
    rows.push_back({label, a, rad});
    boundary.push_back(rad * u);
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].rows() != 2 || images[i].cols() != 2) throw Error(ErrorCode::Unsupported, "ball tracing is two-dimensional");
    for (const auto& v : boundary) {
      const Vector w = images[i] * v;
      double a = std::atan2(w(1), w(0));
      if (a < 0) a += 2 * std::numbers::pi;
      rows.push_back({label + "_image_" + std::to_string(i), a, w.norm()});
    }
  }
  return rows;
}

}  // namespace cocycle_lab
