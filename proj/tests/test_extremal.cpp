#include "cocycle_lab/error.hpp"
#include "cocycle_lab/extremal.hpp"
#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/scenarios.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cocycle_lab;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Word random_word(int len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> bit(0, 1);
  Word w(len);
  for (auto& s : w) s = bit(rng);
  return w;
}

void check_norm_axioms(const std::function<double(const Vector&)>& norm, int d, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  int bad = 0;
  for (int k = 0; k < trials; ++k) {
    Vector v(d), w(d);
    for (int i = 0; i < d; ++i) {
      v(i) = g(rng);
      w(i) = g(rng);
    }
    const double t = 3 * g(rng);
    const double nv = norm(v), nw = norm(w);
    if (!(nv > 0)) ++bad;
    if (std::abs(norm(t * v) - std::abs(t) * nv) > 1e-12 * std::abs(t) * nv) ++bad;
    if (norm(v + w) > nv + nw + 1e-9 * (nv + nw)) ++bad;
  }
  CHECK(bad == 0);
  CHECK(norm(Vector::Zero(d)) == 0.0);
}

}  // namespace

TEST_CASE("norm axioms for every norm kind") {
  const auto as_fn = [](const NormField& n) { return [n](const Vector& u) { return n(u); }; };
  check_norm_axioms(as_fn(NormField::euclidean()), 3, 10000, 0);
  check_norm_axioms(as_fn(NormField::max()), 3, 10000, 1);
  Matrix verts(2, 5);
  verts << 1, 0.3, -0.5, 0.2, 0.9, 0.1, 1, 0.7, -1.2, 0.5;
  check_norm_axioms(as_fn(NormField::polytope(verts)), 2, 10000, 2);
  Matrix q(3, 3);
  q << 2, 0.3, 0.1, 0.3, 1, -0.2, 0.1, -0.2, 0.5;
  check_norm_axioms(as_fn(NormField::ellipse(q)), 3, 10000, 3);
  check_norm_axioms(as_fn(NormField::max().scaled(2.5)), 2, 10000, 4);
  const auto ev = std::make_shared<BarabanovEvaluator>(two_matrix_cocycle(2.2), 0.0, 8);
  const NormField bn = NormField::barabanov(ev);
  const Point x = Point::periodic(Word{0, 1, 1});
  check_norm_axioms([&](const Vector& u) { return bn(x, u); }, 2, 10000, 5);
  CHECK_THROWS_AS(bn(vec2(1, 0)), Error);
  const auto it = constant_barabanov_iterate(two_matrix_pair(), 0.0, 720, 500);
  check_norm_axioms(as_fn(it.norm), 2, 10000, 6);
}

TEST_CASE("operator norms") {
  const auto pair = two_matrix_pair();
  CHECK(NormField::max().operator_norm(pair[0]) == 1.0);
  CHECK(NormField::max().operator_norm(pair[1]) == doctest::Approx(0.9).epsilon(1e-15));
  Matrix sq(2, 2);
  sq << 1, 1, 1, -1;
  CHECK(NormField::polytope(sq).operator_norm(pair[1]) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(NormField::ellipse(Matrix::Identity(2, 2)).operator_norm(pair[1]) == doctest::Approx(0.8 * std::sqrt(2.0)));
}

TEST_CASE("barabanov_eval examples") {
  const Cocycle rot = Cocycle::one_step({rotation2(0.7), rotation2(-1.9)}, 1.0);
  const Vector u = vec2(0.6, -0.3);
  for (int depth : {2, 5, 9}) CHECK(barabanov_eval(rot, 0.0, Point::periodic(Word{0, 1}), u, depth) == doctest::Approx(u.norm()).epsilon(1e-14));
  const Cocycle c = two_matrix_cocycle(2.2);
  const double e = barabanov_eval(c, 0.0, Point::fixed(0), vec2(1, 0), 12);
  CHECK(e >= 1.0 - 1e-12);
  CHECK(e <= std::sqrt(2.0) * 0.8 * std::sqrt(2.0) + 1e-12);
  const double m = barabanov_eval(c, 0.0, Point::fixed(0), vec2(1, 0), 12, NormField::max());
  CHECK(std::abs(m - 1.0) <= 0.05);
  CHECK_THROWS_AS(BarabanovEvaluator(two_matrix_cocycle(1.0), 0.0, 6), Error);
}

TEST_CASE("depth diagnostic") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::map<Word, Matrix> t;
  for (int code = 0; code < 8; ++code) {
    Matrix m = rotation2(g(rng));
    m(0, 0) *= 1.1;
    t.emplace(Word{(code >> 2) & 1, (code >> 1) & 1, code & 1}, m);
  }
  const Cocycle c(Sft::full_shift(2), 1, t);
  const double beta = estimate_beta(c, 10).midpoint();
  const Point x = Point::periodic(Word{0, 1, 1, 0, 1});
  const Vector u = vec2(0.3, 1.0);
  const double a = barabanov_eval(c, beta, x, u, 3), b = barabanov_eval(c, beta, x, u, 6), d = barabanov_eval(c, beta, x, u, 12);
  CHECK(std::isfinite(a));
  CHECK(std::isfinite(d));
  CHECK(std::abs(d - b) <= std::abs(b - a) + 0.05 * b);
}

TEST_CASE("past independence for one-step cocycles") {
  const Cocycle c = two_matrix_cocycle(2.2);
  const auto ev = std::make_shared<BarabanovEvaluator>(c, 0.0, 10);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const Word fut = random_word(4, rng);
    // same symbols at n >= 0, independent pasts
    const Point x2(random_word(3, rng), random_word(4, rng), fut, 4);
    const Point y2(random_word(2, rng), random_word(4, rng), fut, 4);
    const Vector u = vec2(std::cos(t), std::sin(t));
    CHECK((*ev)(x2, u) == (*ev)(y2, u));
  }
}

TEST_CASE("extremality examples") {
  const Cocycle c = two_matrix_cocycle();
  const auto mx = extremality_check(c, NormField::max(), 0.0);
  CHECK(mx.extremal);
  CHECK(std::abs(mx.slack) <= 1e-12);
  const auto eu = extremality_check(c, NormField::euclidean(), 0.0);
  CHECK_FALSE(eu.extremal);
  CHECK(std::abs(eu.slack - std::log(0.8 * std::sqrt(2.0))) <= 1e-10);
  CHECK(extremality_check(c, NormField::euclidean().scaled(7.0), 0.0).slack == doctest::Approx(eu.slack).epsilon(1e-14));
  CHECK(extremality_check(c, NormField::max().scaled(0.1), 0.0).slack == doctest::Approx(mx.slack).epsilon(1e-14));
  const Cocycle bunched = two_matrix_cocycle(2.2);
  const auto ev = std::make_shared<BarabanovEvaluator>(bunched, 0.0, 14);
  CHECK(extremality_check(bunched, NormField::barabanov(ev), 0.0).slack <= 1e-2);
}

TEST_CASE("value iteration") {
  const auto pair = two_matrix_pair();
  const auto it = constant_barabanov_iterate(pair, 0.0, 720, 500);
  CHECK(it.residual < 1e-3);
  for (std::size_t i = 3; i < it.residual_history.size(); ++i) CHECK(it.residual_history[i] <= it.residual_history[i - 1] + 1e-12);
  double lo = 1e300, hi = 0.0;
  for (int k = 0; k < 3600; ++k) {
    const Vector u = vec2(std::cos(k * M_PI / 1800), std::sin(k * M_PI / 1800));
    const double q = it.norm(u) / u.cwiseAbs().maxCoeff();
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  CHECK(hi / lo <= 0.8 * std::sqrt(2.0) * std::sqrt(2.0));
  CHECK(barabanov_equation_residual(pair, it.norm, 0.0) <= 1e-3);
  CHECK(barabanov_equation_residual(pair, NormField::max(), 0.0) == 0.0);

  // grid-aligned rotation: exact; generic angle: within the chord interpolation error
  const auto quarter = constant_barabanov_iterate({pair[0]}, 0.0, 720, 500);
  CHECK(quarter.residual < 1e-6);
  const auto rot = constant_barabanov_iterate({rotation2(1.0)}, 0.0, 720, 500);
  CHECK(rot.residual < 1e-4);
  for (const auto* it2 : {&quarter, &rot}) {
    for (int k = 0; k < 50; ++k) {
      const Vector u = vec2(std::cos(0.37 * k), std::sin(0.37 * k));
      CHECK(it2->norm(u) == doctest::Approx(it2->norm(vec2(1, 0))).epsilon(1e-4));
    }
  }
  const auto fixed = constant_barabanov_iterate({2.0 * Matrix::Identity(2, 2)}, std::log(2.0), 64, 10);
  CHECK(fixed.iterations == 1);
  CHECK(fixed.residual <= 1e-15);

  Matrix o3 = Matrix::Identity(3, 3);
  o3.topLeftCorner(2, 2) = rotation2(0.4);
  const auto three = constant_barabanov_iterate({o3}, 0.0, 16, 6);
  CHECK(three.residual <= 1e-12);
}

TEST_CASE("calibration") {
  const Cocycle rot = Cocycle::one_step({rotation2(0.9)}, 1.0);
  CHECK(calibration_check(rot, NormField::euclidean(), 0.0, 50) == 1.0);
  Matrix q = Matrix::Identity(2, 2);
  q(1, 1) = 4.0;
  CHECK(calibration_check(rot, NormField::ellipse(q), 0.0, 50) < 1.0);
  // A constant extremal norm solves the Barabanov equation, but W^u_loc keeps x_0, so
  // calibration fails wherever x_0 = 1 (|A1|_max = 0.9).
  CHECK(barabanov_equation_residual(two_matrix_pair(), NormField::max(), 0.0) == 0.0);
  CHECK(calibration_check(two_matrix_cocycle(), NormField::max(), 0.0, 50) < 1.0);
  const Cocycle bunched = two_matrix_cocycle(2.2);
  const auto ev = std::make_shared<BarabanovEvaluator>(bunched, 0.0, 10, NormField::max());
  CHECK(calibration_check(bunched, NormField::barabanov(ev), 0.0, 50) == 1.0);
}

TEST_CASE("Riemannian obstruction") {
  const Point p = Point::fixed(0);
  const Point q = Point::with_block(0, Word{1}, 0);
  const auto rep = riemannian_obstruction(two_matrix_cocycle(), p, q);
  CHECK(rep.obstructed);
  CHECK(std::abs(rep.loop_norm - 0.8 * std::sqrt(2.0)) <= 1e-10);
  const auto pair = two_matrix_pair();
  const auto constant = riemannian_obstruction(Cocycle::one_step({pair[0], pair[0]}), p, q);
  CHECK_FALSE(constant.obstructed);
  CHECK(constant.loop_norm == doctest::Approx(1.0).epsilon(1e-14));
  const auto rr = riemannian_obstruction(Cocycle::one_step({pair[0], rotation2(0.3)}), p, q);
  CHECK_FALSE(rr.obstructed);
  CHECK(rr.loop_norm == doctest::Approx(1.0).epsilon(1e-14));
  Matrix d = Matrix::Identity(2, 2);
  d(0, 0) = 2;
  try {
    riemannian_obstruction(Cocycle::one_step({d, pair[1]}), p, q);
    FAIL("expected NotRotationFixedPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotRotationFixedPoint);
  }
}

TEST_CASE("unit balls") {
  const auto sq = emit_ball(NormField::max(), 4);
  REQUIRE(sq.size() == 8);
  for (std::size_t k = 0; k < sq.size(); ++k) {
    CHECK(sq[k].radius == doctest::Approx(k % 2 ? std::sqrt(2.0) : 1.0).epsilon(1e-14));
  }
  for (const auto& r : emit_ball(NormField::euclidean(), 90)) CHECK(r.radius == doctest::Approx(1.0));
  const auto with_images = emit_ball(NormField::max(), 8, two_matrix_pair(), "max");
  CHECK(with_images.size() == 3 * 16);
  CHECK(with_images.back().curve == "max_image_1");
}
