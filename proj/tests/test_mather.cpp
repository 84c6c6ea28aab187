#include "cocycle_lab/error.hpp"
#include "cocycle_lab/grassmann.hpp"
#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/mather.hpp"
#include "cocycle_lab/scenarios.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cocycle_lab;

namespace {

std::vector<std::string> names(const std::vector<PeriodicWord>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(w.to_string());
  return out;
}

Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  return m;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("Mather sets of the rotation/shear pair") {
  const Cocycle c = two_matrix_cocycle();
  CHECK(names(mather_set_approx(c, 1, 8, 1e-9).orbits) == std::vector<std::string>{"0"});
  CHECK(names(mather_set_approx(c, 2, 8, 1e-9).orbits) == std::vector<std::string>{"0"});
}

TEST_CASE("Mather sets of the diagonal example") {
  const NonSpaceExample ex{};
  const Cocycle c = ex.truncated();
  const auto m1 = mather_set_approx(c, 1, 6, 1e-6);
  CHECK(m1.orbits.size() == enumerate_periodic_words(c.base(), 6).size());
  CHECK(names(mather_set_approx(c, 2, 6, 1e-6).orbits) == std::vector<std::string>{"0"});
}

TEST_CASE("exterior power consistency of Mather sets") {
  std::mt19937_64 rng(0);
  int nonempty = 0;
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 2;
    const Cocycle c = Cocycle::one_step({random_matrix(d, rng), random_matrix(d, rng)});
    const double tol = 1e-9;
    const double beta = beta_lower_periodic(c, 6).exponent;
    for (int p = 1; p <= d; ++p) {
      try {
        const auto m = mather_set_approx(c, p, 6, tol);
        ++nonempty;
        const Cocycle wedge = c.map([p](const Matrix& a) { return exterior_power(a, p); });
        CHECK(std::abs(beta_lower_periodic(wedge, 6).exponent - p * beta) <= 2 * tol);
        CHECK(m.beta_used == doctest::Approx(beta));
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Empty);
      }
    }
  }
  CHECK(nonempty > 20);
}

TEST_CASE("dominated splitting") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 0.5;
  const auto rep = dominated_splitting_test(Cocycle::one_step({d}), {Point::fixed(0)}, 1, 30);
  REQUIRE(rep.has_value());
  CHECK(std::abs(rep->tau - std::log(4.0)) <= 0.01 * std::log(4.0));
  CHECK(std::abs(std::abs(rep->subspaces[0](0, 0)) - 1.0) <= 1e-12);
  CHECK_FALSE(dominated_splitting_test(Cocycle::one_step({two_matrix_pair()[0]}), {Point::fixed(0)}, 1, 30).has_value());
  const auto fit = splitting_fit(Cocycle::one_step({two_matrix_pair()[0]}), {Point::fixed(0)}, 1, 10);
  CHECK(fit.max_log_ratio.size() == 10);

  const auto ns = non_space_example();
  REQUIRE(ns.splitting.has_value());
  for (const auto& f : ns.splitting->subspaces) CHECK(std::abs(std::abs(f(0, 0)) - 1.0) <= 1e-8);
}

TEST_CASE("splitting subspaces are equivariant") {
  // positive matrices preserve the positive quadrant, hence dominate
  Matrix a(2, 2), b(2, 2);
  a << 2, 1, 1, 1;
  b << 1, 1, 1, 3;
  const Cocycle c = Cocycle::one_step({a, b});
  const Point x = Point::periodic(Word{0, 1, 1, 0, 1, 0, 0});
  std::vector<Point> samples;
  for (int i = 0; i < 7; ++i) samples.push_back(x.shifted(i));
  const auto rep = dominated_splitting_test(c, samples, 1, 40);
  REQUIRE(rep.has_value());
  for (int i = 0; i < 7; ++i) {
    const Matrix fx = dominating_subspace(c, samples[i], 1, 40);
    const Matrix ftx = dominating_subspace(c, samples[i].shifted(1), 1, 40);
    CHECK(grassmann_distance(make_subspace(Matrix(c.generator(samples[i]) * fx)), ftx) <= 1e-4);
    CHECK(grassmann_distance(fx, rep->subspaces[i]) <= 1e-8);
  }
}

TEST_CASE("calibrated vectors") {
  const Cocycle c = two_matrix_cocycle();
  CHECK(calibrated_check(c, NormField::max(), 0.0, Point::fixed(0), vec2(1, 0), 12));
  CHECK(calibrated_check(c, NormField::max(), 0.0, Point::fixed(0), vec2(0, 0), 12));
  const NonSpaceExample ex{};
  const Cocycle d = ex.truncated();
  const Point x = Point::with_block(0, Word{1}, -2);
  CHECK_FALSE(calibrated_check(d, NormField::euclidean(), 0.0, x, vec2(0, 1), 12));
  CHECK(calibrated_check(d, NormField::euclidean(), 0.0, x, vec2(1, 0), 12));
}

TEST_CASE("subordination") {
  const Cocycle c = two_matrix_cocycle();
  const auto m = mather_set_approx(c, 1, 6, 1e-9);
  const Sft& s = c.base();
  const auto same = subordination_check(c, m, {make_periodic_word(s, Word{0})});
  CHECK(same.ok());
  const auto doubled = subordination_check(c, m, {PeriodicWord{Word{0, 0}}});
  CHECK(doubled.ok());
  CHECK(std::abs(doubled.exponents[0]) <= 1e-15);
  const auto outside = subordination_check(c, m, {make_periodic_word(s, Word{0, 1})});
  CHECK_FALSE(outside.ok());

  // two maximizing fixed points: diag(2, 1) and [[2, 0], [0, 1]] rotated into the same top line
  Matrix p = Matrix::Zero(2, 2), q = Matrix::Zero(2, 2);
  p(0, 0) = 2;
  p(1, 1) = 1;
  q(0, 0) = 2;
  q(1, 1) = 0.5;
  const Cocycle two = Cocycle::one_step({p, q});
  const auto mt = mather_set_approx(two, 1, 4, 1e-9);
  CHECK(names(mt.orbits) == std::vector<std::string>{"0", "1", "01", "001", "011", "0001", "0011", "0111"});
  const auto mixed = subordination_check(two, mt, {make_periodic_word(two.base(), Word{0, 1, 1, 0, 1})});
  CHECK(mixed.ok());
  CHECK(mixed.exponents[0] == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("calibrated cone slope") {
  const NonSpaceExample ex{};
  CHECK(calibrated_cone_slope(ex, Point::fixed(0)).slope == 1.0);
  const auto s = calibrated_cone_slope(ex, Point::with_block(0, Word{1}, 0));
  CHECK(std::abs(s.slope - std::exp(1.0 / (std::exp(1.0) - 1.0))) <= 1e-9);
  CHECK(s.tail_bound >= 0.0);
  try {
    calibrated_cone_slope(ex, Point::fixed(1));
    FAIL("expected NotOnUnstableSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOnUnstableSet);
  }
  const NonSpaceExample other{2.0, 0.5};
  const auto t = calibrated_cone_slope(other, Point::with_block(0, Word{1}, 0));
  CHECK(t.slope == doctest::Approx(std::exp(1.0 / (std::exp(1.0) - 1.0))).epsilon(1e-12));
}
