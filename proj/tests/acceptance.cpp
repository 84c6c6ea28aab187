// Acceptance run: one PASS/FAIL line per criterion, with wall time.

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/extremal.hpp"
#include "cocycle_lab/grassmann.hpp"
#include "cocycle_lab/holonomy.hpp"
#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/mather.hpp"
#include "cocycle_lab/scenarios.hpp"
#include "cocycle_lab/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace cocycle_lab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && secs >= time_limit) {
    out.pass = false;
    out.detail << " [time " << secs << " s >= " << time_limit << " s]";
  }
  if (!out.pass) ++failures;
  std::printf("%s %2d %-28s %8.3f s%s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(), secs, out.detail.str().c_str());
  std::fflush(stdout);
}

const double kBig = 0.8 * std::sqrt(2.0);
const double kSmall = 0.1 * std::sqrt(2.0);

Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  return m;
}

Matrix random_orthogonal(int d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(d, rng));
  return qr.householderQ() * Matrix::Identity(d, d);
}

// U diag(s) V with log(s_1 / s_d) = log_bol exactly.
Matrix matrix_with_bolicity(int d, double log_bol, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector s(d);
  const double scale = std::exp(u(rng) - 0.5);
  s(0) = scale * std::exp(log_bol);
  s(d - 1) = scale;
  for (int i = 1; i < d - 1; ++i) s(i) = scale * std::exp(log_bol * u(rng));
  return random_orthogonal(d, rng) * s.asDiagonal() * random_orthogonal(d, rng);
}

Word random_word(int len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> bit(0, 1);
  Word w(len);
  for (auto& s : w) s = bit(rng);
  return w;
}

// Points on the full 2-shift sharing the right tail and the core from index `from` on.
Point stable_partner(const Point& x, int from, std::mt19937_64& rng) {
  Word core = x.core();
  std::uniform_int_distribution<int> bit(0, 1);
  for (long i = 0; i < static_cast<long>(core.size()); ++i)
    if (i - x.origin() < from) core[i] = bit(rng);
  std::uniform_int_distribution<int> len(1, 3);
  return Point(random_word(len(rng), rng), core, x.right_period(), x.origin());
}

Cocycle random_radius_one(int d, double max_log_bol, std::mt19937_64& rng, bool exact) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<Word, Matrix> t;
  for (int code = 0; code < 8; ++code) {
    const Word w{(code >> 2) & 1, (code >> 1) & 1, code & 1};
    t.emplace(w, matrix_with_bolicity(d, exact ? max_log_bol : max_log_bol * u(rng), rng));
  }
  return Cocycle(Sft::full_shift(2), 1, t);
}

double rel_diff(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

int main() {
  const Cocycle pair = two_matrix_cocycle();
  const auto mats = two_matrix_pair();

  criterion(1, "golden beta bracket", 1.0, [&](Outcome& o) {
    const auto b = estimate_beta(pair, 12);
    const auto sv = singular_values(mats[1]);
    o.detail << " bracket=[" << b.lower << ", " << b.upper << "] width=" << b.width() << " sigma=(" << sv[0] << ", "
             << sv[1] << ")";
    o.require(b.lower <= 0.0 && 0.0 <= b.upper, "bracket contains 0");
    o.require(b.width() <= 0.02, "width <= 0.02");
    o.require(std::abs(beta_upper(pair, 1, NormField::max())) == 0.0, "max-norm upper at n=1 is 0");
    o.require(beta_lower_periodic(pair, 1).exponent == 0.0, "period-1 lower is 0");
    o.require(std::abs(sv[0] - kBig) <= 1e-12 && std::abs(sv[1] - kSmall) <= 1e-12, "singular values");
  });

  criterion(2, "loop holonomy obstruction", 1.0, [&](Outcome& o) {
    const Point p = Point::fixed(0);
    const Point q = Point::with_block(0, Word{1}, 0);
    const Matrix loop = loop_holonomy(pair, p, q, 1);
    const Matrix expect = mats[0].inverse() * mats[1];
    const double err = (loop - expect).cwiseAbs().maxCoeff();
    const auto rep = riemannian_obstruction(pair, p, q);
    o.detail << " loop_err=" << err << " loop_norm=" << rep.loop_norm << " obstructed=" << rep.obstructed;
    o.require(err <= 1e-14, "loop = A0^-1 A1");
    o.require(std::abs(rep.loop_norm - kBig) <= 1e-10, "loop norm 0.8 sqrt 2");
    o.require(rep.obstructed, "obstructed");
  });

  criterion(3, "perturbed family", 0.0, [&](Outcome& o) {
    for (int m : {6, 10}) {
      const auto ex = perturbed_example(m);
      Matrix expect = Matrix::Zero(2, 2);
      expect(0, 0) = -kBig;
      expect(1, 1) = -kSmall;
      const double err = (ex.product_check - expect).cwiseAbs().maxCoeff();
      const double gap = std::abs(ex.periodic_exponent - std::log(kBig) / (m + 1));
      o.detail << " m=" << m << ": product_err=" << err << " exponent_err=" << gap;
      o.require(err <= 1e-10, "product m=" + std::to_string(m));
      o.require(gap <= 1e-12, "exponent m=" + std::to_string(m));
      o.require(ex.periodic_exponent > 0.0, "exponent > 0");
    }
  });

  criterion(4, "extremality of norms", 0.0, [&](Outcome& o) {
    const auto mx = extremality_check(pair, NormField::max(), 0.0);
    const auto eu = extremality_check(pair, NormField::euclidean(), 0.0);
    o.detail << " max_slack=" << mx.slack << " euclidean_slack=" << eu.slack;
    o.require(std::abs(mx.slack) <= 1e-12, "max-norm slack 0");
    o.require(std::abs(eu.slack - std::log(kBig)) <= 1e-10, "euclidean slack log(0.8 sqrt 2)");
    o.require(std::abs(NormField::max().operator_norm(mats[0]) - 1.0) <= 1e-15 &&
                  std::abs(NormField::max().operator_norm(mats[1]) - 0.9) <= 1e-15,
              "operator max-norms 1, 0.9");
  });

  criterion(5, "Barabanov value iteration", 30.0, [&](Outcome& o) {
    const auto it = constant_barabanov_iterate(mats, 0.0, 720, 500);
    o.detail << " residual=" << it.residual << " iterations=" << it.iterations;
    o.require(it.residual < 1e-3, "residual < 1e-3");
    o.require(it.iterations <= 500, "<= 500 iterations");
    std::mt19937_64 rng(0);
    std::normal_distribution<double> g;
    int axiom_failures = 0;
    for (int k = 0; k < 1000; ++k) {
      Vector u(2), v(2);
      u << g(rng), g(rng);
      v << g(rng), g(rng);
      const double a = g(rng);
      const double nu = it.norm(u), nv = it.norm(v);
      if (!(nu > 0.0)) ++axiom_failures;
      if (it.norm(u + v) > nu + nv + 1e-12 * (nu + nv)) ++axiom_failures;
      if (std::abs(it.norm(a * u) - std::abs(a) * nu) > 1e-12 * std::abs(a) * nu) ++axiom_failures;
    }
    if (it.norm(Vector::Zero(2)) != 0.0) ++axiom_failures;
    o.require(axiom_failures == 0, "norm axioms");
    // Past-independence: |H^u_{y<-x} u|_y = |u|_x for y in W^u_loc(x).
    int invariance_failures = 0;
    for (int k = 0; k < 200; ++k) {
      const Point x(random_word(2, rng), random_word(6, rng), random_word(2, rng), 3);
      Word core = x.core();
      for (int i = 4; i < 6; ++i) core[i] = 1 - core[i];
      const Point y(x.left_period(), core, random_word(1, rng), 3);
      Vector u(2);
      u << g(rng), g(rng);
      const auto h = unstable_holonomy(pair, x, y);
      if (it.norm(y, h.matrix * u) != it.norm(x, u)) ++invariance_failures;
    }
    o.require(invariance_failures == 0, "H^u invariance");
    o.detail << " axiom_failures=" << axiom_failures << " invariance_failures=" << invariance_failures;
  });

  criterion(6, "dominated splitting oracle", 0.0, [&](Outcome& o) {
    Matrix d(2, 2);
    d << 2.0, 0.0, 0.0, 0.5;
    const Cocycle diag = Cocycle::one_step({d});
    const auto rep = dominated_splitting_test(diag, {Point::fixed(0)}, 1, 20);
    o.require(rep.has_value(), "diag(2, 1/2) splits");
    if (rep) {
      const double angle = std::acos(std::min(1.0, std::abs(rep->subspaces[0](0, 0))));
      o.detail << " p=" << rep->p << " tau=" << rep->tau << " angle=" << angle;
      o.require(rep->p == 1, "p = 1");
      o.require(std::abs(rep->tau - std::log(4.0)) <= 0.01 * std::log(4.0), "tau = log 4 within 1%");
      o.require(angle <= 1e-8, "first axis");
    }
    const Cocycle rot = Cocycle::one_step({mats[0]});
    const auto none = dominated_splitting_test(rot, {Point::fixed(0)}, 1, 20);
    o.require(!none.has_value(), "rotation has no splitting");
  });

  criterion(7, "holonomy contract suite", 0.0, [&](Outcome& o) {
    std::mt19937_64 rng(0);
    int uncertified = 0, groupoid_bad = 0, equivariance_bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 2 + trial % 2;
      const Cocycle c = random_radius_one(d, 0.8, rng, false);
      if (fiber_bunching_check(c, 1.0).margin < 0.2) throw std::logic_error("generator broke the bunching margin");
      const Point x(random_word(2, rng), random_word(10, rng), random_word(2, rng), 5);
      const Point y = stable_partner(x, 2, rng);
      const Point z = stable_partner(x, 3, rng);
      const auto hxy = stable_holonomy(c, x, y);
      const auto hyz = stable_holonomy(c, y, z);
      const auto hxz = stable_holonomy(c, x, z);
      if (!hxy.certified || !hyz.certified || !hxz.certified) ++uncertified;
      if (rel_diff(hyz.matrix * hxy.matrix, hxz.matrix) > 1e-8) ++groupoid_bad;
      const auto shifted = stable_holonomy(c, x.shifted(1), y.shifted(1));
      const Matrix expect = c.generator(y) * hxy.matrix * c.generator_inverse(x);
      if (rel_diff(shifted.matrix, expect) > 1e-8) ++equivariance_bad;
    }
    o.detail << " uncertified=" << uncertified << " groupoid_bad=" << groupoid_bad
             << " equivariance_bad=" << equivariance_bad;
    o.require(uncertified == 0 && groupoid_bad == 0 && equivariance_bad == 0, "bunched suite");
    // bol = e^{2 theta lambda} on every window.
    int flagged = 0, diverging = 0, pairs = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const Cocycle c = random_radius_one(2, 2.0, rng, true);
      const Point x(random_word(2, rng), random_word(10, rng), random_word(2, rng), 5);
      const Point y = stable_partner(x, 2, rng);
      if (x == y) continue;
      ++pairs;
      try {
        if (!stable_holonomy(c, x, y).certified) ++flagged;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Diverging) throw;
        ++flagged;
        ++diverging;
      }
    }
    o.detail << " non_bunched_flagged=" << flagged << "/" << pairs << " (diverging=" << diverging << ")";
    o.require(flagged >= 0.9 * pairs, "non-bunched flagged on >= 90%");
  });

  criterion(8, "exterior power identities", 0.0, [&](Outcome& o) {
    std::mt19937_64 rng(0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const int d = 1 + k % 4;
      const Matrix m = random_matrix(d, rng);
      const auto sv = singular_values(m);
      double prod = 1.0;
      for (int p = 1; p <= d; ++p) {
        prod *= sv[p - 1];
        worst = std::max(worst, std::abs(operator_norm2(exterior_power(m, p)) - prod) / std::max(1.0, prod));
      }
    }
    double worst_wedge = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int d = 2 + k % 3;
      const Cocycle c = Cocycle::one_step({random_matrix(d, rng), random_matrix(d, rng)});
      std::uniform_int_distribution<int> len(1, 8);
      const PeriodicWord w = make_periodic_word(c.base(), random_word(len(rng), rng));
      const auto chi = lyapunov_spectrum_periodic(c, w);
      double sum = 0.0;
      for (int p = 1; p <= d; ++p) {
        sum += chi[p - 1];
        const Cocycle wedge = c.map([p](const Matrix& a) { return exterior_power(a, p); });
        worst_wedge = std::max(worst_wedge, std::abs(lyapunov_spectrum_periodic(wedge, w)[0] - sum));
      }
    }
    o.detail << " norm_err=" << worst << " wedge_err=" << worst_wedge;
    o.require(worst <= 1e-9, "norm of wedge = product of singular values");
    o.require(worst_wedge <= 1e-8, "wedge Lyapunov consistency");
  });

  criterion(9, "Grassmannian metric suite", 0.0, [&](Outcome& o) {
    std::mt19937_64 rng(0);
    int axiom_bad = 0;
    for (int k = 0; k < 1000; ++k) {
      const int d = 2 + k % 3;
      const int p = 1 + k % (d - 1);
      const auto a = random_subspace(d, p, rng), b = random_subspace(d, p, rng), c = random_subspace(d, p, rng);
      const double ab = grassmann_distance(a, b), ba = grassmann_distance(b, a);
      const double bc = grassmann_distance(b, c), ac = grassmann_distance(a, c);
      if (ab < -1e-8 || std::abs(ab - ba) > 1e-8 || ac > ab + bc + 1e-8 || grassmann_distance(a, a) > 1e-8) ++axiom_bad;
    }
    Vector e1 = Vector::Unit(2, 0), e2 = Vector::Unit(2, 1);
    const double orth = grassmann_distance(make_subspace(e1), make_subspace(e2));
    const double brute = grassmann_distance_bruteforce_lines(e1, e2);
    int lip_bad = 0;
    double worst_ratio = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int d = 2 + k % 3;
      const auto rep = lipschitz_bolicity_property(random_matrix(d, rng), 10, 1 + k % (d - 1), k);
      lip_bad += rep.violations;
      worst_ratio = std::max(worst_ratio, rep.max_ratio / rep.bolicity);
    }
    o.detail << " axiom_bad=" << axiom_bad << " orth=" << orth << " brute=" << brute << " lip_violations=" << lip_bad
             << " worst_ratio/bol=" << worst_ratio;
    o.require(axiom_bad == 0, "metric axioms");
    o.require(std::abs(orth - std::sqrt(2.0)) <= 1e-6 && std::abs(brute - std::sqrt(2.0)) <= 1e-6, "orthogonal lines");
    o.require(lip_bad == 0, "Lipschitz bolicity");
  });

  criterion(10, "closing lemma", 0.0, [&](Outcome& o) {
    const Sft full = Sft::full_shift(2);
    const Point y0 = Point::periodic(Word{0, 1});
    const std::vector<Point> orbit{y0, y0.shifted(1)};
    bool all_01 = true;
    for (int n = 2; n <= 32; ++n) all_01 = all_01 && closing_periodic_orbit(orbit, n, 1.0, full).to_string() == "01";
    o.require(all_01, "(01) samples close to 01");
    std::mt19937_64 rng(0);
    const Point z(Word{0}, random_word(260, rng), Word{1}, 30);
    std::vector<Point> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(z.shifted(i));
    const auto w = closing_periodic_orbit(samples, 16, 1.0, full);
    const double dist = orbit_distance_to_samples(full, w, samples);
    o.detail << " word=" << w.to_string() << " dist=" << dist;
    o.require(dist <= 1.0 / 16.0, "distance <= n^-tau");
    int checked = 0, failed = 0, attempts = 0;
    std::uniform_int_distribution<int> npts(3, 20), depth(1, 3), mm(1, 4);
    while (checked < 50 && attempts < 20000) {
      ++attempts;
      std::vector<Point> pts;
      const int n = npts(rng);
      for (int i = 0; i < n; ++i) pts.emplace_back(random_word(1 + i % 2, rng), random_word(8, rng), random_word(1 + i % 3, rng), 4);
      const double eps = std::exp(-static_cast<double>(depth(rng)));
      try {
        const auto chk = bq_inequality_check(mm(rng), eps, pts, full);
        ++checked;
        if (!chk.holds) ++failed;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PreconditionViolated) throw;
      }
    }
    o.detail << " bq_checked=" << checked << " bq_failed=" << failed;
    o.require(checked == 50 && failed == 0, "Lemma A.2 diagnostic");
  });

  criterion(11, "non-space example", 0.0, [&](Outcome& o) {
    const auto r = non_space_example(1.0, 1.0);
    const auto all = enumerate_periodic_words(Sft::full_shift(2), 6);
    std::set<std::string> m1;
    for (const auto& w : r.m1.orbits) m1.insert(w.to_string());
    bool covers = true;
    for (const auto& w : all) covers = covers && m1.count(w.to_string()) > 0;
    const bool m2_zero = r.m2.orbits.size() == 1 && r.m2.orbits[0].to_string() == "0";
    const double expect = std::exp(1.0 / (std::exp(1.0) - 1.0));
    o.detail << " |M1|=" << r.m1.orbits.size() << "/" << all.size() << " slope_err=" << std::abs(r.slope.slope - expect);
    o.require(covers, "M1 contains every periodic orbit to period 6");
    o.require(m2_zero, "M2 = {0}");
    o.require(std::abs(r.slope.slope - expect) <= 1e-9, "cone slope exp(1/(e-1))");
  });

  criterion(12, "Berger-Wang table", 300.0, [&](Outcome& o) {
    std::mt19937_64 rng(0);
    int made = 0, monotone_bad = 0, bracket_bad = 0;
    double worst = std::numeric_limits<double>::infinity();
    while (made < 20) {
      std::vector<Matrix> m{random_matrix(2, rng), random_matrix(2, rng)};
      if (!check_irreducible_onestep(m)) continue;
      ++made;
      const Cocycle c = Cocycle::one_step(m);
      const auto table = berger_wang_table(c, 12);
      for (std::size_t i = 1; i < table.size(); ++i)
        if (table[i].beta_n < table[i - 1].beta_n) ++monotone_bad;
      const double gap = beta_upper(c, 16) - table.back().beta_n;
      worst = std::min(worst, gap);
      if (gap < -1e-9) ++bracket_bad;
    }
    o.detail << " monotone_bad=" << monotone_bad << " bracket_bad=" << bracket_bad << " min_gap=" << worst;
    o.require(monotone_bad == 0 && bracket_bad == 0, "bracket consistency");
  });

  std::printf("%s: %d of 12 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
