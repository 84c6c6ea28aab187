#include "cocycle_lab/extremal.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/holonomy.hpp"
#include "cocycle_lab/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace cocycle_lab {

namespace {

constexpr double kEvalLeafCap = 1 << 22;

// Exact-duplicate filter on matrices (products of rotations repeat a lot).
std::vector<Matrix> dedupe(std::vector<Matrix> ms) {
  std::set<std::vector<double>> seen;
  std::vector<Matrix> out;
  for (auto& m : ms) {
    std::vector<double> key(m.data(), m.data() + m.size());
    for (double& v : key) v = std::round(v * 1e12) / 1e12;
    if (seen.insert(std::move(key)).second) out.push_back(std::move(m));
  }
  return out;
}

std::vector<Word> admissible_words(const Sft& sft, int length) {
  std::vector<Word> out{Word{}};
  for (int i = 0; i < length; ++i) {
    std::vector<Word> next;
    for (const auto& p : out)
      for (int s = 0; s < sft.alphabet_size(); ++s) {
        if (!p.empty() && !sft.allowed(p.back(), s)) continue;
        Word q = p;
        q.push_back(s);
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

// Points y with y_n = x_n for n <= 0 and every admissible choice of y_1 .. y_len.
std::vector<Point> local_unstable_continuations(const Sft& sft, const Point& x, int len) {
  std::vector<Point> out;
  Word w{x[0]};
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(w.size()) == len + 1) {
      out.push_back(splice(x, extend_word(sft, w, 0), 1));
      return;
    }
    for (int s : sft.successors(w.back())) {
      w.push_back(s);
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
  return out;
}

Point random_point(const Sft& sft, std::mt19937_64& rng, int half_width) {
  std::uniform_int_distribution<int> pick(0, sft.alphabet_size() - 1);
  Word w{pick(rng)};
  while (static_cast<int>(w.size()) < 2 * half_width + 1) {
    const auto succ = sft.successors(w.back());
    w.push_back(succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)]);
  }
  return extend_word(sft, w, -half_width);
}

Vector random_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector u(d);
  for (int i = 0; i < d; ++i) u(i) = g(rng);
  return u;
}

// Unit directions used when operator norms are not available in closed form.
std::vector<Vector> direction_set(int d, int count, std::uint64_t seed) {
  std::vector<Vector> dirs;
  if (d == 2) {
    for (int j = 0; j < count; ++j) {
      const double a = std::numbers::pi * j / count;  // the norm is even
      Vector u(2);
      u << std::cos(a), std::sin(a);
      dirs.push_back(u);
    }
  } else {
    std::mt19937_64 rng(seed);
    for (int j = 0; j < count; ++j) dirs.push_back(random_vector(d, rng).normalized());
  }
  return dirs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Barabanov evaluator

BarabanovEvaluator::BarabanovEvaluator(Cocycle c, double beta, int n_max, NormField base, double theta)
    : c_(std::move(c)), beta_(beta), n_max_(n_max), base_(std::move(base)) {
  if (n_max_ < 2) throw Error(ErrorCode::PreconditionViolated, "depth must be >= 2");
  if (!base_.is_constant()) throw Error(ErrorCode::PreconditionViolated, "base norm must be constant");
  const auto bunch = fiber_bunching_check(c_, theta);
  if (!bunch.fiber_bunched) {
    throw Error(ErrorCode::NotBunched, "cocycle is not fiber-bunched (max log bol " + std::to_string(bunch.max_log_bolicity) +
                                           " >= theta lambda " + std::to_string(bunch.threshold) + ")");
  }
  const int free_max = n_max_ + c_.radius() - 1;
  if (std::pow(static_cast<double>(c_.base().alphabet_size()), free_max) > kEvalLeafCap) {
    throw Error(ErrorCode::TooLarge, "Barabanov evaluation depth beyond the enumeration cap");
  }
}

const BarabanovEvaluator::Context& BarabanovEvaluator::context_data(const Point& x) const {
  const Word key = context(x);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  const int r = c_.radius();
  const int d = c_.dimension();
  auto ctx = std::make_shared<Context>();
  ctx->pull_back = r == 0 ? Matrix::Identity(d, d) : checked_inverse(c_.word_product(x.symbols(-2 * r, r)));

  // DFS over the free symbols y_1 .. y_{n + r - 1}; the product covers windows at
  // -r .. n - 1 of y, i.e. n + r steps.
  const int n_lo = std::max(1, n_max_ / 2);
  const Sft& sft = c_.base();
  const int wl = c_.window_length();
  Word w = x.symbols(-2 * r, 1);
  std::vector<Matrix> partial(n_max_ + r + 1, Matrix::Identity(d, d));
  // Steps already completed by the forced prefix (windows ending at index <= 0).
  int forced_steps = static_cast<int>(w.size()) - wl + 1;  // = 1
  partial[1] = c_.matrix(Word(w.end() - wl, w.end()));
  std::vector<Matrix> found;
  auto record = [&](int steps) {
    const int n = steps - r;
    if (n >= n_lo && n <= n_max_) found.push_back(std::exp(-beta_ * n) * partial[steps]);
  };
  record(forced_steps);
  auto rec = [&](auto&& self, int steps) -> void {
    if (steps - r >= n_max_) return;
    for (int s : sft.successors(w.back())) {
      w.push_back(s);
      partial[steps + 1] = c_.matrix(Word(w.end() - wl, w.end())) * partial[steps];
      record(steps + 1);
      self(self, steps + 1);
      w.pop_back();
    }
  };
  rec(rec, forced_steps);
  if (base_.kind() == NormField::Kind::Euclidean) {
    for (auto& m : found) m = m.transpose() * m;  // Gram forms: |M u|^2 = u^T G u
  }
  ctx->products = dedupe(std::move(found));

  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(key, std::move(ctx));
  return *it->second;
}

double BarabanovEvaluator::operator()(const Point& x, const Vector& u) const {
  if (u.size() != c_.dimension()) throw Error(ErrorCode::DimensionMismatch, "vector size does not match the cocycle");
  const Context& ctx = context_data(x);
  const Vector w = ctx.pull_back * u;
  double best = 0.0;
  if (base_.kind() == NormField::Kind::Euclidean) {
    for (const auto& g : ctx.products) best = std::max(best, w.dot(g * w));
    return std::sqrt(best);
  }
  for (const auto& m : ctx.products) best = std::max(best, base_(m * w));
  return best;
}

double barabanov_eval(const Cocycle& c, double beta, const Point& x, const Vector& u, int n_max, const NormField& base,
                      double theta) {
  return BarabanovEvaluator(c, beta, n_max, base, theta)(x, u);
}

// ---------------------------------------------------------------------------
// Extremality

ExtremalityReport extremality_check(const Cocycle& c, const NormField& norm, double beta) {
  ExtremalityReport rep{};
  rep.beta_used = beta;
  rep.sup_log_operator_norm = -std::numeric_limits<double>::infinity();
  const int d = c.dimension();
  if (norm.is_constant()) {
    rep.tolerance = 1e-6;
    for (const auto& w : c.windows()) {
      const double v = std::log(norm.operator_norm(c.matrix(w)));
      if (v > rep.sup_log_operator_norm) {
        rep.sup_log_operator_norm = v;
        rep.worst_window = w;
      }
    }
    // Witness direction for the worst window.
    const Matrix& a = c.matrix(rep.worst_window);
    if (norm.is_exact_polyhedral() && d == 2) {
      const Matrix verts = norm.kind() == NormField::Kind::Max ? symmetric_hull((Matrix(2, 2) << 1, 1, 1, -1).finished())
                                                               : norm.vertices();
      double best = -1;
      for (Eigen::Index j = 0; j < verts.cols(); ++j) {
        const double v = norm(Vector(a * verts.col(j))) / norm(Vector(verts.col(j)));
        if (v > best) {
          best = v;
          rep.worst_direction = verts.col(j);
        }
      }
    } else if (norm.kind() == NormField::Kind::Ellipse) {
      const Eigen::LLT<Matrix> llt(norm.form());
      const Matrix u = llt.matrixU();
      Eigen::JacobiSVD<Matrix> svd(u * a * checked_inverse(u), Eigen::ComputeFullV);
      rep.worst_direction = checked_inverse(u) * svd.matrixV().col(0);
    } else {
      Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
      rep.worst_direction = svd.matrixV().col(0);
    }
  } else {
    rep.tolerance = 1e-3;
    const int r = c.radius();
    const int lo = -2 * r, hi = std::max(1, r);
    const auto words = admissible_words(c.base(), hi - lo + 1);
    const auto dirs = direction_set(d, 10000, 0);
    for (const auto& w : words) {
      const Point x = extend_word(c.base(), w, lo);
      const Point tx = x.shifted(1);
      const Matrix& a = c.generator(x);
      auto ratio = [&](const Vector& u) { return norm(tx, Vector(a * u)) / norm(x, u); };
      std::vector<double> vals(dirs.size());
      const long nd = static_cast<long>(dirs.size());
#pragma omp parallel for schedule(static)
      for (long j = 0; j < nd; ++j) vals[j] = ratio(dirs[j]);
      const auto jbest = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
      Vector best_u = dirs[jbest];
      double best = vals[jbest];
      // Local refinement: shrinking random perturbations around the best direction.
      std::mt19937_64 rng(jbest);
      double step = d == 2 ? std::numbers::pi / 10000 : 0.02;
      for (int it = 0; it < 60; ++it, step *= 0.85) {
        for (int t = 0; t < 4; ++t) {
          Vector cand = (best_u + step * random_vector(d, rng)).normalized();
          const double v = ratio(cand);
          if (v > best) {
            best = v;
            best_u = cand;
          }
        }
      }
      const double lv = std::log(best);
      if (lv > rep.sup_log_operator_norm) {
        rep.sup_log_operator_norm = lv;
        rep.worst_window = w;
        rep.worst_direction = best_u;
      }
    }
  }
  rep.slack = rep.sup_log_operator_norm - beta;
  rep.extremal = rep.slack <= rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// Value iteration

double barabanov_equation_residual(const std::vector<Matrix>& matrices, const NormField& norm, double beta, int directions) {
  if (matrices.empty()) throw Error(ErrorCode::PreconditionViolated, "no matrices");
  const int d = static_cast<int>(matrices.front().rows());
  double worst = 0.0;
  for (const auto& u : direction_set(d, directions, 0)) {
    double best = 0.0;
    for (const auto& m : matrices) best = std::max(best, norm(Vector(m * u)));
    const double nu = norm(u);
    worst = std::max(worst, std::abs(std::exp(-beta) * best - nu) / nu);
  }
  return worst;
}

BarabanovIteration constant_barabanov_iterate(const std::vector<Matrix>& matrices, double beta, int grid, int iters) {
  if (matrices.empty()) throw Error(ErrorCode::PreconditionViolated, "no matrices");
  if (iters < 1) throw Error(ErrorCode::PreconditionViolated, "iters must be >= 1");
  const int d = static_cast<int>(matrices.front().rows());
  if (d >= 3) {
    // No grid in higher dimension: fall back to the formula evaluator.
    const auto c = Cocycle::one_step(matrices, 1.0);
    const double theta = 1.0 + fiber_bunching_check(c, 1.0).max_log_bolicity;
    auto ev = std::make_shared<BarabanovEvaluator>(c, beta, std::min(iters, 12), NormField::euclidean(), theta);
    BarabanovIteration out{NormField::barabanov(ev), {}, 0.0, {}, 0};
    std::mt19937_64 rng(0);
    const auto n = static_cast<int>(matrices.size());
    for (int t = 0; t < 200; ++t) {
      const Vector u = random_vector(d, rng);
      const int s0 = t % n;
      const Point x = Point::fixed(s0);
      double best = 0.0;
      for (int s = 0; s < n; ++s) best = std::max(best, (*ev)(Point::periodic(Word{s}), Vector(matrices[s0] * u)));
      const double nu = (*ev)(x, u);
      out.residual = std::max(out.residual, std::abs(std::exp(-beta) * best - nu) / nu);
    }
    return out;
  }
  if (d != 2) throw Error(ErrorCode::Unsupported, "value iteration needs d >= 2");
  if (grid < 4 || grid % 2) throw Error(ErrorCode::PreconditionViolated, "grid must be even and >= 4");
  std::vector<double> g(grid, 1.0);
  BarabanovIteration out{NormField::euclidean(), {}, std::numeric_limits<double>::infinity(), {}, 0};
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> tg = barabanov_step_parallel(matrices, g, beta);
    double res = 0.0;
    for (int j = 0; j < grid; ++j) res = std::max(res, std::abs(tg[j] - g[j]));
    out.residual_history.push_back(res);
    out.iterations = it + 1;
    out.residual = res;
    const double top = *std::max_element(tg.begin(), tg.end());
    if (!(top > 0.0) || !std::isfinite(top)) throw Error(ErrorCode::NotConverged, "value iteration degenerated");
    if (res < 1e-10) break;
    for (double& v : tg) v /= top;
    g = std::move(tg);
    if (res < best) {
      best = res;
      since_best = 0;
    } else if (++since_best >= 50) {
      // Stalled at the discretization floor: accept small residuals only.
      if (best > 1e-3) {
        throw Error(ErrorCode::NotConverged, "Barabanov residual stalled at " + std::to_string(best) +
                                                 " (wrong beta or reducible matrices?)");
      }
      break;
    }
  }
  out.values = g;
  Matrix verts(2, grid);
  for (int j = 0; j < grid; ++j) {
    const double a = 2.0 * std::numbers::pi * j / grid;
    verts(0, j) = std::cos(a) / g[j];
    verts(1, j) = std::sin(a) / g[j];
  }
  out.norm = NormField::polytope(verts);
  return out;
}

double calibration_check(const Cocycle& c, const NormField& norm, double beta, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::PreconditionViolated, "samples must be >= 1");
  std::mt19937_64 rng(seed);
  const int len = std::max(1, c.radius());
  const double target = std::exp(beta);
  int ok = 0;
  for (int t = 0; t < samples; ++t) {
    const Point x = random_point(c.base(), rng, 6 + 2 * c.radius());
    const Vector u = random_vector(c.dimension(), rng);
    const double nu = norm(x, u);
    double best = 0.0;
    for (const auto& y : local_unstable_continuations(c.base(), x, len)) {
      const Vector v = c.radius() == 0 ? u : Vector(unstable_holonomy(c, x, y).matrix * u);
      best = std::max(best, norm(y.shifted(1), Vector(c.generator(y) * v)));
    }
    if (std::abs(best / nu - target) <= 1e-6 * target) ++ok;
  }
  return static_cast<double>(ok) / samples;
}

// ---------------------------------------------------------------------------
// Obstruction

ObstructionReport riemannian_obstruction(const Cocycle& c, const Point& p, const Point& q, std::optional<double> beta) {
  if (c.dimension() != 2) throw Error(ErrorCode::NotRotationFixedPoint, "the disk argument needs d = 2");
  if (p != p.shifted(1)) throw Error(ErrorCode::PreconditionViolated, "p must be a fixed point");
  const Matrix a = c.generator(p);
  const double s = std::sqrt(std::abs(a.determinant()));
  const Matrix o = a / s;
  const double orth = (o.transpose() * o - Matrix::Identity(2, 2)).norm();
  const double disc = 0.25 * o.trace() * o.trace() - o.determinant();
  if (orth > 1e-9 || !(disc < -1e-12)) {
    throw Error(ErrorCode::NotRotationFixedPoint, "Phi_p is not a scaled rotation with non-real eigenvalues; test inconclusive");
  }
  if (beta && std::abs(std::log(s) - *beta) > 1e-9) {
    throw Error(ErrorCode::NotRotationFixedPoint, "Phi_p is not e^beta times a rotation; test inconclusive");
  }
  ObstructionReport rep{};
  for (int k = 1; k <= 5; ++k) {
    rep.loop = loop_holonomy(c, p, q, k);
    rep.loop_norms.push_back(operator_norm2(rep.loop));
  }
  rep.loop_norm = rep.loop_norms.back();
  rep.obstructed = rep.loop_norm > 1.0 + 1e-9;
  return rep;
}

}  // namespace cocycle_lab
