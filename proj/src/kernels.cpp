#include "cocycle_lab/kernels.hpp"

#include "cocycle_lab/error.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <numbers>

namespace cocycle_lab {

namespace {

constexpr int kMaxWordSteps = 4096;  // recursion depth
constexpr double kLeafCap = 1e8;
constexpr double kPruneSlack = 1.0 + 1e-12;

struct Enumeration {
  const Cocycle& c;
  const NormField& norm;
  int length;                 // n + 2r
  double max_step;            // max window operator norm
  std::vector<Matrix> partial;  // partial[k] = product after k steps
  Word w;
};

void check_size(const Cocycle& c, int n, const NormField& norm) {
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "n must be >= 1");
  if (!norm.is_constant()) throw Error(ErrorCode::PreconditionViolated, "word enumeration needs a constant norm");
  const int len = n + 2 * c.radius();
  if (n > kMaxWordSteps || std::pow(static_cast<double>(c.base().alphabet_size()), len) > kLeafCap) {
    throw Error(ErrorCode::TooLarge, "word enumeration beyond the cap (n = " + std::to_string(n) + ")");
  }
}

double max_step_norm(const Cocycle& c, const NormField& norm) {
  double s = 0.0;
  for (const auto& w : c.windows()) s = std::max(s, norm.operator_norm(c.matrix(w)));
  return s;
}

bool better(double v, const Word& w, double best, const Word& best_w) {
  return v > best || (v == best && (best_w.empty() || w < best_w));
}

// Depth-first search below the prefix already in e.w. `bound` is read before each
// prune; it only ever increases, and pruning is strict, so maximizers survive.
template <class Bound>
void dfs(Enumeration& e, WordMax& local, Bound&& bound) {
  const int wl = e.c.window_length();
  const int depth = static_cast<int>(e.w.size());
  if (depth == e.length) {
    const double v = e.norm.operator_norm(e.partial[depth - wl + 1]);
    if (better(v, e.w, local.value, local.word)) {
      local.value = v;
      local.word = e.w;
    }
    return;
  }
  const int n_sym = e.c.base().alphabet_size();
  for (int s = 0; s < n_sym; ++s) {
    if (depth > 0 && !e.c.base().allowed(e.w.back(), s)) continue;
    e.w.push_back(s);
    const int steps = static_cast<int>(e.w.size()) - wl + 1;  // completed windows
    if (steps >= 1) {
      const Word win(e.w.end() - wl, e.w.end());
      e.partial[steps] = e.c.matrix(win) * e.partial[steps - 1];
      const int remaining = e.length - static_cast<int>(e.w.size());
      const double ub = e.norm.operator_norm(e.partial[steps]) * std::pow(e.max_step, remaining) * kPruneSlack;
      if (ub < std::max(bound(), local.value)) {
        e.w.pop_back();
        continue;
      }
    }
    dfs(e, local, bound);
    e.w.pop_back();
  }
}

Enumeration make_enumeration(const Cocycle& c, int n, const NormField& norm) {
  Enumeration e{c, norm, n + 2 * c.radius(), max_step_norm(c, norm), {}, {}};
  const int d = c.dimension();
  e.partial.assign(n + 1, Matrix::Identity(d, d));
  e.w.reserve(e.length);
  return e;
}

void atomic_max(std::atomic<double>& a, double v) {
  double cur = a.load(std::memory_order_relaxed);
  while (v > cur && !a.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

// Admissible prefixes of length k in lexicographic order.
std::vector<Word> prefixes(const Sft& sft, int k) {
  std::vector<Word> out{Word{}};
  for (int i = 0; i < k; ++i) {
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

}  // namespace

WordMax max_word_norm_serial(const Cocycle& c, int n, const NormField& norm) {
  check_size(c, n, norm);
  auto e = make_enumeration(c, n, norm);
  WordMax best;
  dfs(e, best, [] { return 0.0; });
  return best;
}

WordMax max_word_norm_parallel(const Cocycle& c, int n, const NormField& norm) {
  check_size(c, n, norm);
  const int len = n + 2 * c.radius();
  const int wl = c.window_length();
  std::vector<Word> pre{Word{}};
  for (int k = 1; k <= len && pre.size() < 64; ++k) pre = prefixes(c.base(), k);
  std::atomic<double> shared{0.0};
  std::vector<WordMax> results(pre.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < pre.size(); ++i) {
    auto e = make_enumeration(c, n, norm);
    bool pruned = false;
    for (int s : pre[i]) {
      e.w.push_back(s);
      const int steps = static_cast<int>(e.w.size()) - wl + 1;
      if (steps >= 1) {
        const Word win(e.w.end() - wl, e.w.end());
        e.partial[steps] = c.matrix(win) * e.partial[steps - 1];
      }
    }
    const int steps = static_cast<int>(e.w.size()) - wl + 1;
    if (static_cast<int>(e.w.size()) == len) {
      results[i].value = norm.operator_norm(e.partial[steps]);
      results[i].word = e.w;
    } else {
      if (steps >= 1) {
        const double ub = norm.operator_norm(e.partial[steps]) *
                          std::pow(e.max_step, len - static_cast<int>(e.w.size())) * kPruneSlack;
        pruned = ub < shared.load(std::memory_order_relaxed);
      }
      if (!pruned) dfs(e, results[i], [&] { return shared.load(std::memory_order_relaxed); });
    }
    if (!results[i].word.empty()) atomic_max(shared, results[i].value);
  }
  WordMax best;
  for (const auto& r : results)
    if (!r.word.empty() && better(r.value, r.word, best.value, best.word)) best = r;
  return best;
}

std::vector<double> periodic_exponents_serial(const Cocycle& c, const std::vector<PeriodicWord>& words) {
  std::vector<double> out(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    out[i] = std::log(spectral_radius(c.cycle_product(words[i]))) / words[i].period();
  }
  return out;
}

std::vector<double> periodic_exponents_parallel(const Cocycle& c, const std::vector<PeriodicWord>& words) {
  std::vector<double> out(words.size());
  const long n = static_cast<long>(words.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    out[i] = std::log(spectral_radius(c.cycle_product(words[i]))) / words[i].period();
  }
  return out;
}

double grid_gauge(const std::vector<double>& g, double vx, double vy) {
  const int grid = static_cast<int>(g.size());
  const double r = std::hypot(vx, vy);
  if (r == 0.0) return 0.0;
  const double step = 2.0 * std::numbers::pi / grid;
  double a = std::atan2(vy, vx);
  if (a < 0) a += 2.0 * std::numbers::pi;
  int k = static_cast<int>(std::floor(a / step));
  if (k >= grid) k = grid - 1;
  const int k1 = (k + 1) % grid;
  // v = alpha e_k + beta e_{k+1}
  const double ck = std::cos(k * step), sk = std::sin(k * step);
  const double c1 = std::cos(k1 * step), s1 = std::sin(k1 * step);
  const double det = ck * s1 - sk * c1;
  const double alpha = (vx * s1 - vy * c1) / det;
  const double beta = (ck * vy - sk * vx) / det;
  return alpha * g[k] + beta * g[k1];
}

namespace {

double step_value(const std::vector<Matrix>& matrices, const std::vector<double>& g, double scale, int j) {
  const double a = 2.0 * std::numbers::pi * j / static_cast<double>(g.size());
  const double ex = std::cos(a), ey = std::sin(a);
  double best = 0.0;
  for (const auto& m : matrices) {
    const double vx = m(0, 0) * ex + m(0, 1) * ey;
    const double vy = m(1, 0) * ex + m(1, 1) * ey;
    best = std::max(best, grid_gauge(g, vx, vy));
  }
  return scale * best;
}

void check_grid(const std::vector<Matrix>& matrices, const std::vector<double>& g) {
  if (g.size() < 4 || g.size() % 2) throw Error(ErrorCode::PreconditionViolated, "grid must be even and >= 4");
  for (const auto& m : matrices)
    if (m.rows() != 2 || m.cols() != 2) throw Error(ErrorCode::Unsupported, "grid value iteration is two-dimensional");
}

}  // namespace

std::vector<double> barabanov_step_serial(const std::vector<Matrix>& matrices, const std::vector<double>& g, double beta) {
  check_grid(matrices, g);
  const double scale = std::exp(-beta);
  std::vector<double> out(g.size());
  for (int j = 0; j < static_cast<int>(g.size()); ++j) out[j] = step_value(matrices, g, scale, j);
  return out;
}

std::vector<double> barabanov_step_parallel(const std::vector<Matrix>& matrices, const std::vector<double>& g, double beta) {
  check_grid(matrices, g);
  const double scale = std::exp(-beta);
  std::vector<double> out(g.size());
  const int grid = static_cast<int>(g.size());
#pragma omp parallel for schedule(static)
  for (int j = 0; j < grid; ++j) out[j] = step_value(matrices, g, scale, j);
  return out;
}

}  // namespace cocycle_lab
