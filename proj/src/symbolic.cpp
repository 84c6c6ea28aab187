#include "cocycle_lab/symbolic.hpp"

#include "cocycle_lab/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace cocycle_lab {

namespace {

constexpr double kEnumerationCap = 1e8;

long lcm_len(std::size_t a, std::size_t b) {
  return static_cast<long>(std::lcm(a, b));
}

bool agree_on(const Point& x, const Point& y, long from, long to) {
  for (long n = from; n < to; ++n)
    if (x[n] != y[n]) return false;
  return true;
}

// x_n = y_n for every n <= b.
bool agree_up_to(const Point& x, const Point& y, long b) {
  const long lo = std::min(b + 1, std::min(x.past_start(), y.past_start())) -
                  lcm_len(x.left_period().size(), y.left_period().size());
  return agree_on(x, y, lo, b + 1);
}

// x_n = y_n for every n >= a.
bool agree_from(const Point& x, const Point& y, long a) {
  const long hi = std::max(a, std::max(x.future_start(), y.future_start())) +
                  lcm_len(x.right_period().size(), y.right_period().size());
  return agree_on(x, y, a, hi);
}

char symbol_char(int s) {
  if (s < 10) return static_cast<char>('0' + s);
  return static_cast<char>('a' + s - 10);
}

}  // namespace

Word parse_word(const std::string& text) {
  Word w;
  w.reserve(text.size());
  for (char ch : text) {
    if (ch >= '0' && ch <= '9') {
      w.push_back(ch - '0');
    } else if (ch >= 'a' && ch <= 'z') {
      w.push_back(ch - 'a' + 10);
    } else {
      throw Error(ErrorCode::InvalidConfig, std::string("bad symbol '") + ch + "' in word \"" + text + "\"");
    }
  }
  return w;
}

std::string format_word(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (int c : w) s.push_back(symbol_char(c));
  return s;
}

// ---------------------------------------------------------------------------
// Point

Point::Point(Word left_period, Word core, Word right_period, long origin)
    : left_(std::move(left_period)), core_(std::move(core)), right_(std::move(right_period)), origin_(origin) {
  if (left_.empty() || right_.empty()) throw Error(ErrorCode::InvalidConfig, "point periods must be nonempty");
  auto bad = [](int s) { return s < 0; };
  if (std::any_of(left_.begin(), left_.end(), bad) || std::any_of(core_.begin(), core_.end(), bad) ||
      std::any_of(right_.begin(), right_.end(), bad)) {
    throw Error(ErrorCode::InvalidConfig, "negative symbol in point");
  }
}

Point Point::periodic(const Word& w) { return Point(w, {}, w, 0); }

Point Point::with_block(int background, const Word& word, long start) {
  return Point({background}, word, {background}, -start);
}

int Point::operator[](long n) const {
  const long j = n + origin_;
  const long c = static_cast<long>(core_.size());
  if (j >= 0 && j < c) return core_[j];
  if (j >= c) return right_[(j - c) % static_cast<long>(right_.size())];
  const long l = static_cast<long>(left_.size());
  return left_[((j % l) + l) % l];
}

Point Point::shifted(long n) const { return Point(left_, core_, right_, origin_ + n); }

Word Point::symbols(long from, long to) const {
  Word w;
  for (long n = from; n < to; ++n) w.push_back((*this)[n]);
  return w;
}

std::string Point::to_string() const {
  std::ostringstream os;
  os << "(" << format_word(left_) << ")~" << format_word(core_) << "(" << format_word(right_) << ")~@" << origin_;
  return os.str();
}

std::optional<long> first_difference(const Point& x, const Point& y) {
  const long hi = std::max(x.future_start(), y.future_start()) +
                  lcm_len(x.right_period().size(), y.right_period().size());
  const long lo = std::min(x.past_start(), y.past_start()) -
                  lcm_len(x.left_period().size(), y.left_period().size());
  const long reach = std::max(hi, -lo) + 1;
  for (long m = 0; m <= reach; ++m) {
    if (x[m] != y[m] || x[-m] != y[-m]) return m;
  }
  return std::nullopt;
}

bool operator==(const Point& a, const Point& b) { return !first_difference(a, b).has_value(); }

bool tails_agree_right(const Point& x, const Point& y) {
  return agree_from(x, y, std::max(x.future_start(), y.future_start()));
}

bool tails_agree_left(const Point& x, const Point& y) {
  return agree_up_to(x, y, std::min(x.past_start(), y.past_start()) - 1);
}

// ---------------------------------------------------------------------------
// Sft

Sft::Sft(int alphabet_size, std::vector<std::vector<int>> transitions, double lambda)
    : n_(alphabet_size), t_(std::move(transitions)), lambda_(lambda) {
  if (n_ < 1) throw Error(ErrorCode::InvalidConfig, "alphabet: must be positive");
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw Error(ErrorCode::InvalidConfig, "lambda: must be > 0");
  if (static_cast<int>(t_.size()) != n_) throw Error(ErrorCode::InvalidConfig, "transitions: expected N rows");
  for (int a = 0; a < n_; ++a) {
    if (static_cast<int>(t_[a].size()) != n_) {
      throw Error(ErrorCode::InvalidConfig, "transitions[" + std::to_string(a) + "]: expected N columns");
    }
    for (int b = 0; b < n_; ++b) {
      if (t_[a][b] != 0 && t_[a][b] != 1) {
        throw Error(ErrorCode::InvalidConfig, "transitions[" + std::to_string(a) + "][" + std::to_string(b) + "]: entries must be 0 or 1");
      }
    }
  }
  for (int a = 0; a < n_; ++a) {
    bool row = false, col = false;
    for (int b = 0; b < n_; ++b) {
      row = row || t_[a][b];
      col = col || t_[b][a];
    }
    if (!row || !col) throw Error(ErrorCode::InvalidConfig, "transitions: symbol " + std::to_string(a) + " is dead");
  }
}

Sft Sft::full_shift(int alphabet_size, double lambda) {
  return Sft(alphabet_size, std::vector<std::vector<int>>(alphabet_size, std::vector<int>(alphabet_size, 1)), lambda);
}

Sft Sft::golden_mean(double lambda) { return Sft(2, {{1, 1}, {1, 0}}, lambda); }

bool Sft::is_full_shift() const {
  for (const auto& row : t_)
    for (int v : row)
      if (!v) return false;
  return true;
}

bool Sft::admissible(const Word& w) const {
  for (int s : w)
    if (s < 0 || s >= n_) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!allowed(w[i - 1], w[i])) return false;
  return true;
}

bool Sft::cyclically_admissible(const Word& w) const {
  return !w.empty() && admissible(w) && allowed(w.back(), w.front());
}

void Sft::validate(const Point& x) const {
  if (!cyclically_admissible(x.left_period())) throw Error(ErrorCode::PreconditionViolated, "left period not cyclically admissible");
  if (!cyclically_admissible(x.right_period())) throw Error(ErrorCode::PreconditionViolated, "right period not cyclically admissible");
  Word joined;
  joined.push_back(x.left_period().back());
  joined.insert(joined.end(), x.core().begin(), x.core().end());
  joined.push_back(x.right_period().front());
  if (!admissible(joined)) throw Error(ErrorCode::PreconditionViolated, "point not admissible at a junction: " + x.to_string());
}

std::vector<int> Sft::successors(int a) const {
  std::vector<int> out;
  for (int b = 0; b < n_; ++b)
    if (allowed(a, b)) out.push_back(b);
  return out;
}

std::vector<int> Sft::predecessors(int a) const {
  std::vector<int> out;
  for (int b = 0; b < n_; ++b)
    if (allowed(b, a)) out.push_back(b);
  return out;
}

double Sft::eps0() const { return std::exp(-lambda_); }

// ---------------------------------------------------------------------------
// Words

Word least_rotation(const Word& w) {
  Word best = w;
  Word r = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::rotate(r.begin(), r.begin() + 1, r.end());
    if (r < best) best = r;
  }
  return best;
}

Word primitive_root(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return Word(w.begin(), w.begin() + static_cast<long>(p));
  }
  return w;
}

PeriodicWord make_periodic_word(const Sft& sft, const Word& w) {
  if (!sft.cyclically_admissible(w)) throw Error(ErrorCode::PreconditionViolated, "word \"" + format_word(w) + "\" not cyclically admissible");
  return PeriodicWord{least_rotation(primitive_root(w))};
}

// ---------------------------------------------------------------------------
// Metric and local product structure

double distance(const Sft& sft, const Point& x, const Point& y) {
  const auto k = first_difference(x, y);
  if (!k) return 0.0;
  return std::exp(-sft.lambda() * static_cast<double>(*k));
}

double bowen_distance(const Sft& sft, const Point& x, const Point& y, int depth) {
  double d = 0.0;
  for (int i = 0; i < std::max(depth, 1); ++i) d = std::max(d, distance(sft, x.shifted(i), y.shifted(i)));
  return d;
}

Point shift(const Point& x, long n) { return x.shifted(n); }

Point splice(const Point& past, const Point& future, long cut) {
  // Start the core on a left-period boundary of `past` at or before `cut`,
  // and end it on a right-period boundary of `future` at or after `cut`.
  const long lp = static_cast<long>(past.left_period().size());
  long a = past.past_start();
  if (a > cut) a -= ((a - cut + lp - 1) / lp) * lp;
  const long rp = static_cast<long>(future.right_period().size());
  long b = future.future_start();
  if (b < cut) b += ((cut - b + rp - 1) / rp) * rp;
  Word core;
  for (long n = a; n < cut; ++n) core.push_back(past[n]);
  for (long n = cut; n < b; ++n) core.push_back(future[n]);
  return Point(past.left_period(), std::move(core), future.right_period(), -a);
}

Point bracket(const Sft& sft, const Point& x, const Point& y) {
  if (x[0] != y[0]) throw Error(ErrorCode::PreconditionViolated, "bracket needs x_0 = y_0");
  Point z = splice(x, y, 0);
  sft.validate(z);
  return z;
}

bool in_local_unstable(const Point& x, const Point& y) { return agree_up_to(x, y, 0); }
bool in_local_stable(const Point& x, const Point& y) { return agree_from(x, y, 0); }
bool on_stable_set(const Point& x, const Point& y) { return tails_agree_right(x, y); }
bool on_unstable_set(const Point& x, const Point& y) { return tails_agree_left(x, y); }

Point extend_word(const Sft& sft, const Word& w, long offset) {
  if (w.empty() || !sft.admissible(w)) throw Error(ErrorCode::PreconditionViolated, "extend_word needs a nonempty admissible word");
  auto walk = [&](int start, bool backwards) {
    std::vector<int> seq{start};
    std::vector<int> seen(sft.alphabet_size(), -1);
    seen[start] = 0;
    while (true) {
      const auto next = backwards ? sft.predecessors(seq.back()) : sft.successors(seq.back());
      const int s = next.front();
      if (seen[s] >= 0) return std::make_pair(seq, seen[s]);
      seen[s] = static_cast<int>(seq.size());
      seq.push_back(s);
    }
  };
  // Backwards: a_0 = w[0], a_{k+1} a predecessor of a_k, a_j = a_i closes the cycle.
  auto [back, bi] = walk(w.front(), true);
  const int bj = static_cast<int>(back.size());
  Word left;
  for (int k = bj; k > bi; --k) left.push_back(back[k == bj ? bi : k]);
  Word core;
  for (int k = bi; k >= 1; --k) core.push_back(back[k]);
  core.insert(core.end(), w.begin(), w.end());
  auto [fwd, fi] = walk(w.back(), false);
  const int fj = static_cast<int>(fwd.size());
  for (int k = 1; k <= fi; ++k) core.push_back(fwd[k]);
  Word right;
  for (int k = fi + 1; k <= fj; ++k) right.push_back(fwd[k == fj ? fi : k]);
  Point p(std::move(left), std::move(core), std::move(right), -(offset - bi));
  sft.validate(p);
  return p;
}

std::vector<PeriodicWord> enumerate_periodic_words(const Sft& sft, int max_period) {
  if (max_period < 1) throw Error(ErrorCode::PreconditionViolated, "max_period must be >= 1");
  const int k = sft.alphabet_size();
  if (std::pow(static_cast<double>(k), max_period) > kEnumerationCap) {
    throw Error(ErrorCode::TooLarge, "periodic word enumeration exceeds cap");
  }
  // Lyndon words of length <= max_period in lexicographic order.
  std::vector<PeriodicWord> out;
  Word w{-1};
  while (!w.empty()) {
    ++w.back();
    if (sft.cyclically_admissible(w)) out.push_back(PeriodicWord{w});
    const std::size_t m = w.size();
    while (static_cast<int>(w.size()) < max_period) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == k - 1) w.pop_back();
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Pseudoorbits, separated sets, closing

namespace {

// edges[i] = { j : d_depth(T x_i, x_j) < eps }
std::vector<std::vector<int>> pseudo_transition_graph(const std::vector<Point>& points, double eps, int depth,
                                                      const Sft& sft) {
  const std::size_t n = points.size();
  std::vector<Point> images;
  images.reserve(n);
  for (const auto& p : points) images.push_back(p.shifted(1));
  std::vector<std::vector<int>> edges(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (bowen_distance(sft, images[i], points[j], depth) < eps) edges[i].push_back(static_cast<int>(j));
    }
  }
  return edges;
}

// Shortest directed cycle; returns the node sequence (empty when acyclic).
std::vector<int> shortest_cycle(const std::vector<std::vector<int>>& edges) {
  const int n = static_cast<int>(edges.size());
  std::vector<int> best;
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1), parent(n, -1);
    std::queue<int> q;
    q.push(s);
    dist[s] = 0;
    int closing = -1;
    while (!q.empty() && closing < 0) {
      const int u = q.front();
      q.pop();
      if (!best.empty() && dist[u] + 1 >= static_cast<int>(best.size())) break;
      for (int v : edges[u]) {
        if (v == s) {
          closing = u;
          break;
        }
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          q.push(v);
        }
      }
    }
    if (closing < 0) continue;
    std::vector<int> cycle;
    for (int u = closing; u >= 0; u = parent[u]) cycle.push_back(u);
    std::reverse(cycle.begin(), cycle.end());
    if (best.empty() || cycle.size() < best.size()) best = std::move(cycle);
    if (best.size() == 1) break;
  }
  return best;
}

int exact_max_independent(const std::vector<std::uint32_t>& conflict, std::uint32_t cand, int size, int best) {
  if (cand == 0) return std::max(size, best);
  if (size + std::popcount(cand) <= best) return best;
  const int v = std::countr_zero(cand);
  const std::uint32_t bit = 1u << v;
  best = exact_max_independent(conflict, cand & ~conflict[v] & ~bit, size + 1, best);
  return exact_max_independent(conflict, cand & ~bit, size, best);
}

}  // namespace

int min_pseudoorbit_period(const std::vector<Point>& points, double epsilon, int metric_depth, const Sft& sft) {
  if (points.empty()) throw Error(ErrorCode::PreconditionViolated, "no points");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::PreconditionViolated, "epsilon must be > 0");
  const auto cycle = shortest_cycle(pseudo_transition_graph(points, epsilon, metric_depth, sft));
  if (cycle.empty()) throw Error(ErrorCode::NoPseudoorbit, "epsilon-transition graph is acyclic");
  return static_cast<int>(cycle.size());
}

int max_separated_set(const std::vector<Point>& points, double epsilon, int metric_depth, const Sft& sft) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::PreconditionViolated, "epsilon must be > 0");
  const std::size_t n = points.size();
  if (n == 0) return 0;
  std::vector<std::vector<char>> close(n, std::vector<char>(n, 0));
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      close[i][j] = bowen_distance(sft, points[i], points[j], metric_depth) < epsilon;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) close[i][j] = close[j][i];

  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::none_of(chosen.begin(), chosen.end(), [&](std::size_t c) { return close[i][c]; })) chosen.push_back(i);
  }
  int greedy = static_cast<int>(chosen.size());
  if (n > 20) return greedy;
  std::vector<std::uint32_t> conflict(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && close[i][j]) conflict[i] |= 1u << j;
  const std::uint32_t all = n == 32 ? ~0u : ((1u << n) - 1u);
  return exact_max_independent(conflict, all, 0, greedy);
}

BqCheck bq_inequality_check(int m, double epsilon, const std::vector<Point>& points, const Sft& sft) {
  if (m < 1) throw Error(ErrorCode::PreconditionViolated, "m must be positive");
  int r = -1;
  try {
    r = min_pseudoorbit_period(points, epsilon, 1, sft);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPseudoorbit) throw;
  }
  if (r >= 0 && r <= m) {
    throw Error(ErrorCode::PreconditionViolated, "R(eps, d, T) = " + std::to_string(r) + " <= m = " + std::to_string(m));
  }
  BqCheck out{};
  out.min_period = r;
  out.separated_half = max_separated_set(points, 0.5 * epsilon, 1, sft);
  out.separated_bowen = max_separated_set(points, epsilon, m, sft);
  out.lhs = std::log(static_cast<double>(m));
  out.rhs = std::log(static_cast<double>(out.separated_half)) -
            std::log(static_cast<double>(out.separated_bowen)) / m + 1.0;
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

PeriodicWord closing_periodic_orbit(const std::vector<Point>& samples, int n, double tau, const Sft& sft) {
  if (samples.empty()) throw Error(ErrorCode::PreconditionViolated, "no samples");
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "n must be >= 1");
  const double eps = std::pow(static_cast<double>(n), -tau);
  // A transition closer than eps forces agreement on the window of radius
  // ceil((tau / lambda) log n) - 1, so the symbol-0 splice shadows exactly.
  const auto cycle = shortest_cycle(pseudo_transition_graph(samples, eps, 1, sft));
  if (cycle.empty() || static_cast<int>(cycle.size()) > n) {
    throw Error(ErrorCode::NotFound, "no periodic pseudoorbit of period <= " + std::to_string(n) + " at eps = n^-tau");
  }
  Word w;
  for (int i : cycle) w.push_back(samples[i][0]);
  return make_periodic_word(sft, w);
}

double orbit_distance_to_samples(const Sft& sft, const PeriodicWord& w, const std::vector<Point>& samples) {
  double worst = 0.0;
  const Point z = w.point();
  for (int i = 0; i < w.period(); ++i) {
    const Point zi = z.shifted(i);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : samples) best = std::min(best, distance(sft, zi, y));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace cocycle_lab
