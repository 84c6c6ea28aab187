#pragma once

// Two-sided subshifts of finite type and their computable points.
//
// A Point is a bi-infinite, eventually periodic sequence
//
//     ... L L L | core | R R R ...
//
// where the core starts at index -origin. Every fixed, periodic and homoclinic
// point used by the library has this form; equality, distance and the
// stable/unstable relations are decided exactly by comparing finitely many
// symbols.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cocycle_lab {

using Word = std::vector<int>;

Word parse_word(const std::string& text);
std::string format_word(const Word& w);

class Point {
 public:
  Point(Word left_period, Word core, Word right_period, long origin = 0);

  /// w^infinity with w[0] at index 0.
  static Point periodic(const Word& w);
  static Point fixed(int symbol) { return periodic(Word{symbol}); }
  /// The constant sequence `background` except for `word` placed at [start, start + |word|).
  static Point with_block(int background, const Word& word, long start);

  int operator[](long n) const;

  const Word& left_period() const { return left_; }
  const Word& core() const { return core_; }
  const Word& right_period() const { return right_; }
  long origin() const { return origin_; }

  /// Symbols at n < past_start() follow the left period.
  long past_start() const { return -origin_; }
  /// Symbols at n >= future_start() follow the right period.
  long future_start() const { return static_cast<long>(core_.size()) - origin_; }

  Point shifted(long n) const;

  /// Symbols on [from, to).
  Word symbols(long from, long to) const;

  std::string to_string() const;

  friend bool operator==(const Point& a, const Point& b);
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }

 private:
  Word left_, core_, right_;
  long origin_;
};

/// Smallest |n| with x_n != y_n, or nullopt if the sequences coincide.
std::optional<long> first_difference(const Point& x, const Point& y);

/// True when x_n = y_n for all sufficiently large (resp. small) n.
bool tails_agree_right(const Point& x, const Point& y);
bool tails_agree_left(const Point& x, const Point& y);

class Sft {
 public:
  Sft(int alphabet_size, std::vector<std::vector<int>> transitions, double lambda);

  static Sft full_shift(int alphabet_size, double lambda = 1.0);
  /// Two symbols with the block 11 forbidden.
  static Sft golden_mean(double lambda = 1.0);

  int alphabet_size() const { return n_; }
  double lambda() const { return lambda_; }
  const std::vector<std::vector<int>>& transitions() const { return t_; }
  bool allowed(int a, int b) const { return t_[a][b] != 0; }
  bool is_full_shift() const;

  bool admissible(const Word& w) const;
  bool cyclically_admissible(const Word& w) const;
  /// Throws PreconditionViolated naming the first bad junction.
  void validate(const Point& x) const;

  std::vector<int> successors(int a) const;
  std::vector<int> predecessors(int a) const;

  Sft with_lambda(double lambda) const { return Sft(n_, t_, lambda); }

  // Local product structure constants: eps0 = e^-lambda, 2 eps1 = eps0.
  double eps0() const;
  double eps1() const { return 0.5 * eps0(); }

 private:
  int n_;
  std::vector<std::vector<int>> t_;
  double lambda_;
};

/// A cyclically admissible word, stored as its lexicographically least rotation.
struct PeriodicWord {
  Word word;

  int period() const { return static_cast<int>(word.size()); }
  std::string to_string() const { return format_word(word); }
  Point point() const { return Point::periodic(word); }

  friend bool operator==(const PeriodicWord&, const PeriodicWord&) = default;
  friend auto operator<=>(const PeriodicWord& a, const PeriodicWord& b) {
    if (a.word.size() != b.word.size()) return a.word.size() <=> b.word.size();
    return a.word <=> b.word;
  }
};

Word least_rotation(const Word& w);
/// Shortest u with w = u^k.
Word primitive_root(const Word& w);
/// Canonical periodic word for w^infinity (primitive root, least rotation).
PeriodicWord make_periodic_word(const Sft& sft, const Word& w);

double distance(const Sft& sft, const Point& x, const Point& y);
/// d_{n,T}(x,y) = max_{0 <= i < n} d(T^i x, T^i y).
double bowen_distance(const Sft& sft, const Point& x, const Point& y, int depth);

Point shift(const Point& x, long n);

/// The point agreeing with `past` on (-inf, cut) and with `future` on [cut, inf).
Point splice(const Point& past, const Point& future, long cut = 0);

/// [x, y]: agrees with x for n <= 0 and with y for n >= 0. Requires x_0 = y_0.
Point bracket(const Sft& sft, const Point& x, const Point& y);

bool in_local_unstable(const Point& x, const Point& y);  // y in W^u_loc(x)
bool in_local_stable(const Point& x, const Point& y);    // y in W^s_loc(x)
bool on_stable_set(const Point& x, const Point& y);      // y in W^s(x)
bool on_unstable_set(const Point& x, const Point& y);    // y in W^u(x)

/// An admissible point whose symbols on [offset, offset + |w|) spell w; the tails
/// are the shortest admissible continuations into cycles.
Point extend_word(const Sft& sft, const Word& w, long offset = 0);

/// One representative (least rotation) per primitive cyclic class, sorted by
/// length then lexicographically.
std::vector<PeriodicWord> enumerate_periodic_words(const Sft& sft, int max_period);

/// Least k such that a periodic (epsilon, d_{depth}, T)-pseudoorbit of period k
/// exists among `points`. Throws NoPseudoorbit when there is none.
int min_pseudoorbit_period(const std::vector<Point>& points, double epsilon, int metric_depth, const Sft& sft);

/// Lower bound on the largest (epsilon, d_{depth})-separated subset; exact when
/// there are at most 20 points.
int max_separated_set(const std::vector<Point>& points, double epsilon, int metric_depth, const Sft& sft);

struct BqCheck {
  bool holds;
  double lhs;  // log m
  double rhs;  // log S(eps/2, d) - (1/m) log S(eps, d_m) + 1
  int min_period;  // R(eps, d, T); -1 when no periodic pseudoorbit exists
  int separated_half;
  int separated_bowen;
};

BqCheck bq_inequality_check(int m, double epsilon, const std::vector<Point>& points, const Sft& sft);

/// A periodic orbit of period <= n within n^-tau of the samples, obtained by
/// splicing the shortest periodic pseudoorbit among them.
PeriodicWord closing_periodic_orbit(const std::vector<Point>& samples, int n, double tau, const Sft& sft);

/// max over orbit points z of min over samples y of d(z, y).
double orbit_distance_to_samples(const Sft& sft, const PeriodicWord& w, const std::vector<Point>& samples);

}  // namespace cocycle_lab
