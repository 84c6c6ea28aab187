#pragma once

// Locally constant linear cocycles over a subshift of finite type.
//
// The generator F(x) depends on the window x_{-r} .. x_r; the table holds one
// invertible d x d matrix per admissible window. Products along orbits are
//
//     Phi^n_x = F(T^{n-1} x) ... F(T x) F(x),   Phi^{-n}_x = (Phi^n_{T^{-n} x})^{-1}.

#include "cocycle_lab/linalg.hpp"
#include "cocycle_lab/symbolic.hpp"

#include <map>
#include <optional>
#include <vector>

namespace cocycle_lab {

class Cocycle {
 public:
  Cocycle(Sft base, int radius, const std::map<Word, Matrix>& table);

  /// F(x) = A_{x_0} over the full shift on matrices.size() symbols.
  static Cocycle one_step(std::vector<Matrix> matrices, double lambda = 1.0);
  static Cocycle one_step(const Sft& base, std::vector<Matrix> matrices);

  int dimension() const { return d_; }
  int radius() const { return r_; }
  int window_length() const { return 2 * r_ + 1; }
  const Sft& base() const { return base_; }

  /// Admissible windows in lexicographic order.
  const std::vector<Word>& windows() const { return windows_; }
  const Matrix& matrix(const Word& window) const;
  const Matrix& inverse(const Word& window) const;

  /// Index into the dense window table (base-N code); -1 for inadmissible windows.
  long window_code(const Word& window) const;
  const Matrix& matrix_by_code(long code) const { return *table_[code]; }
  long table_size() const { return static_cast<long>(table_.size()); }

  const Matrix& generator(const Point& x) const;
  const Matrix& generator_inverse(const Point& x) const;

  /// The one-step generators A_0..A_{N-1}; requires radius 0.
  std::vector<Matrix> one_step_matrices() const;

  /// Product over a finite admissible word of length n + 2r, covering n steps:
  /// F(window at r + n - 1) ... F(window at r).
  Matrix word_product(const Word& w) const;

  /// Product once around the periodic orbit of w.
  Matrix cycle_product(const PeriodicWord& w) const;

  /// max over windows of the Euclidean operator norm.
  double sup_norm() const;

  /// Same base and radius with every matrix replaced by f(matrix).
  template <class F>
  Cocycle map(F&& f) const {
    std::map<Word, Matrix> t;
    for (const auto& w : windows_) t.emplace(w, f(matrix(w)));
    return Cocycle(base_, r_, t);
  }

 private:
  Sft base_;
  int r_;
  int d_ = 0;
  std::vector<Word> windows_;
  std::vector<std::optional<Matrix>> table_;
  std::vector<std::optional<Matrix>> inverse_;
};

/// Phi^n_x (n may be negative).
Matrix cocycle_product(const Cocycle& c, const Point& x, long n);

struct BunchingReport {
  double theta;
  double max_log_bolicity;
  double threshold;  // theta * lambda
  double margin;     // threshold - max_log_bolicity
  bool fiber_bunched;
  double strong_threshold;  // eta0 * lambda with eta0 = theta / 3
  bool strongly_bunched;    // d <= 2: fiber_bunched; d >= 3: (eta0, theta)-bunched
};

BunchingReport fiber_bunching_check(const Cocycle& c, double theta);

/// Dimension of the algebra spanned by all products of the matrices (identity included).
int algebra_dimension(const std::vector<Matrix>& matrices, double tol = 1e-9);

/// No common invariant proper real subspace.
bool check_irreducible_onestep(const std::vector<Matrix>& matrices);

struct InvariantSplit {
  Matrix basis;             // orthonormal basis of F
  Matrix complement;        // orthonormal basis of F-perp
  std::vector<Matrix> restricted;  // action on F
  std::vector<Matrix> quotient;    // projected action on F-perp (empty when F is everything)
};

/// Throws NotInvariant when some matrix moves F by more than 1e-10.
InvariantSplit split_by_invariant_subspace(const std::vector<Matrix>& matrices, const Matrix& subspace);

}  // namespace cocycle_lab
