#include "cocycle_lab/cocycle.hpp"

#include "cocycle_lab/error.hpp"

#include <cmath>
#include <random>

namespace cocycle_lab {

namespace {

constexpr long kMaxTableSize = 1L << 22;

std::vector<Word> admissible_words(const Sft& sft, int length) {
  std::vector<Word> out;
  Word w;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(w.size()) == length) {
      out.push_back(w);
      return;
    }
    for (int s = 0; s < sft.alphabet_size(); ++s) {
      if (!w.empty() && !sft.allowed(w.back(), s)) continue;
      w.push_back(s);
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
  return out;
}

}  // namespace

Cocycle::Cocycle(Sft base, int radius, const std::map<Word, Matrix>& table) : base_(std::move(base)), r_(radius) {
  if (r_ < 0) throw Error(ErrorCode::InvalidConfig, "r: step radius must be >= 0");
  const double size = std::pow(static_cast<double>(base_.alphabet_size()), window_length());
  if (size > static_cast<double>(kMaxTableSize)) throw Error(ErrorCode::TooLarge, "window table too large");
  if (table.empty()) throw Error(ErrorCode::InvalidConfig, "entries: empty cocycle table");
  d_ = static_cast<int>(table.begin()->second.rows());
  if (d_ < 1) throw Error(ErrorCode::InvalidConfig, "entries: dimension must be >= 1");
  windows_ = admissible_words(base_, window_length());
  table_.assign(static_cast<std::size_t>(size), std::nullopt);
  inverse_.assign(static_cast<std::size_t>(size), std::nullopt);
  for (const auto& [w, m] : table) {
    const std::string key = "entries." + format_word(w);
    if (static_cast<int>(w.size()) != window_length() || !base_.admissible(w)) {
      throw Error(ErrorCode::InvalidConfig, key + ": not an admissible window of length " + std::to_string(window_length()));
    }
    if (m.rows() != d_ || m.cols() != d_) throw Error(ErrorCode::InvalidConfig, key + ": expected a square matrix of size d");
    if (!m.allFinite()) throw Error(ErrorCode::InvalidConfig, key + ": non-finite entry");
    const long code = window_code(w);
    table_[code] = m;
    try {
      inverse_[code] = checked_inverse(m);
    } catch (const Error&) {
      throw Error(ErrorCode::SingularMatrix, key + ": matrix is not invertible within the condition cap");
    }
  }
  for (const auto& w : windows_) {
    if (!table_[window_code(w)]) throw Error(ErrorCode::InvalidConfig, "entries: missing window " + format_word(w));
  }
}

Cocycle Cocycle::one_step(std::vector<Matrix> matrices, double lambda) {
  const Sft base = Sft::full_shift(static_cast<int>(matrices.size()), lambda);
  return one_step(base, std::move(matrices));
}

Cocycle Cocycle::one_step(const Sft& base, std::vector<Matrix> matrices) {
  if (static_cast<int>(matrices.size()) != base.alphabet_size()) {
    throw Error(ErrorCode::InvalidConfig, "one-step cocycle needs one matrix per symbol");
  }
  std::map<Word, Matrix> t;
  for (int s = 0; s < base.alphabet_size(); ++s) t.emplace(Word{s}, std::move(matrices[s]));
  return Cocycle(base, 0, t);
}

long Cocycle::window_code(const Word& window) const {
  long code = 0;
  for (int s : window) code = code * base_.alphabet_size() + s;
  return code;
}

const Matrix& Cocycle::matrix(const Word& window) const {
  const auto& m = table_.at(window_code(window));
  if (!m) throw Error(ErrorCode::PreconditionViolated, "inadmissible window " + format_word(window));
  return *m;
}

const Matrix& Cocycle::inverse(const Word& window) const {
  const auto& m = inverse_.at(window_code(window));
  if (!m) throw Error(ErrorCode::PreconditionViolated, "inadmissible window " + format_word(window));
  return *m;
}

const Matrix& Cocycle::generator(const Point& x) const { return matrix(x.symbols(-r_, r_ + 1)); }
const Matrix& Cocycle::generator_inverse(const Point& x) const { return inverse(x.symbols(-r_, r_ + 1)); }

std::vector<Matrix> Cocycle::one_step_matrices() const {
  if (r_ != 0) throw Error(ErrorCode::PreconditionViolated, "cocycle is not one-step");
  std::vector<Matrix> out;
  for (int s = 0; s < base_.alphabet_size(); ++s) out.push_back(*table_[s]);
  return out;
}

Matrix Cocycle::word_product(const Word& w) const {
  const int steps = static_cast<int>(w.size()) - 2 * r_;
  if (steps < 0) throw Error(ErrorCode::PreconditionViolated, "word shorter than one window");
  Matrix p = Matrix::Identity(d_, d_);
  for (int i = 0; i < steps; ++i) {
    const Word win(w.begin() + i, w.begin() + i + window_length());
    p = matrix(win) * p;
  }
  return p;
}

Matrix Cocycle::cycle_product(const PeriodicWord& w) const {
  return cocycle_product(*this, w.point(), w.period());
}

double Cocycle::sup_norm() const {
  double s = 0.0;
  for (const auto& w : windows_) s = std::max(s, operator_norm2(matrix(w)));
  return s;
}

Matrix cocycle_product(const Cocycle& c, const Point& x, long n) {
  const int d = c.dimension();
  Matrix p = Matrix::Identity(d, d);
  if (n >= 0) {
    for (long i = 0; i < n; ++i) p = c.generator(x.shifted(i)) * p;
  } else {
    for (long i = 1; i <= -n; ++i) p = c.generator_inverse(x.shifted(-i)) * p;
  }
  return p;
}

BunchingReport fiber_bunching_check(const Cocycle& c, double theta) {
  if (!(theta > 0.0)) throw Error(ErrorCode::PreconditionViolated, "theta must be > 0");
  BunchingReport r{};
  r.theta = theta;
  r.max_log_bolicity = 0.0;
  for (const auto& w : c.windows()) r.max_log_bolicity = std::max(r.max_log_bolicity, std::log(bolicity(c.matrix(w))));
  const double lambda = c.base().lambda();
  r.threshold = theta * lambda;
  r.margin = r.threshold - r.max_log_bolicity;
  r.fiber_bunched = r.margin > 0.0;
  r.strong_threshold = theta * lambda / 3.0;
  r.strongly_bunched = c.dimension() <= 2 ? r.fiber_bunched : (r.max_log_bolicity < r.strong_threshold);
  return r;
}

// ---------------------------------------------------------------------------
// Irreducibility

namespace {

// Orthogonalize `v` against `basis` (twice) and return the residual.
Vector residual_against(const std::vector<Vector>& basis, Vector v) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) v -= b.dot(v) * b;
  return v;
}

std::vector<Matrix> algebra_basis(const std::vector<Matrix>& matrices, double tol) {
  const int d = static_cast<int>(matrices.front().rows());
  std::vector<Matrix> gens;
  for (const auto& m : matrices) {
    const double n = m.norm();
    if (n > 0.0) gens.push_back(m / n);
  }
  std::vector<Vector> flat;
  std::vector<Matrix> basis;
  auto try_add = [&](const Matrix& m) {
    Vector v = Eigen::Map<const Vector>(m.data(), m.size());
    const double scale = v.norm();
    if (scale == 0.0) return false;
    Vector r = residual_against(flat, v / scale);
    if (r.norm() <= tol) return false;
    r.normalize();
    flat.push_back(r);
    basis.push_back(Eigen::Map<const Matrix>(r.data(), d, d));
    return true;
  };
  try_add(Matrix::Identity(d, d));
  for (std::size_t i = 0; i < basis.size() && static_cast<int>(basis.size()) < d * d; ++i) {
    for (const auto& g : gens) {
      const Matrix prod = g * basis[i];
      try_add(prod);
    }
  }
  return basis;
}

int numerical_rank(const Matrix& m, double rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

Matrix null_space(const Matrix& m, double rel) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * std::max(top, 1e-300)) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

int orbit_span_rank(const std::vector<Matrix>& basis, const Vector& v, bool transpose) {
  const int d = static_cast<int>(v.size());
  Matrix cols(d, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = transpose ? Vector(basis[i].transpose() * v) : Vector(basis[i] * v);
  return numerical_rank(cols, 1e-9);
}

// d = 2: reducible iff the matrices share a real eigenvector.
bool irreducible2(const std::vector<Matrix>& matrices) {
  const Matrix* pivot = nullptr;
  for (const auto& m : matrices) {
    const double off = std::abs(m(0, 1)) + std::abs(m(1, 0)) + std::abs(m(0, 0) - m(1, 1));
    if (off > 1e-12 * std::max(1.0, m.norm())) {
      pivot = &m;
      break;
    }
  }
  if (!pivot) return false;  // all scalar: every line is invariant
  const Matrix& a = *pivot;
  const double tr = a.trace(), det = a.determinant();
  const double disc = 0.25 * tr * tr - det;
  if (disc < -1e-14 * std::max(1.0, tr * tr)) return true;  // no real eigenvector
  const double root = std::sqrt(std::max(disc, 0.0));
  std::vector<Vector> lines;
  for (double lam : {0.5 * tr + root, 0.5 * tr - root}) {
    const Matrix b = a - lam * Matrix::Identity(2, 2);
    Vector v = null_space(b, 1e-7).col(0);
    lines.push_back(v.normalized());
  }
  for (const auto& v : lines) {
    bool common = true;
    for (const auto& m : matrices) {
      const Vector w = m * v;
      const double cross = v(0) * w(1) - v(1) * w(0);
      if (std::abs(cross) > 1e-9 * std::max(1.0, m.norm())) {
        common = false;
        break;
      }
    }
    if (common) return false;
  }
  return true;
}

// Division-algebra test on the commutant of the generated algebra.
bool commutant_is_division(const std::vector<Matrix>& gens, int d, std::mt19937_64& rng) {
  // Solve A X - X A = 0 for all generators: (I kron A - A^T kron I) vec X = 0.
  Matrix sys(static_cast<Eigen::Index>(gens.size()) * d * d, d * d);
  const Matrix id = Matrix::Identity(d, d);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    Matrix block = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        block.block(i * d, j * d, d, d) += id(i, j) * gens[g];
        block.block(i * d, j * d, d, d) -= gens[g](j, i) * id;
      }
    sys.block(static_cast<Eigen::Index>(g) * d * d, 0, d * d, d * d) = block;
  }
  const Matrix ns = null_space(sys, 1e-9);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 10; ++trial) {
    Vector coeff(ns.cols());
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) = gauss(rng);
    const Vector vecx = ns * coeff;
    const Matrix x = Eigen::Map<const Matrix>(vecx.data(), d, d);
    const double scale = x.norm();
    const bool scalar = (x - (x.trace() / d) * id).norm() <= 1e-9 * scale;
    if (scalar) continue;
    Eigen::EigenSolver<Matrix> es(x, false);
    const auto ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i).imag()) <= 1e-9 * scale) return false;  // real eigenvalue, non-scalar
      if (std::abs(std::abs(ev(i)) - std::abs(ev(0))) > 1e-7 * scale ||
          std::abs(std::abs(ev(i).real()) - std::abs(ev(0).real())) > 1e-7 * scale) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int algebra_dimension(const std::vector<Matrix>& matrices, double tol) {
  if (matrices.empty()) throw Error(ErrorCode::PreconditionViolated, "no matrices");
  return static_cast<int>(algebra_basis(matrices, tol).size());
}

bool check_irreducible_onestep(const std::vector<Matrix>& matrices) {
  if (matrices.empty()) throw Error(ErrorCode::PreconditionViolated, "no matrices");
  const int d = static_cast<int>(matrices.front().rows());
  for (const auto& m : matrices)
    if (m.rows() != d || m.cols() != d) throw Error(ErrorCode::DimensionMismatch, "matrices must share a dimension");
  if (d == 1) return true;
  if (d == 2) return irreducible2(matrices);
  const auto basis = algebra_basis(matrices, 1e-9);
  if (static_cast<int>(basis.size()) == d * d) return true;

  // Norton's criterion on random algebra elements whose eigen-factor has minimal nullity.
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  const Matrix id = Matrix::Identity(d, d);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix a = Matrix::Zero(d, d);
    for (const auto& b : basis) a += gauss(rng) * b;
    Eigen::EigenSolver<Matrix> es(a, false);
    const auto ev = es.eigenvalues();
    const double scale = std::max(a.norm(), 1e-300);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const bool real = std::abs(ev(i).imag()) <= 1e-9 * scale;
      if (!real && ev(i).imag() < 0) continue;
      const Matrix q = real ? Matrix(a - ev(i).real() * id)
                            : Matrix(a * a - 2.0 * ev(i).real() * a + std::norm(ev(i)) * id);
      const int degree = real ? 1 : 2;
      const Matrix ker = null_space(q, 1e-8);
      if (ker.cols() != degree) continue;
      if (orbit_span_rank(basis, ker.col(0), false) < d) return false;
      const Matrix kert = null_space(q.transpose(), 1e-8);
      if (kert.cols() < 1) continue;
      if (orbit_span_rank(basis, kert.col(0), true) < d) return false;
      return true;
    }
  }
  return commutant_is_division(matrices, d, rng);
}

InvariantSplit split_by_invariant_subspace(const std::vector<Matrix>& matrices, const Matrix& subspace) {
  if (matrices.empty()) throw Error(ErrorCode::PreconditionViolated, "no matrices");
  const int d = static_cast<int>(matrices.front().rows());
  if (subspace.rows() != d) throw Error(ErrorCode::DimensionMismatch, "subspace basis has wrong ambient dimension");
  InvariantSplit out;
  out.basis = orthonormal_basis(subspace);
  if (out.basis.cols() == 0) throw Error(ErrorCode::PreconditionViolated, "subspace is trivial");
  out.complement = orthogonal_complement(out.basis);
  const Matrix proj_out = Matrix::Identity(d, d) - out.basis * out.basis.transpose();
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const Matrix& m = matrices[i];
    const double leak = (proj_out * m * out.basis).norm();
    if (leak > 1e-10 * std::max(1.0, m.norm())) {
      throw Error(ErrorCode::NotInvariant, "matrix " + std::to_string(i) + " moves the subspace by " + std::to_string(leak));
    }
    out.restricted.push_back(out.basis.transpose() * m * out.basis);
    if (out.complement.cols() > 0) out.quotient.push_back(out.complement.transpose() * m * out.complement);
  }
  return out;
}

}  // namespace cocycle_lab
