#include "cocycle_lab/mather.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cocycle_lab {

MatherApprox mather_set_approx(const Cocycle& c, int p, int max_period, double tol) {
  const int d = c.dimension();
  if (p < 1 || p > d) throw Error(ErrorCode::PreconditionViolated, "need 1 <= p <= d");
  const auto words = enumerate_periodic_words(c.base(), max_period);
  std::vector<std::vector<double>> spectra(words.size());
  std::vector<double> wedge(words.size());
  const long n = static_cast<long>(words.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    spectra[i] = lyapunov_spectrum_periodic(c, words[i]);
    wedge[i] = std::log(spectral_radius(exterior_power(c.cycle_product(words[i]), p))) / words[i].period();
  }
  MatherApprox out{p, {}, {}, tol, -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (long i = 0; i < n; ++i) {
    out.beta_used = std::max(out.beta_used, spectra[i][0]);
    out.beta_wedge = std::max(out.beta_wedge, wedge[i]);
  }
  for (long i = 0; i < n; ++i) {
    bool keep = true;
    for (int j = 0; j < p; ++j) keep = keep && spectra[i][j] >= out.beta_used - tol;
    // An orbit in M_p also maximizes the p-th exterior power.
    if (p >= 2) keep = keep && wedge[i] >= out.beta_wedge - p * tol;
    if (keep) {
      out.orbits.push_back(words[i]);
      out.spectra.push_back(spectra[i]);
    }
  }
  if (out.orbits.empty()) throw Error(ErrorCode::Empty, "no periodic orbit up to the given period is in M_" + std::to_string(p));
  return out;
}

SplittingFit splitting_fit(const Cocycle& c, const std::vector<Point>& samples, int p, int n_max) {
  const int d = c.dimension();
  if (p < 1 || p >= d) throw Error(ErrorCode::PreconditionViolated, "need 1 <= p < d");
  if (samples.empty()) throw Error(ErrorCode::PreconditionViolated, "no samples");
  if (n_max < 2) throw Error(ErrorCode::PreconditionViolated, "n_max must be >= 2");
  SplittingFit f{};
  f.max_log_ratio.assign(n_max, -std::numeric_limits<double>::infinity());
  // log(s_{p+1} / s_p) = L_{p+1} - 2 L_p + L_{p-1} with L_q = log |wedge^q Phi^n|, each
  // a top singular value of a renormalized product, so tiny ratios stay accurate.
  for (const auto& x : samples) {
    std::vector<Matrix> prod;
    std::vector<double> log_scale(3, 0.0);
    for (int q = p - 1; q <= p + 1; ++q) prod.push_back(Matrix::Identity(binomial(d, q), binomial(d, q)));
    for (int n = 1; n <= n_max; ++n) {
      const Matrix& g = c.generator(x.shifted(n - 1));
      double l[3];
      for (int k = 0; k < 3; ++k) {
        const int q = p - 1 + k;
        if (q > 0) prod[k] = exterior_power(g, q) * prod[k];
        const double s = operator_norm2(prod[k]);
        prod[k] /= s;
        log_scale[k] += std::log(s);
        l[k] = log_scale[k];
      }
      f.max_log_ratio[n - 1] = std::max(f.max_log_ratio[n - 1], l[2] - 2.0 * l[1] + l[0]);
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = n_max;
  for (int n = 1; n <= n_max; ++n) {
    const double y = f.max_log_ratio[n - 1];
    sx += n;
    sy += y;
    sxx += static_cast<double>(n) * n;
    sxy += n * y;
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / k;
  double ss_res = 0, ss_tot = 0;
  f.below_line = true;
  for (int n = 1; n <= n_max; ++n) {
    const double y = f.max_log_ratio[n - 1];
    const double fit = intercept + slope * n;
    ss_res += (y - fit) * (y - fit);
    ss_tot += (y - sy / k) * (y - sy / k);
    if (y > fit + 0.5) f.below_line = false;
  }
  f.tau = -slope;
  f.c = std::exp(intercept);
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);
  return f;
}

Matrix dominating_subspace(const Cocycle& c, const Point& x, int p, int n) {
  const Matrix prod = cocycle_product(c, x.shifted(-n), n);
  Eigen::JacobiSVD<Matrix> svd(prod, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(p);
}

std::optional<SplittingReport> dominated_splitting_test(const Cocycle& c, const std::vector<Point>& samples, int p, int n_max) {
  const auto f = splitting_fit(c, samples, p, n_max);
  if (!(f.tau > 0.0) || f.r_squared < 0.9 || !f.below_line) return std::nullopt;
  SplittingReport rep{p, f.tau, f.c, f.r_squared, f.max_log_ratio, samples, {}};
  for (const auto& x : samples) rep.subspaces.push_back(dominating_subspace(c, x, p, n_max));
  return rep;
}

bool calibrated_check(const Cocycle& c, const NormField& norm, double beta, const Point& x, const Vector& u, int n_window) {
  if (u.size() != c.dimension()) throw Error(ErrorCode::DimensionMismatch, "vector size does not match the cocycle");
  if (u.isZero(0.0)) return true;
  const double base = norm(x, u);
  for (int n = -n_window; n <= n_window; ++n) {
    const Vector v = cocycle_product(c, x, n) * u;
    const double expect = std::exp(n * beta) * base;
    if (std::abs(norm(x.shifted(n), v) - expect) > 1e-6 * expect) return false;
  }
  return true;
}

namespace {

std::set<Word> cyclic_blocks(const Word& w, int len) {
  std::set<Word> out;
  const int k = static_cast<int>(w.size());
  for (int i = 0; i < k; ++i) {
    Word b;
    for (int j = 0; j < len; ++j) b.push_back(w[(i + j) % k]);
    out.insert(std::move(b));
  }
  return out;
}

}  // namespace

SubordinationReport subordination_check(const Cocycle& c, const MatherApprox& mather,
                                        const std::vector<PeriodicWord>& extra_orbits, int block_length) {
  if (block_length < 1) throw Error(ErrorCode::PreconditionViolated, "block_length must be >= 1");
  std::set<Word> support;
  for (const auto& w : mather.orbits) {
    const auto b = cyclic_blocks(w.word, block_length);
    support.insert(b.begin(), b.end());
  }
  SubordinationReport rep;
  for (const auto& w : extra_orbits) {
    const double chi = lyapunov_spectrum_periodic(c, w)[0];
    rep.exponents.push_back(chi);
    const auto blocks = cyclic_blocks(w.word, block_length);
    const bool inside = std::all_of(blocks.begin(), blocks.end(), [&](const Word& b) { return support.count(b) > 0; });
    if (!inside) {
      rep.outside_support.push_back(w);
    } else if (std::abs(chi - mather.beta_used) > mather.tol) {
      rep.violations.push_back(w);
    } else {
      rep.passed.push_back(w);
    }
  }
  return rep;
}

double NonSpaceExample::f(const Point& y) const {
  const auto k = first_difference(y, Point::fixed(0));
  return k ? std::exp(-lambda * theta * static_cast<double>(*k)) : 0.0;
}

Cocycle NonSpaceExample::truncated(int r) const {
  if (r < 0) throw Error(ErrorCode::PreconditionViolated, "r must be >= 0");
  std::map<Word, Matrix> table;
  const int len = 2 * r + 1;
  for (long code = 0; code < (1L << len); ++code) {
    Word w(len);
    long k = -1;
    for (int i = 0; i < len; ++i) {
      w[i] = static_cast<int>((code >> (len - 1 - i)) & 1);
      const long dist = std::abs(i - r);
      if (w[i] && (k < 0 || dist < k)) k = dist;
    }
    const double fv = k < 0 ? 0.0 : std::exp(-lambda * theta * static_cast<double>(k));
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = std::exp(-fv);
    table.emplace(std::move(w), std::move(m));
  }
  return Cocycle(base(), r, table);
}

ConeSlope calibrated_cone_slope(const NonSpaceExample& ex, const Point& x, int n_terms) {
  const Point x0 = Point::fixed(0);
  if (!on_unstable_set(x0, x)) throw Error(ErrorCode::NotOnUnstableSet, "x is not on the unstable set of 0^inf");
  if (n_terms < 0) throw Error(ErrorCode::PreconditionViolated, "n_terms must be >= 0");
  const auto a = earliest_difference(x, x0);
  if (!a) return {1.0, 1.0, 0.0};
  // For n >= -a every nonzero symbol of T^-n x sits at a position >= a + n >= 0, so
  // f(T^-n x) = e^{-lambda theta (a + n)} and the rest of the series is geometric.
  const long geometric_from = std::max(1L, -*a);
  const long direct = std::max<long>(n_terms, geometric_from - 1);
  double partial = 0.0, total = 0.0;
  for (long n = 1; n <= direct; ++n) {
    const double term = ex.f(x.shifted(-n));
    total += term;
    if (n <= n_terms) partial += term;
  }
  const double rate = ex.lambda * ex.theta;
  total += std::exp(-rate * static_cast<double>(*a + direct + 1)) / (1.0 - std::exp(-rate));
  return {std::exp(total), std::exp(partial), total - partial};
}

}  // namespace cocycle_lab
