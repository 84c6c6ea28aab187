#include "cocycle_lab/spectral.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cocycle_lab {

namespace {

// Leaves affordable for estimate_beta without the caller asking for more.
constexpr double kBudgetLeaves = 1 << 22;

int affordable_length(const Cocycle& c, int budget, int extra_symbols) {
  int n = 0;
  while (n < budget && std::pow(static_cast<double>(c.base().alphabet_size()), n + 1 + extra_symbols) <= kBudgetLeaves) ++n;
  return std::max(n, 1);
}

}  // namespace

double beta_upper(const Cocycle& c, int n, const NormField& norm) {
  return std::log(max_word_norm_parallel(c, n, norm).value) / n;
}

std::vector<PeriodicExponent> periodic_exponents(const Cocycle& c, int max_period) {
  const auto words = enumerate_periodic_words(c.base(), max_period);
  const auto ex = periodic_exponents_parallel(c, words);
  std::vector<PeriodicExponent> out;
  out.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) out.push_back({words[i], ex[i]});
  return out;
}

PeriodicExponent beta_lower_periodic(const Cocycle& c, int max_period) {
  if (max_period < 1) throw Error(ErrorCode::PreconditionViolated, "max_period must be >= 1");
  const auto all = periodic_exponents(c, max_period);
  PeriodicExponent best = all.front();
  for (const auto& e : all)
    if (e.exponent > best.exponent) best = e;
  return best;
}

BetaBracket estimate_beta(const Cocycle& c, int budget, const std::optional<NormField>& extra) {
  if (budget < 1) throw Error(ErrorCode::PreconditionViolated, "budget must be >= 1");
  BetaBracket b{};
  const auto low = beta_lower_periodic(c, affordable_length(c, budget, 0));
  b.lower = low.exponent;
  b.lower_witness = low.word;
  b.n_lower = low.word.period();

  std::vector<NormField> norms{NormField::euclidean()};
  if (c.dimension() >= 1) norms.push_back(NormField::max());
  if (extra) norms.push_back(*extra);
  const int n_up = affordable_length(c, budget, 2 * c.radius());
  b.upper = std::numeric_limits<double>::infinity();
  for (const auto& norm : norms) {
    for (int n = 1; n <= n_up; ++n) {
      const auto m = max_word_norm_parallel(c, n, norm);
      const double u = std::log(m.value) / n;
      if (u < b.upper) {
        b.upper = u;
        b.n_upper = n;
        b.upper_witness = m.word;
        b.upper_norm = norm.name();
      }
    }
  }
  return b;
}

std::vector<BergerWangRow> berger_wang_table(const Cocycle& c, int max_period) {
  return berger_wang_table(c, max_period, estimate_beta(c, max_period).upper);
}

std::vector<BergerWangRow> berger_wang_table(const Cocycle& c, int max_period, double upper) {
  if (max_period < 1) throw Error(ErrorCode::PreconditionViolated, "max_period must be >= 1");
  const auto all = periodic_exponents(c, max_period);
  std::vector<BergerWangRow> rows;
  std::size_t i = 0;
  PeriodicExponent best = all.front();
  for (int n = 1; n <= max_period; ++n) {
    for (; i < all.size() && all[i].word.period() <= n; ++i)
      if (all[i].exponent > best.exponent) best = all[i];
    rows.push_back({n, best.exponent, upper - best.exponent, best.word});
  }
  return rows;
}

std::vector<double> lyapunov_spectrum_periodic(const Cocycle& c, const PeriodicWord& w) {
  if (!c.base().cyclically_admissible(w.word)) throw Error(ErrorCode::PreconditionViolated, "word is not cyclically admissible");
  const int d = c.dimension();
  const int n = w.period();
  const Point x = w.point();
  std::vector<Matrix> factors;
  for (int i = 0; i < n; ++i) factors.push_back(c.generator(x.shifted(i)));
  // Partial sums chi_1 + ... + chi_q = (1/n) log rho(wedge^q of the cycle product),
  // with the product renormalized at every step; q = d through determinants.
  std::vector<double> partial(d + 1, 0.0);
  for (int q = 1; q < d; ++q) {
    Matrix prod = Matrix::Identity(binomial(d, q), binomial(d, q));
    double log_scale = 0.0;
    for (const auto& f : factors) {
      prod = exterior_power(f, q) * prod;
      const double s = prod.norm();
      prod /= s;
      log_scale += std::log(s);
    }
    partial[q] = (log_scale + std::log(spectral_radius(prod))) / n;
  }
  for (const auto& f : factors) partial[d] += std::log(std::abs(f.determinant()));
  partial[d] /= n;
  std::vector<double> out;
  for (int q = 1; q <= d; ++q) out.push_back(partial[q] - partial[q - 1]);
  return out;
}

GrowthFit polynomial_growth_fit(const Cocycle& c, double beta, int n_max, const NormField& norm) {
  if (n_max < 2) throw Error(ErrorCode::PreconditionViolated, "n_max must be >= 2");
  GrowthFit f{};
  std::vector<double> xs, ys;
  for (int n = 1; n <= n_max; ++n) {
    const double e = std::log(max_word_norm_parallel(c, n, norm).value) - n * beta;
    f.excess.push_back(e);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(e);
  }
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  f.degree = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  f.log_c = (sy - f.degree * sx) / k;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - f.degree * xs[i] - f.log_c;
    ss += r * r;
  }
  f.residual = std::sqrt(ss / k);
  return f;
}

LipschitzBeta lipschitz_beta_test(const Cocycle& c1, const Cocycle& c2, int budget) {
  if (c1.dimension() != c2.dimension() || c1.radius() != c2.radius() ||
      c1.base().transitions() != c2.base().transitions()) {
    throw Error(ErrorCode::DimensionMismatch, "cocycles must share base, radius and dimension");
  }
  if (c1.radius() == 0) {
    if (!check_irreducible_onestep(c1.one_step_matrices()) || !check_irreducible_onestep(c2.one_step_matrices())) {
      throw Error(ErrorCode::PreconditionViolated, "both cocycles must be irreducible");
    }
  }
  LipschitzBeta r{};
  r.beta1 = estimate_beta(c1, budget).midpoint();
  r.beta2 = estimate_beta(c2, budget).midpoint();
  r.exp_beta_gap = std::abs(std::exp(r.beta1) - std::exp(r.beta2));
  for (const auto& w : c1.windows()) r.distance = std::max(r.distance, operator_norm2(c1.matrix(w) - c2.matrix(w)));
  r.ratio = r.distance == 0.0 ? 0.0 : r.exp_beta_gap / r.distance;
  return r;
}

}  // namespace cocycle_lab
