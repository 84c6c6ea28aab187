#pragma once

// Two-sided estimates of the maximal Lyapunov exponent beta.
//
//   upper:  (1/n) log max_{|w| = n} |Phi_w|  (any constant norm; Fekete)
//   lower:  max over periodic words of (1/|w|) log rho(Phi_w)

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/norms.hpp"

#include <optional>
#include <vector>

namespace cocycle_lab {

double beta_upper(const Cocycle& c, int n, const NormField& norm = NormField::euclidean());

struct PeriodicExponent {
  PeriodicWord word;
  double exponent;
};

/// All primitive periodic words up to max_period with their top exponents.
std::vector<PeriodicExponent> periodic_exponents(const Cocycle& c, int max_period);

/// beta_n = max over periodic words of period <= max_period; the witness is the
/// first maximizer in (length, lex) order.
PeriodicExponent beta_lower_periodic(const Cocycle& c, int max_period);

struct BetaBracket {
  double lower;
  double upper;
  int n_lower;  // period of the lower witness
  int n_upper;  // word length of the best upper bound
  PeriodicWord lower_witness;
  Word upper_witness;
  std::string upper_norm;
  double midpoint() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
};

/// Lower bound from periods <= budget, upper bound minimized over n <= budget and
/// the norms {Euclidean, max, extra}. Both sides are clamped to what fits the
/// enumeration cap.
BetaBracket estimate_beta(const Cocycle& c, int budget, const std::optional<NormField>& extra = std::nullopt);

struct BergerWangRow {
  int n;
  double beta_n;
  double gap;  // upper - beta_n
  PeriodicWord witness;
};

/// beta_n for n = 1..max_period against the best upper bound up to the same length.
std::vector<BergerWangRow> berger_wang_table(const Cocycle& c, int max_period);
std::vector<BergerWangRow> berger_wang_table(const Cocycle& c, int max_period, double upper);

/// chi_1 >= ... >= chi_d along the periodic orbit of w.
std::vector<double> lyapunov_spectrum_periodic(const Cocycle& c, const PeriodicWord& w);

struct GrowthFit {
  double degree;
  double log_c;
  double residual;  // root mean square
  std::vector<double> excess;  // log sup |Phi^n| - n beta for n = 1..n_max
};

GrowthFit polynomial_growth_fit(const Cocycle& c, double beta, int n_max, const NormField& norm = NormField::euclidean());

struct LipschitzBeta {
  double exp_beta_gap;  // |e^beta1 - e^beta2|
  double distance;      // max over windows of the difference
  double ratio;         // 0 when both vanish
  double beta1, beta2;
};

LipschitzBeta lipschitz_beta_test(const Cocycle& c1, const Cocycle& c2, int budget);

}  // namespace cocycle_lab
