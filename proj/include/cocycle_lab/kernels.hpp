#pragma once

// Word-enumeration kernels. Each has a serial reference implementation and an
// OpenMP version; both return identical results (ties broken by the
// lexicographically smallest word), which the tests and the benchmark compare.

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/norms.hpp"

#include <vector>

namespace cocycle_lab {

struct WordMax {
  double value = 0.0;  // max over admissible words of the operator norm of the product
  Word word;           // lexicographically smallest maximizer (length n + 2r)
};

/// Branch-and-bound over admissible words covering n steps; `norm` must be constant.
/// Throws TooLarge when N^{n+2r} > 1e8 or n > 4096.
WordMax max_word_norm_serial(const Cocycle& c, int n, const NormField& norm);
WordMax max_word_norm_parallel(const Cocycle& c, int n, const NormField& norm);

/// (1/|w|) log rho(cycle product) for each word.
std::vector<double> periodic_exponents_serial(const Cocycle& c, const std::vector<PeriodicWord>& words);
std::vector<double> periodic_exponents_parallel(const Cocycle& c, const std::vector<PeriodicWord>& words);

/// One step of the Barabanov value iteration on the circle grid e_j = (cos 2 pi j/G, sin 2 pi j/G):
/// out_j = e^-beta max_i g(A_i e_j), with g interpolated gauge-linearly between grid directions.
std::vector<double> barabanov_step_serial(const std::vector<Matrix>& matrices, const std::vector<double>& g, double beta);
std::vector<double> barabanov_step_parallel(const std::vector<Matrix>& matrices, const std::vector<double>& g, double beta);

/// Gauge of v for the grid values g (piecewise linear in the cone between neighbours).
double grid_gauge(const std::vector<double>& g, double vx, double vy);

}  // namespace cocycle_lab
