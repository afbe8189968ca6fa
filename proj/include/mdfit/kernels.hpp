#pragma once

#include "mdfit/core_model.hpp"

#include <span>

// Data-parallel inner loops of the moment machinery.
//
// Each kernel exists twice: `serial` is the plain reference loop kept for
// testing and benchmarking, `parallel` is the OpenMP version the library
// uses. Parallel reductions write per-item partials and fold them in a fixed
// order, so results do not depend on the thread count.

namespace mdfit::kernels {

/// Inputs shared by the pair and triple sums: reference distances D, modified
/// distances delta (both n x n), dimension p, noise scale sigma and scale a.
struct PairProblem {
    const Matrix& d;
    const Matrix& delta;
    int p;
    double sigma;
    double a;
};

namespace serial {

/// Row distances of y.
[[nodiscard]] Matrix row_distances(const Matrix& y);

/// sum_{i<j} E(e_ij).
[[nodiscard]] double expected_error(const PairProblem& pb);

/// sum_{i<j} Var(e_ij) + 2 sum over pairs of pairs sharing a point of the
/// covariance upper bound. Recomputes moments inside the triple loop.
[[nodiscard]] double var_delta_upper(const PairProblem& pb);

/// half[k] = L_{1/2}^{alpha}(-(first+k) step), three_half likewise for nu = 3/2.
void tabulate_laguerre(double alpha, double step, long first, std::span<double> half,
                       std::span<double> three_half);

} // namespace serial

namespace parallel {

[[nodiscard]] Matrix row_distances(const Matrix& y);
[[nodiscard]] double expected_error(const PairProblem& pb);
/// Caches per-pair chi moments once, then distributes shared points over threads.
[[nodiscard]] double var_delta_upper(const PairProblem& pb);
void tabulate_laguerre(double alpha, double step, long first, std::span<double> half,
                       std::span<double> three_half);

} // namespace parallel

} // namespace mdfit::kernels
