#pragma once

#include "mdfit/core_model.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace mdfit {

using Objective = std::function<double(const Vector&)>;

struct NelderMeadOptions {
    int max_evals = 10000;
    double ftol = 1e-14; ///< stop when the f spread over the simplex is below ftol * (|f_best| + tiny)
    double xtol = 1e-12; ///< collapse: simplex diameter below xtol
};

struct NelderMeadResult {
    Vector x;
    double f = 0.0;
    int evals = 0;
};

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink
/// 1/2). The initial simplex is x0 plus steps(k) along each axis.
[[nodiscard]] NelderMeadResult nelder_mead(const Objective& f, const Vector& x0,
                                           const Vector& steps, const NelderMeadOptions& opts);

struct SubplexOptions {
    int max_evals = 50000;
    double initial_step = 1e-1;
    int max_block = 5;
    double tol = 1e-12; ///< relative objective change per sweep that counts as converged
    int restarts = 2;   ///< extra sweeps from the best point with reset steps after convergence
    std::uint64_t seed = 1;
};

struct SubplexResult {
    Vector x;
    double f = 0.0;
    int evals = 0;
    /// (evaluations so far, best objective) after each subspace solve.
    std::vector<std::pair<int, double>> trace;
};

/// Subspace-decomposed Nelder-Mead. Each sweep splits the coordinates into
/// blocks of at most max_block, ordered by how far each coordinate moved in
/// the previous sweep (a seeded shuffle on the first), and runs Nelder-Mead on
/// each block with the others frozen. Step sizes follow the last sweep's
/// progress. The result is never worse than x0.
[[nodiscard]] SubplexResult subplex(const Objective& f, const Vector& x0,
                                    const SubplexOptions& opts);

} // namespace mdfit
