#pragma once

#include "mdfit/core_model.hpp"
#include "mdfit/laguerre_grid.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace mdfit {

/// E(Delta) (grid-accelerated) + eta * #{|theta_ik| > zero_tol}.
[[nodiscard]] double p1_objective(const DisplacementSet& theta, const Configuration& cfg,
                                  const DistanceMatrix& D, const NoiseModel& noise, double a,
                                  double eta, const LaguerreGrid& grid, double zero_tol);

struct SolveOptions {
    int max_evals = 50000;
    int restarts = 2;
    std::uint64_t seed = 1;
    std::optional<DisplacementSet> init; ///< defaults to all zeros
    double zero_tol = 1e-6;
    /// Initial simplex step as a multiple of sigma.
    double step_factor = 0.1;
    bool exact_laguerre = false;
    ZGridSpec z_grid;
};

struct FitResult {
    DisplacementSet theta_star; ///< hard-thresholded at zero_tol
    double objective = 0.0;      ///< expected_delta + eta * nonzero_count
    double expected_delta = 0.0; ///< as used by the solver (grid or exact)
    double expected_delta_exact = 0.0;
    int nonzero_count = 0;
    double eta = 0.0;
    int evaluations = 0;
    std::vector<std::pair<int, double>> trace;
    std::uint64_t seed = 0;
};

/// Minimizes E(Delta) + eta * ||Theta||_0 by subspace Nelder-Mead, then tries
/// zeroing each nonzero entry and keeps any change that does not increase the
/// objective. Never returns a point worse than the initialization.
[[nodiscard]] FitResult solve_p1(const Configuration& cfg, const DistanceMatrix& D,
                                 const NoiseModel& noise, double a, double eta,
                                 const SolveOptions& opts = {});

/// Same, reusing a prebuilt grid.
[[nodiscard]] FitResult solve_p1(const Configuration& cfg, const DistanceMatrix& D,
                                 const NoiseModel& noise, double a, double eta,
                                 const SolveOptions& opts, const LaguerreGrid& grid);

/// argmin_a sum (d_ij - a delta_ij)^2 = sum d delta / sum delta^2.
/// Throws NumericError when every delta_ij is zero.
[[nodiscard]] double optimal_scale(const DistanceMatrix& D, const Matrix& delta);

struct ScaleOptions {
    int max_outer = 20;
    double scale_tol = 1e-3;
    SolveOptions inner; ///< used for the deterministic theta step
};

struct ScaleFitResult {
    double a_star = 1.0;
    DisplacementSet theta;
    std::vector<double> a_trace;
    bool converged = false;
};

/// Alternates the closed-form a step with a simplex solve of the noiseless
/// error in theta, starting from theta = 0. The noise model only sets the
/// simplex step size.
[[nodiscard]] ScaleFitResult fit_scale(const Configuration& cfg, const DistanceMatrix& D,
                                       const NoiseModel& noise, const ScaleOptions& opts = {});

/// One solve_p1 per eta (same seed and init), run concurrently.
[[nodiscard]] std::vector<FitResult> eta_sweep(const Configuration& cfg, const DistanceMatrix& D,
                                               const NoiseModel& noise, double a,
                                               const std::vector<double>& etas,
                                               const SolveOptions& opts = {});

/// Index of the entry whose nonzero_count is closest to target (first on ties).
[[nodiscard]] std::size_t suggest_eta(const std::vector<FitResult>& sweep, int target);

/// Mean over columns of the sample standard deviation (n - 1 denominator).
[[nodiscard]] double sigma_rule(const Configuration& cfg);

/// Typical noise scale: sigma for iid noise, sqrt(mean of diag(cov)) otherwise.
[[nodiscard]] double noise_scale(const NoiseModel& noise);

} // namespace mdfit
