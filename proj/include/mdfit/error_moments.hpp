#pragma once

#include "mdfit/core_model.hpp"
#include "mdfit/laguerre_grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

// Model-level moments of the error Delta = sum_{i<j} e_ij under iid Gaussian
// noise. The per-pair scalar formulas live in pair_moments.hpp; this layer
// maps them over a configuration.

namespace mdfit {

/// ||X_i + theta_i - X_j - theta_j|| / (sqrt(2) sigma).
[[nodiscard]] double lambda_of(const Configuration& cfg, const DisplacementSet& theta, int i,
                               int j, double sigma);

/// Closed-form E(Delta). Requires iid noise.
[[nodiscard]] double expected_error(const Configuration& cfg, const DistanceMatrix& D,
                                    const DisplacementSet& theta, const NoiseModel& noise,
                                    double a);

/// E(Delta) with L_{1/2} read from the nearest grid point. Deviates from
/// expected_error by at most expected_error_grid_bound().
[[nodiscard]] double expected_error_grid(const Configuration& cfg, const DistanceMatrix& D,
                                         const DisplacementSet& theta, const NoiseModel& noise,
                                         double a, const LaguerreGrid& grid);

/// sum_{i<j} 2 sqrt(pi) a sigma d_ij * grid.error_bound_half().
[[nodiscard]] double expected_error_grid_bound(const DistanceMatrix& D, double sigma, double a,
                                               const LaguerreGrid& grid);

/// Var(e_ij).
[[nodiscard]] double var_e(const Configuration& cfg, const DistanceMatrix& D,
                           const DisplacementSet& theta, const NoiseModel& noise, double a, int i,
                           int j);

/// Upper bound on cov(e_ij, e_ij'); i is the shared point.
[[nodiscard]] double cov_upper_bound(const Configuration& cfg, const DistanceMatrix& D,
                                     const DisplacementSet& theta, const NoiseModel& noise,
                                     double a, int i, int j, int jprime);

/// sum Var(e_ij) + 2 sum over unordered pairs of pairs sharing one point of
/// cov_upper_bound. Pairs with no common point contribute nothing.
[[nodiscard]] double var_delta_upper(const Configuration& cfg, const DistanceMatrix& D,
                                     const DisplacementSet& theta, const NoiseModel& noise,
                                     double a);

/// Same sums from an explicit matrix of noiseless distances `delta`, used for
/// the null-hypothesis variants where delta is derived from D.
[[nodiscard]] double expected_error_from(const Matrix& d, const Matrix& delta, int p,
                                         double sigma, double a);
[[nodiscard]] double var_delta_upper_from(const Matrix& d, const Matrix& delta, int p,
                                          double sigma, double a);

struct PairMoment {
    int i = 0;
    int j = 0;
    double lambda = 0.0;
    double expected = 0.0;
    double variance = 0.0;
};

struct MomentReport {
    double expected_delta = 0.0;
    double var_delta_upper = 0.0;
    std::vector<PairMoment> per_pair;
};

[[nodiscard]] MomentReport moment_report(const Configuration& cfg, const DistanceMatrix& D,
                                         const DisplacementSet& theta, const NoiseModel& noise,
                                         double a);

/// One row per pair: i,j,lambda,expected,variance (12 significant digits).
void write_moment_csv(std::ostream& os, const MomentReport& r,
                      const std::vector<std::string>& labels);

} // namespace mdfit
