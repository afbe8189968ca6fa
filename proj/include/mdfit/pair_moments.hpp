#pragma once

#include "mdfit/special_functions.hpp"

// Scalar building blocks for one pair (i, j) or one pair of pairs sharing a
// point. `delta` is the modified distance ||X_i + theta_i - X_j - theta_j||,
// `d` the reference distance. A_ij denotes the noisy modified distance.

namespace mdfit {

/// Non-centrality of a pair: delta / (sqrt(2) sigma).
[[nodiscard]] double noncentrality(double delta, double sigma);

/// E(e_ij) given the value of L_{1/2}^{(p/2-1)}(-lambda^2/2).
[[nodiscard]] double pair_expected_error(double d, double delta, int p, double sigma, double a,
                                         double laguerre_half_value);

/// E(e_ij) with L evaluated directly.
[[nodiscard]] double pair_expected_error(double d, double delta, int p, double sigma, double a);

/// Raw moments E(A), E(A^2), E(A^3), E(A^4) at noise scale sigma.
struct ScaledMoments {
    double ea = 0.0;
    double ea2 = 0.0;
    double ea3 = 0.0;
    double ea4 = 0.0;
};
[[nodiscard]] ScaledMoments scaled_moments(const NoncentralChiMoments& m, double sigma);

/// E(e_ij) from precomputed chi moments (same value as pair_expected_error).
[[nodiscard]] double pair_expected_error(double d, const NoncentralChiMoments& m, double sigma,
                                         double a);

/// Var(e_ij). Evaluated through central quantities, clamped at 0.
[[nodiscard]] double pair_var_e(double d, const NoncentralChiMoments& m, double sigma, double a);

/// Upper bound on cov(e_ij, e_ij') for pairs sharing point i: the bound on
/// E(e_ij e_ij') minus E(e_ij) E(e_ij'). Positive-coefficient cross moments
/// take the Cauchy-Schwarz upper bounds, negative-coefficient ones the
/// triangle-inequality lower bounds.
[[nodiscard]] double pair_cov_upper(double d_ij, double d_ijp, const NoncentralChiMoments& m_ij,
                                    const NoncentralChiMoments& m_ijp, double lambda_jjp,
                                    double sigma, double a);

/// The bound on E(e_ij e_ij') alone.
[[nodiscard]] double pair_product_upper(double d_ij, double d_ijp,
                                        const NoncentralChiMoments& m_ij,
                                        const NoncentralChiMoments& m_ijp, double lambda_jjp,
                                        double sigma, double a);

} // namespace mdfit
