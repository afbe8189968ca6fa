#pragma once

// Special functions behind the closed-form moments of the error.
//
// The distance between two noisy modified points, scaled by 1/(sqrt(2) sigma),
// follows a non-central chi law with p degrees of freedom. Its odd raw moments
// involve generalized Laguerre functions of half-integer degree evaluated at
// -lambda^2/2, which we reach through Kummer's confluent hypergeometric M.

namespace mdfit {

/// Kummer's M(a, b, x) = sum_k (a)_k x^k / ((b)_k k!).
///
/// For x < 0 the series is summed as e^x M(b-a, b, -x), which has all-positive
/// terms when b > a and b > 0. Terms are rescaled on the fly so large |x| does
/// not overflow. At most 10 000 terms; stops when the tail estimate drops
/// below 1e-14 of the partial sum. Throws NumericError otherwise, and
/// InputError when b is a nonpositive integer.
[[nodiscard]] double kummer_m(double a, double b, double x);

/// Generalized Laguerre function L_nu^(alpha)(x) for nu in {1/2, 3/2},
/// alpha = p/2 - 1 (p >= 1 integer) and x <= 0.
///
/// Small |x| goes through kummer_m; large |x| uses the algebraic asymptotic
/// expansion of M for negative argument, whose neglected part is O(e^x).
/// The result is strictly positive on the supported domain.
[[nodiscard]] double laguerre_half(double nu, double alpha, double x);

/// Raw moments of a unit-scale non-central chi variate chi_p(lambda).
struct NoncentralChiMoments {
    int p = 1;
    double lambda = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    double variance = 0.0;
};

[[nodiscard]] NoncentralChiMoments noncentral_chi_moments(int p, double lambda);

/// E and Var of N = sum_k (eps_ik - eps_jk)^2 under iid N(0, sigma^2) noise.
struct SquaredGapStats {
    double mean = 0.0;
    double variance = 0.0;
};
[[nodiscard]] SquaredGapStats squared_gap_stats(int p, double sigma);

/// Cauchy-Schwarz upper bounds for two distances sharing a point:
/// E(A A') and E(A^2 A'^2), at noise scale sigma.
struct CrossMomentUpper {
    double ub_aa = 0.0;
    double ub_a2a2 = 0.0;
};
[[nodiscard]] CrossMomentUpper cs_upper_bounds(const NoncentralChiMoments& ma,
                                               const NoncentralChiMoments& mb, double sigma);

/// Triangle-inequality lower bounds for A = A_ij and A' = A_ij' sharing
/// point i; lambda_jj is the non-centrality of the remaining pair (j, j').
///   lb_var_sum : Var(A + A')
///   lb_cov     : cov(A, A')
///   lb_aa      : E(A A')
///   lb_a2a     : E(A^2 A')
///   lb_aa2     : E(A A'^2)
struct CrossMomentLower {
    double lb_cov = 0.0;
    double lb_aa = 0.0;
    double lb_a2a = 0.0;
    double lb_aa2 = 0.0;
    double lb_var_sum = 0.0;
};
[[nodiscard]] CrossMomentLower lower_bounds(const NoncentralChiMoments& ma,
                                            const NoncentralChiMoments& mb, double lambda_jj,
                                            double sigma);

} // namespace mdfit
