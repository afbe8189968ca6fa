#include "mdfit/pair_moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mdfit {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

double noncentrality(double delta, double sigma)
{
    return delta / (std::numbers::sqrt2 * sigma);
}

double pair_expected_error(double d, double delta, int p, double sigma, double a,
                           double laguerre_half_value)
{
    // 2 a^2 sigma^2 lambda^2 == a^2 delta^2
    return d * d + 2.0 * a * a * sigma * sigma * p + a * a * delta * delta -
           2.0 * kSqrtPi * a * sigma * d * laguerre_half_value;
}

double pair_expected_error(double d, double delta, int p, double sigma, double a)
{
    const double lam = noncentrality(delta, sigma);
    const double L = laguerre_half(0.5, 0.5 * p - 1.0, -0.5 * lam * lam);
    return pair_expected_error(d, delta, p, sigma, a, L);
}

ScaledMoments scaled_moments(const NoncentralChiMoments& m, double sigma)
{
    const double s = std::numbers::sqrt2 * sigma;
    const double s2 = s * s;
    return {s * m.mean, s2 * m.m2, s2 * s * m.m3, s2 * s2 * m.m4};
}

double pair_expected_error(double d, const NoncentralChiMoments& m, double sigma, double a)
{
    const ScaledMoments s = scaled_moments(m, sigma);
    return d * d + a * a * s.ea2 - 2.0 * a * d * s.ea;
}

double pair_var_e(double d, const NoncentralChiMoments& m, double sigma, double a)
{
    const double s = std::numbers::sqrt2 * sigma;
    const double s2 = s * s;
    const double pd = static_cast<double>(m.p);
    const double l2 = m.lambda * m.lambda;
    // e = d^2 + a^2 A^2 - 2 a d A
    const double var_a2 = 2.0 * s2 * s2 * (pd + 2.0 * l2);
    const double var_a = s2 * m.variance;
    const double cov_a2_a = s2 * s * (m.m3 - m.m2 * m.mean);
    const double v = a * a * a * a * var_a2 + 4.0 * a * a * d * d * var_a -
                     4.0 * a * a * a * d * cov_a2_a;
    return std::max(0.0, v);
}

double pair_product_upper(double d_ij, double d_ijp, const NoncentralChiMoments& m_ij,
                          const NoncentralChiMoments& m_ijp, double lambda_jjp, double sigma,
                          double a)
{
    const ScaledMoments A = scaled_moments(m_ij, sigma);
    const ScaledMoments B = scaled_moments(m_ijp, sigma);
    const CrossMomentUpper up = cs_upper_bounds(m_ij, m_ijp, sigma);
    const CrossMomentLower lo = lower_bounds(m_ij, m_ijp, lambda_jjp, sigma);
    const double d = d_ij;
    const double dp = d_ijp;
    const double a2 = a * a;
    const double a3 = a2 * a;
    return d * d * dp * dp + a2 * d * d * B.ea2 - 2.0 * a * d * d * dp * B.ea +
           a2 * dp * dp * A.ea2 + a2 * a2 * up.ub_a2a2 - 2.0 * a3 * dp * lo.lb_a2a -
           2.0 * a * d * dp * dp * A.ea - 2.0 * a3 * d * lo.lb_aa2 + 4.0 * a2 * d * dp * up.ub_aa;
}

double pair_cov_upper(double d_ij, double d_ijp, const NoncentralChiMoments& m_ij,
                      const NoncentralChiMoments& m_ijp, double lambda_jjp, double sigma, double a)
{
    const double bound = pair_product_upper(d_ij, d_ijp, m_ij, m_ijp, lambda_jjp, sigma, a);
    return bound - pair_expected_error(d_ij, m_ij, sigma, a) *
                       pair_expected_error(d_ijp, m_ijp, sigma, a);
}

} // namespace mdfit
