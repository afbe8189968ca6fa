#include "mdfit/special_functions.hpp"

#include "mdfit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mdfit {

namespace {

constexpr int kMaxTerms = 10000;
constexpr double kRelStop = 1e-14;
constexpr double kRescale = 1e200;

// Value represented as mantissa * exp(log_scale).
struct Scaled {
    double mantissa;
    double log_scale;
};

Scaled hypergeometric_series(double a, double b, double x)
{
    double term = 1.0;
    double sum = 1.0;
    double log_scale = 0.0;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double kd = static_cast<double>(k);
        term *= (a + kd) * x / ((b + kd) * (kd + 1.0));
        sum += term;
        if (term == 0.0) { return {sum, log_scale}; } // a is a nonpositive integer
        if (std::abs(sum) > kRescale) {
            sum /= kRescale;
            term /= kRescale;
            log_scale += std::log(kRescale);
        }
        const double next = std::abs((a + kd + 1.0) * x / ((b + kd + 1.0) * (kd + 2.0)));
        if (next < 1.0) {
            const double tail = std::abs(term) * next / (1.0 - next);
            if (tail <= kRelStop * std::abs(sum)) { return {sum, log_scale}; }
        }
    }
    std::ostringstream os;
    os << "Kummer series did not converge in " << kMaxTerms << " terms (a=" << a << ", b=" << b
       << ", x=" << x << ")";
    throw NumericError(os.str());
}

// Argument above which the asymptotic expansion replaces the series.
double asymptotic_threshold(double alpha)
{
    return 60.0 + 4.0 * (alpha + 1.0) * (alpha + 1.0);
}

// y^nu / Gamma(nu+1) * sum_s (-nu)_s (-nu-alpha)_s / (s! y^s); nullopt-like NaN when
// the expansion starts diverging before reaching full precision.
double laguerre_asymptotic(double nu, double alpha, double y)
{
    double term = 1.0;
    double sum = 1.0;
    double prev_abs = 1.0;
    for (int s = 0; s < 400; ++s) {
        const double sd = static_cast<double>(s);
        term *= (sd - nu) * (sd - nu - alpha) / ((sd + 1.0) * y);
        sum += term;
        const double t = std::abs(term);
        if (t <= 1e-17 * std::abs(sum)) {
            return std::exp(nu * std::log(y) - std::lgamma(nu + 1.0)) * sum;
        }
        if (t > prev_abs && s > 2) { break; }
        prev_abs = t;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

double kummer_m(double a, double b, double x)
{
    if (b <= 0.0 && b == std::floor(b)) {
        throw InputError("kummer_m: b must not be a nonpositive integer");
    }
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x)) {
        throw InputError("kummer_m: arguments must be finite");
    }
    if (x == 0.0) { return 1.0; }
    if (x < 0.0) {
        const Scaled s = hypergeometric_series(b - a, b, -x);
        return s.mantissa * std::exp(s.log_scale + x);
    }
    const Scaled s = hypergeometric_series(a, b, x);
    return s.mantissa * std::exp(s.log_scale);
}

double laguerre_half(double nu, double alpha, double x)
{
    if (nu != 0.5 && nu != 1.5) { throw InputError("laguerre_half: nu must be 1/2 or 3/2"); }
    const double two_alpha = 2.0 * alpha;
    if (!(alpha >= -0.5) || two_alpha != std::floor(two_alpha)) {
        throw InputError("laguerre_half: alpha must be p/2 - 1 for an integer p >= 1");
    }
    if (!std::isfinite(x) || x > 0.0) { throw InputError("laguerre_half: x must be <= 0"); }

    const double y = -x;
    if (y >= asymptotic_threshold(alpha)) {
        const double v = laguerre_asymptotic(nu, alpha, y);
        if (std::isfinite(v)) { return v; }
    }
    const double log_coef = std::lgamma(nu + alpha + 1.0) - std::lgamma(nu + 1.0) -
                            std::lgamma(alpha + 1.0);
    return std::exp(log_coef) * kummer_m(-nu, alpha + 1.0, x);
}

NoncentralChiMoments noncentral_chi_moments(int p, double lambda)
{
    if (p < 1) { throw InputError("noncentral_chi_moments: p must be >= 1"); }
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw InputError("noncentral_chi_moments: lambda must be finite and >= 0");
    }
    constexpr double root_half_pi = 1.2533141373155002512; // sqrt(pi/2)
    const double pd = static_cast<double>(p);
    const double l2 = lambda * lambda;
    const double alpha = 0.5 * pd - 1.0;
    const double x = -0.5 * l2;

    NoncentralChiMoments m;
    m.p = p;
    m.lambda = lambda;
    m.mean = root_half_pi * laguerre_half(0.5, alpha, x);
    m.m2 = pd + l2;
    m.m3 = 3.0 * root_half_pi * laguerre_half(1.5, alpha, x);
    m.m4 = (pd + l2) * (pd + l2) + 2.0 * (pd + 2.0 * l2);
    m.variance = std::max(0.0, m.m2 - m.mean * m.mean);
    return m;
}

SquaredGapStats squared_gap_stats(int p, double sigma)
{
    if (p < 1 || !(sigma > 0.0)) { throw InputError("squared_gap_stats: need p >= 1 and sigma > 0"); }
    const double s2 = sigma * sigma;
    return {2.0 * s2 * p, 8.0 * s2 * s2 * p};
}

CrossMomentUpper cs_upper_bounds(const NoncentralChiMoments& ma, const NoncentralChiMoments& mb,
                                 double sigma)
{
    if (ma.p != mb.p) { throw InputError("cs_upper_bounds: moments must share p"); }
    const double s2 = sigma * sigma;
    return {2.0 * s2 * std::sqrt(ma.m2 * mb.m2), 4.0 * s2 * s2 * std::sqrt(ma.m4 * mb.m4)};
}

CrossMomentLower lower_bounds(const NoncentralChiMoments& ma, const NoncentralChiMoments& mb,
                              double lambda_jj, double sigma)
{
    if (ma.p != mb.p) { throw InputError("lower_bounds: moments must share p"); }
    const double s2 = sigma * sigma;
    const double pd = static_cast<double>(ma.p);
    const double la2 = ma.lambda * ma.lambda;
    const double lb2 = mb.lambda * mb.lambda;
    const double lj2 = lambda_jj * lambda_jj;
    const double mu_sum = ma.mean + mb.mean;

    CrossMomentLower out;
    out.lb_var_sum = 2.0 * s2 * (pd + lj2 - mu_sum * mu_sum);
    out.lb_cov = -s2 * (pd + 2.0 * ma.mean * mb.mean + la2 + lb2 - lj2);
    out.lb_aa = -s2 * (pd + la2 + lb2 - lj2);
    // A^2 >= A - 1, so E(A^2 A') >= E(A A') - E(A')
    out.lb_a2a = out.lb_aa - std::numbers::sqrt2 * sigma * mb.mean;
    out.lb_aa2 = out.lb_aa - std::numbers::sqrt2 * sigma * ma.mean;
    return out;
}

} // namespace mdfit
