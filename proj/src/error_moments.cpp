#include "mdfit/error_moments.hpp"

#include "mdfit/errors.hpp"
#include "mdfit/format.hpp"
#include "mdfit/kernels.hpp"
#include "mdfit/pair_moments.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace mdfit {

using detail::require;

namespace {

double iid_sigma(const NoiseModel& noise)
{
    require(noise.is_iid(), "closed-form moments need iid noise");
    return noise.sigma();
}

void check_pair(const Configuration& cfg, int i, int j)
{
    require(i >= 0 && j >= 0 && i < cfg.n() && j < cfg.n(), "point index out of range");
    require(i != j, "pair indices must differ");
}

void check_common(const Configuration& cfg, const DistanceMatrix& D,
                  const DisplacementSet& theta, double a)
{
    check_shapes(cfg, D, theta);
    require(a > 0.0, "a must be positive");
}

NoncentralChiMoments pair_chi(const Matrix& delta, int i, int j, int p, double sigma)
{
    return noncentral_chi_moments(p, noncentrality(delta(i, j), sigma));
}

} // namespace

double lambda_of(const Configuration& cfg, const DisplacementSet& theta, int i, int j,
                 double sigma)
{
    check_pair(cfg, i, j);
    require(sigma > 0.0, "sigma must be positive");
    const Vector gap = (cfg.coords.row(i) + theta.theta.row(i) - cfg.coords.row(j) -
                        theta.theta.row(j))
                           .transpose();
    return noncentrality(gap.norm(), sigma);
}

double expected_error_from(const Matrix& d, const Matrix& delta, int p, double sigma, double a)
{
    return kernels::parallel::expected_error({d, delta, p, sigma, a});
}

double var_delta_upper_from(const Matrix& d, const Matrix& delta, int p, double sigma, double a)
{
    return kernels::parallel::var_delta_upper({d, delta, p, sigma, a});
}

double expected_error(const Configuration& cfg, const DistanceMatrix& D,
                      const DisplacementSet& theta, const NoiseModel& noise, double a)
{
    check_common(cfg, D, theta, a);
    const double sigma = iid_sigma(noise);
    return expected_error_from(D.values(), modified_distances(cfg, theta), cfg.p(), sigma, a);
}

double expected_error_grid(const Configuration& cfg, const DistanceMatrix& D,
                           const DisplacementSet& theta, const NoiseModel& noise, double a,
                           const LaguerreGrid& grid)
{
    check_common(cfg, D, theta, a);
    const double sigma = iid_sigma(noise);
    require(grid.p() == cfg.p(), "Laguerre grid was built for a different p");
    const Matrix delta = modified_distances(cfg, theta);
    const int n = cfg.n();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double lam = noncentrality(delta(i, j), sigma);
            const double L = grid.half(-0.5 * lam * lam);
            total += pair_expected_error(D(i, j), delta(i, j), cfg.p(), sigma, a, L);
        }
    }
    return total;
}

double expected_error_grid_bound(const DistanceMatrix& D, double sigma, double a,
                                 const LaguerreGrid& grid)
{
    const Matrix& d = D.values();
    const double dsum = 0.5 * d.sum(); // upper triangle only
    return 2.0 * std::sqrt(std::numbers::pi) * a * sigma * dsum * grid.error_bound_half();
}

double var_e(const Configuration& cfg, const DistanceMatrix& D, const DisplacementSet& theta,
             const NoiseModel& noise, double a, int i, int j)
{
    check_common(cfg, D, theta, a);
    check_pair(cfg, i, j);
    const double sigma = iid_sigma(noise);
    const Matrix delta = modified_distances(cfg, theta);
    return pair_var_e(D(i, j), pair_chi(delta, i, j, cfg.p(), sigma), sigma, a);
}

double cov_upper_bound(const Configuration& cfg, const DistanceMatrix& D,
                       const DisplacementSet& theta, const NoiseModel& noise, double a, int i,
                       int j, int jprime)
{
    check_common(cfg, D, theta, a);
    check_pair(cfg, i, j);
    check_pair(cfg, i, jprime);
    check_pair(cfg, j, jprime);
    const double sigma = iid_sigma(noise);
    const Matrix delta = modified_distances(cfg, theta);
    return pair_cov_upper(D(i, j), D(i, jprime), pair_chi(delta, i, j, cfg.p(), sigma),
                          pair_chi(delta, i, jprime, cfg.p(), sigma),
                          noncentrality(delta(j, jprime), sigma), sigma, a);
}

double var_delta_upper(const Configuration& cfg, const DistanceMatrix& D,
                       const DisplacementSet& theta, const NoiseModel& noise, double a)
{
    check_common(cfg, D, theta, a);
    const double sigma = iid_sigma(noise);
    return var_delta_upper_from(D.values(), modified_distances(cfg, theta), cfg.p(), sigma, a);
}

MomentReport moment_report(const Configuration& cfg, const DistanceMatrix& D,
                           const DisplacementSet& theta, const NoiseModel& noise, double a)
{
    check_common(cfg, D, theta, a);
    const double sigma = iid_sigma(noise);
    const Matrix delta = modified_distances(cfg, theta);
    MomentReport r;
    for (int i = 0; i < cfg.n(); ++i) {
        for (int j = i + 1; j < cfg.n(); ++j) {
            const auto m = pair_chi(delta, i, j, cfg.p(), sigma);
            PairMoment pm;
            pm.i = i;
            pm.j = j;
            pm.lambda = m.lambda;
            pm.expected = pair_expected_error(D(i, j), m, sigma, a);
            pm.variance = pair_var_e(D(i, j), m, sigma, a);
            r.per_pair.push_back(pm);
        }
    }
    r.expected_delta = expected_error_from(D.values(), delta, cfg.p(), sigma, a);
    r.var_delta_upper = var_delta_upper_from(D.values(), delta, cfg.p(), sigma, a);
    return r;
}

void write_moment_csv(std::ostream& os, const MomentReport& r,
                      const std::vector<std::string>& labels)
{
    auto name = [&](int k) {
        return static_cast<std::size_t>(k) < labels.size() ? labels[static_cast<std::size_t>(k)]
                                                           : std::to_string(k + 1);
    };
    os << "i,j,lambda,expected,variance\n";
    for (const auto& pm : r.per_pair) {
        os << name(pm.i) << ',' << name(pm.j) << ',' << fmt_sig(pm.lambda) << ','
           << fmt_sig(pm.expected) << ',' << fmt_sig(pm.variance) << '\n';
    }
}

} // namespace mdfit
