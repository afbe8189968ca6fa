#include "mdfit/noise.hpp"

#include "mdfit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace mdfit {

namespace {

Matrix standard_normal(int n, int p, Rng& rng)
{
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix out(n, p);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < p; ++k) { out(i, k) = z(rng); }
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k)
{
    return splitmix64(splitmix64(seed) ^ (k + 1));
}

NoiseLaw NoiseLaw::from_model(const NoiseModel& model, int p)
{
    detail::require(p >= 1, "noise law: p must be >= 1");
    NoiseLaw law;
    if (model.is_iid()) {
        const double sigma = model.sigma();
        law.sampler_ = [sigma](int n, int q, Rng& rng) -> Matrix {
            return sigma * standard_normal(n, q, rng);
        };
        const double log_norm = -0.5 * p * std::log(2.0 * std::numbers::pi * sigma * sigma);
        law.log_density_ = [sigma, log_norm](const Vector& row) {
            return log_norm - 0.5 * row.squaredNorm() / (sigma * sigma);
        };
        return law;
    }

    const Matrix& cov = model.cov();
    detail::require(cov.rows() == p, "noise covariance must be p x p");
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    if (es.info() != Eigen::Success) { throw NumericError("noise covariance: eigendecomposition failed"); }
    const Vector ev = es.eigenvalues();
    const double tol = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff()) * p;

    // Keep the support (eigenvalues above tol); draw y = V_+ sqrt(L_+) z.
    std::vector<int> keep;
    for (int k = 0; k < p; ++k) {
        if (ev(k) > tol) { keep.push_back(k); }
    }
    if (keep.empty()) { throw NumericError("noise covariance is zero"); }
    const auto r = static_cast<int>(keep.size());
    Matrix basis(p, r);
    Vector lam(r);
    for (int k = 0; k < r; ++k) {
        basis.col(k) = es.eigenvectors().col(keep[static_cast<std::size_t>(k)]);
        lam(k) = ev(keep[static_cast<std::size_t>(k)]);
    }
    const Matrix factor = basis * lam.cwiseSqrt().asDiagonal();

    law.sampler_ = [factor, p](int n, int q, Rng& rng) -> Matrix {
        detail::require(q == p, "noise law: dimension mismatch");
        return standard_normal(n, static_cast<int>(factor.cols()), rng) * factor.transpose();
    };
    const double log_norm = -0.5 * (r * std::log(2.0 * std::numbers::pi) + lam.array().log().sum());
    law.log_density_ = [basis, lam, log_norm](const Vector& row) {
        const Vector proj = basis.transpose() * row;
        return log_norm - 0.5 * (proj.array().square() / lam.array()).sum();
    };
    return law;
}

NoiseLaw NoiseLaw::custom(NoiseSampler sampler, std::optional<RowLogDensity> log_density)
{
    detail::require(static_cast<bool>(sampler), "noise law: sampler is required");
    NoiseLaw law;
    law.sampler_ = std::move(sampler);
    if (log_density) { law.log_density_ = std::move(*log_density); }
    return law;
}

Matrix NoiseLaw::draw(int n, int p, Rng& rng) const
{
    Matrix out = sampler_(n, p, rng);
    if (out.rows() != n || out.cols() != p) { throw InputError("noise sampler returned the wrong shape"); }
    return out;
}

double NoiseLaw::log_density(const Matrix& eps) const
{
    if (!log_density_) { throw InputError("noise law has no density; the sampler needs one"); }
    double total = 0.0;
    for (Eigen::Index i = 0; i < eps.rows(); ++i) { total += log_density_(eps.row(i).transpose()); }
    return total;
}

Matrix noise_draw(const NoiseModel& noise, int n, int p, Rng& rng)
{
    return NoiseLaw::from_model(noise, p).draw(n, p, rng);
}

Matrix scaled_covariance(const Configuration& cfg, double c)
{
    detail::require(c > 0.0, "covariance multiplier c must be positive");
    cfg.validate();
    const Matrix centered = cfg.coords.rowwise() - cfg.coords.colwise().mean();
    const Matrix s = c * (centered.transpose() * centered) / static_cast<double>(cfg.n() - 1);
    return 0.5 * (s + s.transpose());
}

} // namespace mdfit
