#include "mdfit/core_model.hpp"

#include "mdfit/errors.hpp"
#include "mdfit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mdfit {

using detail::require;

Configuration::Configuration(Matrix c, std::vector<std::string> l, std::vector<std::string> a)
    : labels(std::move(l)), attr_names(std::move(a)), coords(std::move(c))
{
    if (labels.empty()) {
        for (int i = 0; i < n(); ++i) { labels.push_back("P" + std::to_string(i + 1)); }
    }
    if (attr_names.empty()) {
        for (int k = 0; k < p(); ++k) { attr_names.push_back("A" + std::to_string(k + 1)); }
    }
}

void Configuration::validate() const
{
    require(n() >= 2, "configuration needs at least 2 points");
    require(p() >= 1, "configuration needs at least 1 attribute");
    require(static_cast<int>(labels.size()) == n(), "label count does not match row count");
    require(static_cast<int>(attr_names.size()) == p(),
            "attribute name count does not match column count");
    require(coords.allFinite(), "configuration has non-finite entries");
}

DistanceMatrix::DistanceMatrix(Matrix d, double sym_tol) : d_(std::move(d))
{
    require(d_.rows() == d_.cols(), "distance matrix must be square");
    require(d_.allFinite(), "distance matrix has non-finite entries");
    for (int i = 0; i < n(); ++i) {
        require(d_(i, i) == 0.0, "distance matrix diagonal must be zero");
        for (int j = i + 1; j < n(); ++j) {
            if (std::abs(d_(i, j) - d_(j, i)) > sym_tol) {
                std::ostringstream os;
                os << "distance matrix is not symmetric at (" << i + 1 << "," << j + 1 << ")";
                throw InputError(os.str());
            }
            require(d_(i, j) >= 0.0 && d_(j, i) >= 0.0, "distance matrix has negative entries");
            // symmetrize within tolerance so downstream code sees exact symmetry
            d_(j, i) = d_(i, j);
        }
    }
}

int DisplacementSet::count_nonzero(double zero_tol) const
{
    return static_cast<int>((theta.array().abs() > zero_tol).count());
}

DisplacementSet DisplacementSet::thresholded(double zero_tol) const
{
    Matrix t = (theta.array().abs() > zero_tol).select(theta, 0.0);
    return DisplacementSet(std::move(t));
}

NoiseModel NoiseModel::iid(double sigma)
{
    require(std::isfinite(sigma) && sigma > 0.0, "noise sigma must be positive");
    return NoiseModel(IidNoise{sigma});
}

NoiseModel NoiseModel::dependent(Matrix cov)
{
    require(cov.rows() == cov.cols() && cov.rows() >= 1, "noise covariance must be square");
    require(cov.allFinite(), "noise covariance has non-finite entries");
    require((cov - cov.transpose()).cwiseAbs().maxCoeff() <=
                1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff()),
            "noise covariance must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success) { throw NumericError("noise covariance factorization failed"); }
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
        throw NumericError("noise covariance is not positive semidefinite");
    }
    return NoiseModel(DependentNoise{std::move(cov)});
}

double NoiseModel::sigma() const
{
    if (const auto* iid = std::get_if<IidNoise>(&law_)) { return iid->sigma; }
    throw InputError("closed-form moments need iid noise");
}

const Matrix& NoiseModel::cov() const
{
    if (const auto* dep = std::get_if<DependentNoise>(&law_)) { return dep->cov; }
    throw InputError("noise model is iid; no covariance matrix");
}

void ModelParams::validate() const
{
    require(a > 0.0, "a must be positive");
    require(eta >= 0.0, "eta must be nonnegative");
    require(xi > 0.0, "xi must be positive");
    require(temperature > 0.0, "temperature must be positive");
    require(c > 0.0, "c must be positive");
    require(zero_tol > 0.0, "zero_tol must be positive");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
    require(varrho >= 0.0 && varrho <= 1.0, "varrho must lie in [0,1]");
    require(z_grid.ell > 0.0 && z_grid.step > 0.0, "z-grid ell and step must be positive");
}

void check_shapes(const Configuration& cfg, const DistanceMatrix& D)
{
    require(D.n() == cfg.n(), "reference matrix size does not match the number of points");
}

void check_shapes(const Configuration& cfg, const DistanceMatrix& D, const DisplacementSet& theta)
{
    check_shapes(cfg, D);
    require(theta.theta.rows() == cfg.n() && theta.theta.cols() == cfg.p(),
            "displacement shape does not match configuration");
    require(theta.theta.allFinite(), "displacements have non-finite entries");
}

DistanceMatrix pairwise_distances(const Configuration& cfg)
{
    cfg.validate();
    return DistanceMatrix(kernels::parallel::row_distances(cfg.coords));
}

Matrix modified_distances(const Configuration& cfg, const DisplacementSet& theta)
{
    require(theta.theta.rows() == cfg.n() && theta.theta.cols() == cfg.p(),
            "displacement shape does not match configuration");
    return kernels::parallel::row_distances(cfg.coords + theta.theta);
}

double error_at(const Configuration& cfg, const DistanceMatrix& D, const DisplacementSet& theta,
                double a)
{
    check_shapes(cfg, D, theta);
    require(a > 0.0, "a must be positive");
    const Matrix delta = modified_distances(cfg, theta);
    double total = 0.0;
    for (int i = 0; i < cfg.n(); ++i) {
        for (int j = i + 1; j < cfg.n(); ++j) {
            const double g = D(i, j) - a * delta(i, j);
            total += g * g;
        }
    }
    return total;
}

Matrix residual_matrix(const Configuration& cfg, const DistanceMatrix& D, double a)
{
    check_shapes(cfg, D);
    require(a > 0.0, "a must be positive");
    const Matrix delta = kernels::parallel::row_distances(cfg.coords);
    Matrix r = Matrix::Zero(cfg.n(), cfg.n());
    for (int i = 0; i < cfg.n(); ++i) {
        for (int j = i + 1; j < cfg.n(); ++j) {
            const double g = D(i, j) - a * delta(i, j);
            r(i, j) = g * g;
            r(j, i) = g * g;
        }
    }
    return r;
}

} // namespace mdfit
