#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mdfit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Target matrix: n points (rows) in R^p (columns), with names for both axes.
struct Configuration {
    std::vector<std::string> labels;
    std::vector<std::string> attr_names;
    Matrix coords;

    Configuration() = default;
    /// Labels default to "P1".."Pn" and attributes to "A1".."Ap" when empty.
    Configuration(Matrix coords, std::vector<std::string> labels = {},
                  std::vector<std::string> attr_names = {});

    [[nodiscard]] int n() const { return static_cast<int>(coords.rows()); }
    [[nodiscard]] int p() const { return static_cast<int>(coords.cols()); }

    /// Throws InputError unless n >= 2, p >= 1, names match the shape and
    /// all entries are finite.
    void validate() const;
};

/// Symmetric, nonnegative, zero-diagonal reference distances. The triangle
/// inequality is not required.
class DistanceMatrix {
  public:
    DistanceMatrix() = default;
    /// Validates on construction; `sym_tol` is the tolerated |d_ij - d_ji|.
    explicit DistanceMatrix(Matrix d, double sym_tol = 0.0);

    [[nodiscard]] const Matrix& values() const { return d_; }
    [[nodiscard]] int n() const { return static_cast<int>(d_.rows()); }
    [[nodiscard]] double operator()(int i, int j) const { return d_(i, j); }

  private:
    Matrix d_;
};

/// Fixed part of the modification, one row per point.
struct DisplacementSet {
    Matrix theta;

    DisplacementSet() = default;
    explicit DisplacementSet(Matrix t) : theta(std::move(t)) {}
    static DisplacementSet zeros(int n, int p) { return DisplacementSet(Matrix::Zero(n, p)); }

    /// Number of entries with |theta_ik| > zero_tol.
    [[nodiscard]] int count_nonzero(double zero_tol) const;
    /// Copy with every |theta_ik| <= zero_tol set to exactly 0.
    [[nodiscard]] DisplacementSet thresholded(double zero_tol) const;
};

struct IidNoise {
    double sigma = 1.0;
};

struct DependentNoise {
    Matrix cov;
};

/// Law of the random part eps_i of each point's modification.
class NoiseModel {
  public:
    static NoiseModel iid(double sigma);
    /// Checks symmetry and positive semidefiniteness (by attempted factorization).
    static NoiseModel dependent(Matrix cov);

    [[nodiscard]] bool is_iid() const { return std::holds_alternative<IidNoise>(law_); }
    [[nodiscard]] double sigma() const; ///< throws InputError for dependent noise
    [[nodiscard]] const Matrix& cov() const; ///< throws InputError for iid noise
    [[nodiscard]] const std::variant<IidNoise, DependentNoise>& law() const { return law_; }

  private:
    explicit NoiseModel(std::variant<IidNoise, DependentNoise> law) : law_(std::move(law)) {}
    std::variant<IidNoise, DependentNoise> law_;
};

struct ZGridSpec {
    double ell = 1000.0; ///< padding beyond the largest d^2/(4 sigma^2), in grid steps
    double step = 1e-2;
};

/// Tuning parameters of the method with their conventional defaults.
struct ModelParams {
    double a = 1.0;
    double eta = 0.0;
    double xi = 1e-4;
    double temperature = 100.0;
    double c = 1e-3;
    double zero_tol = 1e-6;
    double alpha = 0.05;
    double varrho = 0.1;
    ZGridSpec z_grid;

    void validate() const;
};

/// Euclidean distances between the rows of cfg.
[[nodiscard]] DistanceMatrix pairwise_distances(const Configuration& cfg);

/// Distances between the rows of X + theta (the modified configuration).
[[nodiscard]] Matrix modified_distances(const Configuration& cfg, const DisplacementSet& theta);

/// sum_{i<j} (d_ij - a * ||X_i + theta_i - X_j - theta_j||)^2
[[nodiscard]] double error_at(const Configuration& cfg, const DistanceMatrix& D,
                              const DisplacementSet& theta, double a);

/// r_ij = (d_ij - a ||X_i - X_j||)^2, symmetric with zero diagonal.
[[nodiscard]] Matrix residual_matrix(const Configuration& cfg, const DistanceMatrix& D, double a);

/// Throws InputError when D or theta does not match cfg's shape.
void check_shapes(const Configuration& cfg, const DistanceMatrix& D);
void check_shapes(const Configuration& cfg, const DistanceMatrix& D, const DisplacementSet& theta);

} // namespace mdfit
