#pragma once

#include "mdfit/core_model.hpp"

#include <functional>
#include <optional>
#include <random>

namespace mdfit {

using Rng = std::mt19937_64;

/// Draws an n x p matrix of noise rows.
using NoiseSampler = std::function<Matrix(int n, int p, Rng& rng)>;
/// Log-density of one noise row (up to an additive constant shared by all rows).
using RowLogDensity = std::function<double(const Vector& row)>;

/// Row law of the random part of a modification: independent rows, each
/// drawn from a Gaussian (iid or with covariance) or from a user sampler.
class NoiseLaw {
  public:
    /// Gaussian law matching the model. A singular covariance gets the
    /// degenerate Gaussian density on its support.
    static NoiseLaw from_model(const NoiseModel& model, int p);
    /// User law. MH needs `log_density`; drawing alone does not.
    static NoiseLaw custom(NoiseSampler sampler, std::optional<RowLogDensity> log_density = {});

    [[nodiscard]] Matrix draw(int n, int p, Rng& rng) const;
    [[nodiscard]] bool has_density() const { return static_cast<bool>(log_density_); }
    /// Sum of row log-densities. Throws InputError without a density.
    [[nodiscard]] double log_density(const Matrix& eps) const;

  private:
    NoiseLaw() = default;
    NoiseSampler sampler_;
    RowLogDensity log_density_;
};

/// n rows from the Gaussian law of `noise`.
[[nodiscard]] Matrix noise_draw(const NoiseModel& noise, int n, int p, Rng& rng);

/// c times the sample covariance (n - 1 denominator) of the configuration.
[[nodiscard]] Matrix scaled_covariance(const Configuration& cfg, double c);

/// Seed for stream k derived from a base seed (splitmix64 of both).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k);

} // namespace mdfit
