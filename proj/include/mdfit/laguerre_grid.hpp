#pragma once

#include "mdfit/core_model.hpp"

#include <cstddef>
#include <memory>

namespace mdfit {

/// What a lookup below z_min does.
enum class GridRangePolicy {
    Extend, ///< evaluate directly at the would-be grid point
    Error,  ///< throw InputError
};

/// Table of L_{1/2}^{(p/2-1)} and L_{3/2}^{(p/2-1)} at z_k = -k * step,
/// k = 0..size()-1, covering [z_min, 0]. Lookups snap to the nearest point.
///
/// Small tables are filled at construction. Large ones (tiny sigma makes the
/// range huge) are filled one block at a time on first touch; this is
/// thread-safe, and copies share the same storage.
class LaguerreGrid {
  public:
    LaguerreGrid(int p, double z_min, double step, GridRangePolicy policy = GridRangePolicy::Extend);

    /// Grid for an instance: z_min = -max d_ij^2 / (4 sigma^2) - ell * step.
    static LaguerreGrid for_instance(const DistanceMatrix& D, double sigma, int p,
                                     const ZGridSpec& spec = {},
                                     GridRangePolicy policy = GridRangePolicy::Extend);

    [[nodiscard]] int p() const;
    [[nodiscard]] double alpha() const;
    [[nodiscard]] double z_min() const;
    [[nodiscard]] double step() const;
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] GridRangePolicy policy() const;
    [[nodiscard]] bool covers(double z) const;

    /// Value at the grid point nearest to z (z <= 0).
    [[nodiscard]] double half(double z) const;
    [[nodiscard]] double three_half(double z) const;

    /// Tabulated values at index k.
    [[nodiscard]] double half_at(std::size_t k) const;
    [[nodiscard]] double three_half_at(std::size_t k) const;

    /// Bounds on |lookup - direct| for any z in [z_min, 0]. For nu = 1/2 the
    /// bound also holds beyond z_min under Extend.
    [[nodiscard]] double error_bound_half() const;
    [[nodiscard]] double error_bound_three_half() const;

    /// Whether every block has been tabulated (true for small grids).
    [[nodiscard]] bool fully_tabulated() const;

  private:
    struct Storage;
    [[nodiscard]] std::size_t index_of(double z) const;
    [[nodiscard]] const double* block_for(std::size_t k) const;
    std::shared_ptr<Storage> s_;
};

} // namespace mdfit
