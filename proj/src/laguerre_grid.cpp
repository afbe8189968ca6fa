#include "mdfit/laguerre_grid.hpp"

#include "mdfit/errors.hpp"
#include "mdfit/kernels.hpp"
#include "mdfit/special_functions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

namespace mdfit {

namespace {
constexpr std::size_t kBlock = 4096;
constexpr std::size_t kEagerLimit = std::size_t{1} << 21;
} // namespace

struct LaguerreGrid::Storage {
    int p = 1;
    double alpha = -0.5;
    double z_min = 0.0;
    double step = 1e-2;
    std::size_t count = 0;
    GridRangePolicy policy = GridRangePolicy::Extend;
    double err_half = 0.0;
    double err_three_half = 0.0;

    // Block b holds [half | three_half] for k in [b*kBlock, (b+1)*kBlock).
    std::vector<std::vector<double>> blocks;
    std::unique_ptr<std::once_flag[]> once;
    std::atomic<std::size_t> filled{0};

    void fill(std::size_t b)
    {
        const std::size_t first = b * kBlock;
        const std::size_t len = std::min(kBlock, count - first);
        std::vector<double> buf(2 * len);
        kernels::serial::tabulate_laguerre(alpha, step, static_cast<long>(first),
                                           std::span<double>(buf.data(), len),
                                           std::span<double>(buf.data() + len, len));
        blocks[b] = std::move(buf);
        filled.fetch_add(1, std::memory_order_relaxed);
    }
};

LaguerreGrid::LaguerreGrid(int p, double z_min, double step, GridRangePolicy policy)
    : s_(std::make_shared<Storage>())
{
    detail::require(p >= 1, "LaguerreGrid: p must be >= 1");
    detail::require(std::isfinite(step) && step > 0.0, "LaguerreGrid: step must be > 0");
    detail::require(std::isfinite(z_min) && z_min <= 0.0, "LaguerreGrid: z_min must be <= 0");

    Storage& s = *s_;
    s.p = p;
    s.alpha = 0.5 * p - 1.0;
    s.z_min = z_min;
    s.step = step;
    s.policy = policy;
    s.count = static_cast<std::size_t>(std::ceil(-z_min / step - 1e-9)) + 1;

    const std::size_t nblocks = (s.count + kBlock - 1) / kBlock;
    s.blocks.resize(nblocks);
    s.once = std::make_unique<std::once_flag[]>(nblocks);

    // |d/dx L_{1/2}^a| = L_{-1/2}^{a+1}(x), largest at x = 0.
    s.err_half = 0.5 * step * std::exp(std::lgamma(s.alpha + 1.5) - std::lgamma(s.alpha + 2.0)) /
                 std::sqrt(std::numbers::pi);
    // |d/dx L_{3/2}^a| = L_{1/2}^{a+1}(x), increasing in -x.
    const double z_far = -static_cast<double>(s.count - 1) * step - 0.5 * step;
    s.err_three_half = 0.5 * step * laguerre_half(0.5, s.alpha + 1.0, z_far);

    if (s.count <= kEagerLimit) {
        std::vector<double> half(s.count);
        std::vector<double> three(s.count);
        kernels::parallel::tabulate_laguerre(s.alpha, step, 0, half, three);
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t first = b * kBlock;
            const std::size_t len = std::min(kBlock, s.count - first);
            std::call_once(s.once[b], [&] {
                std::vector<double> buf(2 * len);
                std::copy_n(half.begin() + static_cast<std::ptrdiff_t>(first), len, buf.begin());
                std::copy_n(three.begin() + static_cast<std::ptrdiff_t>(first), len,
                            buf.begin() + static_cast<std::ptrdiff_t>(len));
                s.blocks[b] = std::move(buf);
                s.filled.fetch_add(1, std::memory_order_relaxed);
            });
        }
    }
}

LaguerreGrid LaguerreGrid::for_instance(const DistanceMatrix& D, double sigma, int p,
                                        const ZGridSpec& spec, GridRangePolicy policy)
{
    detail::require(std::isfinite(sigma) && sigma > 0.0, "LaguerreGrid: sigma must be > 0");
    detail::require(spec.ell > 0.0 && spec.step > 0.0, "LaguerreGrid: ell and step must be > 0");
    const double dmax = D.values().size() ? D.values().maxCoeff() : 0.0;
    const double z_min = -dmax * dmax / (4.0 * sigma * sigma) - spec.ell * spec.step;
    return LaguerreGrid(p, z_min, spec.step, policy);
}

int LaguerreGrid::p() const { return s_->p; }
double LaguerreGrid::alpha() const { return s_->alpha; }
double LaguerreGrid::z_min() const { return s_->z_min; }
double LaguerreGrid::step() const { return s_->step; }
std::size_t LaguerreGrid::size() const { return s_->count; }
GridRangePolicy LaguerreGrid::policy() const { return s_->policy; }
double LaguerreGrid::error_bound_half() const { return s_->err_half; }
double LaguerreGrid::error_bound_three_half() const { return s_->err_three_half; }

bool LaguerreGrid::fully_tabulated() const
{
    return s_->filled.load(std::memory_order_relaxed) == s_->blocks.size();
}

bool LaguerreGrid::covers(double z) const
{
    return z <= 0.0 && index_of(z) < s_->count;
}

std::size_t LaguerreGrid::index_of(double z) const
{
    return static_cast<std::size_t>(std::llround(-z / s_->step));
}

const double* LaguerreGrid::block_for(std::size_t k) const
{
    Storage& s = *s_;
    const std::size_t b = k / kBlock;
    std::call_once(s.once[b], [&] { s.fill(b); });
    return s.blocks[b].data();
}

double LaguerreGrid::half_at(std::size_t k) const
{
    detail::require(k < s_->count, "LaguerreGrid: index out of range");
    return block_for(k)[k % kBlock];
}

double LaguerreGrid::three_half_at(std::size_t k) const
{
    detail::require(k < s_->count, "LaguerreGrid: index out of range");
    const std::size_t b = k / kBlock;
    const std::size_t len = std::min(kBlock, s_->count - b * kBlock);
    return block_for(k)[len + k % kBlock];
}

namespace {

[[noreturn]] void out_of_range(double z, double z_min)
{
    std::ostringstream os;
    os << "LaguerreGrid: z = " << z << " lies below z_min = " << z_min;
    throw InputError(os.str());
}

} // namespace

double LaguerreGrid::half(double z) const
{
    detail::require(z <= 0.0 && std::isfinite(z), "LaguerreGrid: z must be finite and <= 0");
    const std::size_t k = index_of(z);
    if (k < s_->count) { return half_at(k); }
    if (s_->policy == GridRangePolicy::Error) { out_of_range(z, s_->z_min); }
    return laguerre_half(0.5, s_->alpha, -static_cast<double>(k) * s_->step);
}

double LaguerreGrid::three_half(double z) const
{
    detail::require(z <= 0.0 && std::isfinite(z), "LaguerreGrid: z must be finite and <= 0");
    const std::size_t k = index_of(z);
    if (k < s_->count) { return three_half_at(k); }
    if (s_->policy == GridRangePolicy::Error) { out_of_range(z, s_->z_min); }
    return laguerre_half(1.5, s_->alpha, -static_cast<double>(k) * s_->step);
}

} // namespace mdfit
