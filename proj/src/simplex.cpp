#include "mdfit/simplex.hpp"

#include "mdfit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace mdfit {

NelderMeadResult nelder_mead(const Objective& f, const Vector& x0, const Vector& steps,
                             const NelderMeadOptions& opts)
{
    const auto d = static_cast<int>(x0.size());
    detail::require(steps.size() == x0.size(), "nelder_mead: steps must match x0");
    constexpr double inf = std::numeric_limits<double>::infinity();

    int evals = 0;
    auto eval = [&](const Vector& x) {
        ++evals;
        const double y = f(x);
        return std::isnan(y) ? inf : y;
    };

    std::vector<Vector> v(static_cast<std::size_t>(d) + 1, x0);
    std::vector<double> fv(v.size());
    fv[0] = eval(x0);
    for (int k = 0; k < d; ++k) {
        auto& vk = v[static_cast<std::size_t>(k) + 1];
        vk(k) += steps(k);
        fv[static_cast<std::size_t>(k) + 1] = eval(vk);
    }

    std::vector<std::size_t> idx(v.size());
    Vector centroid(d);
    while (evals < opts.max_evals) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t ib = idx.front();
        const std::size_t iw = idx.back();
        const double fb = fv[ib];
        const double fw = fv[iw];
        const double fs = fv[idx[idx.size() - 2]];

        double diam = 0.0;
        for (const auto& vk : v) { diam = std::max(diam, (vk - v[ib]).lpNorm<Eigen::Infinity>()); }
        if (fw - fb <= opts.ftol * std::abs(fb) || diam <= opts.xtol) { break; }

        centroid.setZero();
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) { centroid += v[idx[k]]; }
        centroid /= static_cast<double>(d);

        const Vector xr = centroid + (centroid - v[iw]);
        const double fr = eval(xr);
        if (fr < fb) {
            const Vector xe = centroid + 2.0 * (centroid - v[iw]);
            const double fe = eval(xe);
            if (fe < fr) {
                v[iw] = xe;
                fv[iw] = fe;
            } else {
                v[iw] = xr;
                fv[iw] = fr;
            }
            continue;
        }
        if (fr < fs) {
            v[iw] = xr;
            fv[iw] = fr;
            continue;
        }
        const bool outside = fr < fw;
        const Vector xc = outside ? Vector(centroid + 0.5 * (xr - centroid))
                                  : Vector(centroid + 0.5 * (v[iw] - centroid));
        const double fc = eval(xc);
        if (outside ? fc <= fr : fc < fw) {
            v[iw] = xc;
            fv[iw] = fc;
            continue;
        }
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k == ib) { continue; }
            v[k] = v[ib] + 0.5 * (v[k] - v[ib]);
            fv[k] = eval(v[k]);
        }
    }

    const auto best = static_cast<std::size_t>(
        std::distance(fv.begin(), std::min_element(fv.begin(), fv.end())));
    return {v[best], fv[best], evals};
}

SubplexResult subplex(const Objective& f, const Vector& x0, const SubplexOptions& opts)
{
    detail::require(opts.max_evals >= 1, "subplex: max_evals must be >= 1");
    detail::require(opts.max_block >= 1, "subplex: max_block must be >= 1");
    detail::require(opts.initial_step > 0.0, "subplex: initial_step must be > 0");

    SubplexResult out;
    out.x = x0;
    out.f = f(x0);
    out.evals = 1;
    out.trace.emplace_back(out.evals, out.f);
    const auto n = static_cast<int>(x0.size());
    if (n == 0) { return out; }

    Vector step = Vector::Constant(n, opts.initial_step);
    Vector progress = Vector::Zero(n);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(opts.seed);
    std::shuffle(order.begin(), order.end(), rng);

    NelderMeadOptions nm;
    nm.ftol = 1e-13;
    nm.xtol = opts.initial_step * 1e-12;

    int restarts_left = opts.restarts;
    bool first = true;
    while (out.evals < opts.max_evals) {
        const Vector x_prev = out.x;
        const double f_prev = out.f;
        if (!first) {
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return std::abs(progress(a)) > std::abs(progress(b));
            });
        }
        first = false;

        for (int start = 0; start < n && out.evals < opts.max_evals; start += opts.max_block) {
            const int len = std::min(opts.max_block, n - start);
            std::vector<int> block(order.begin() + start, order.begin() + start + len);
            Vector z0(len);
            Vector zs(len);
            for (int k = 0; k < len; ++k) {
                z0(k) = out.x(block[static_cast<std::size_t>(k)]);
                zs(k) = step(block[static_cast<std::size_t>(k)]);
            }
            Vector work = out.x;
            auto g = [&](const Vector& z) {
                for (int k = 0; k < len; ++k) { work(block[static_cast<std::size_t>(k)]) = z(k); }
                return f(work);
            };
            nm.max_evals = opts.max_evals - out.evals;
            const NelderMeadResult r = nelder_mead(g, z0, zs, nm);
            out.evals += r.evals;
            if (r.f < out.f) {
                for (int k = 0; k < len; ++k) { out.x(block[static_cast<std::size_t>(k)]) = r.x(k); }
                out.f = r.f;
            }
            out.trace.emplace_back(out.evals, out.f);
        }

        progress = out.x - x_prev;
        const double moved = progress.lpNorm<1>();
        const double scale = moved > 0.0 ? std::clamp(moved / step.lpNorm<1>(), 0.1, 10.0) : 0.1;
        for (int k = 0; k < n; ++k) {
            const double s = std::abs(step(k)) * scale;
            step(k) = progress(k) != 0.0 ? std::copysign(s, progress(k)) : -std::copysign(s, step(k));
        }

        const bool stalled = f_prev - out.f <= opts.tol * std::abs(f_prev);
        if (stalled || step.lpNorm<Eigen::Infinity>() <= nm.xtol) {
            if (restarts_left-- <= 0) { break; }
            step = Vector::Constant(n, opts.initial_step);
        }
    }
    return out;
}

} // namespace mdfit
