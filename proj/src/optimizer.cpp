#include "mdfit/optimizer.hpp"

#include "mdfit/error_moments.hpp"
#include "mdfit/errors.hpp"
#include "mdfit/simplex.hpp"

#include "omp_guard.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

namespace mdfit {

using detail::require;

namespace {

DisplacementSet from_flat(const Vector& x, int n, int p)
{
    // Row-major flattening: point i owns x[i*p .. i*p+p).
    Matrix t(n, p);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < p; ++k) { t(i, k) = x(i * p + k); }
    }
    return DisplacementSet(std::move(t));
}

Vector to_flat(const DisplacementSet& th)
{
    const auto n = static_cast<int>(th.theta.rows());
    const auto p = static_cast<int>(th.theta.cols());
    Vector x(n * p);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < p; ++k) { x(i * p + k) = th.theta(i, k); }
    }
    return x;
}

// Greedy pass: zero each nonzero coordinate in turn, keep it if f does not grow.
Vector zero_snap(const Objective& f, Vector x, double& fx, int& evals)
{
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        if (x(k) == 0.0) { continue; }
        const double keep = x(k);
        x(k) = 0.0;
        const double f0 = f(x);
        ++evals;
        if (f0 <= fx) {
            fx = f0;
        } else {
            x(k) = keep;
        }
    }
    return x;
}

} // namespace

double noise_scale(const NoiseModel& noise)
{
    if (noise.is_iid()) { return noise.sigma(); }
    return std::sqrt(noise.cov().diagonal().mean());
}

double p1_objective(const DisplacementSet& theta, const Configuration& cfg,
                    const DistanceMatrix& D, const NoiseModel& noise, double a, double eta,
                    const LaguerreGrid& grid, double zero_tol)
{
    require(eta >= 0.0, "eta must be nonnegative");
    return expected_error_grid(cfg, D, theta, noise, a, grid) +
           eta * theta.count_nonzero(zero_tol);
}

FitResult solve_p1(const Configuration& cfg, const DistanceMatrix& D, const NoiseModel& noise,
                   double a, double eta, const SolveOptions& opts)
{
    require(noise.is_iid(), "solve_p1 needs iid noise");
    const auto grid = LaguerreGrid::for_instance(D, noise.sigma(), cfg.p(), opts.z_grid);
    return solve_p1(cfg, D, noise, a, eta, opts, grid);
}

FitResult solve_p1(const Configuration& cfg, const DistanceMatrix& D, const NoiseModel& noise,
                   double a, double eta, const SolveOptions& opts, const LaguerreGrid& grid)
{
    require(noise.is_iid(), "solve_p1 needs iid noise");
    require(eta >= 0.0, "eta must be nonnegative");
    require(opts.max_evals >= 1, "max_evals must be >= 1");
    require(opts.zero_tol > 0.0, "zero_tol must be positive");
    const int n = cfg.n();
    const int p = cfg.p();
    const DisplacementSet init = opts.init.value_or(DisplacementSet::zeros(n, p));
    check_shapes(cfg, D, init);

    auto expectation = [&](const DisplacementSet& th) {
        return opts.exact_laguerre ? expected_error(cfg, D, th, noise, a)
                                   : expected_error_grid(cfg, D, th, noise, a, grid);
    };
    auto objective_of = [&](const DisplacementSet& th) {
        return expectation(th) + eta * th.count_nonzero(opts.zero_tol);
    };
    const Objective f = [&](const Vector& x) { return objective_of(from_flat(x, n, p)); };

    SubplexOptions sp;
    sp.max_evals = opts.max_evals;
    sp.initial_step = opts.step_factor * noise.sigma();
    sp.restarts = opts.restarts;
    sp.seed = opts.seed;
    const Vector x0 = to_flat(init);
    SubplexResult r = subplex(f, x0, sp);

    double fx = r.f;
    int evals = r.evals;
    Vector x = zero_snap(f, r.x, fx, evals);

    DisplacementSet best = from_flat(x, n, p).thresholded(opts.zero_tol);
    double best_obj = objective_of(best);
    const double init_obj = objective_of(init);
    if (!(best_obj <= init_obj)) {
        best = init;
        best_obj = init_obj;
    }

    FitResult out;
    out.theta_star = best;
    out.nonzero_count = best.count_nonzero(opts.zero_tol);
    out.expected_delta = expectation(best);
    out.expected_delta_exact = expected_error(cfg, D, best, noise, a);
    out.objective = out.expected_delta + eta * out.nonzero_count;
    out.eta = eta;
    out.evaluations = evals;
    out.trace = std::move(r.trace);
    out.trace.emplace_back(evals, out.objective);
    out.seed = opts.seed;
    return out;
}

double optimal_scale(const DistanceMatrix& D, const Matrix& delta)
{
    require(delta.rows() == D.n() && delta.cols() == D.n(), "delta must match D");
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < D.n(); ++i) {
        for (int j = i + 1; j < D.n(); ++j) {
            num += D(i, j) * delta(i, j);
            den += delta(i, j) * delta(i, j);
        }
    }
    if (den == 0.0) { throw NumericError("scale undefined: all modified distances are zero"); }
    if (!(num > 0.0)) { throw NumericError("scale undefined: reference and modified distances are orthogonal"); }
    return num / den;
}

ScaleFitResult fit_scale(const Configuration& cfg, const DistanceMatrix& D,
                         const NoiseModel& noise, const ScaleOptions& opts)
{
    require(opts.max_outer >= 1, "max_outer must be >= 1");
    require(opts.scale_tol > 0.0, "scale_tol must be positive");
    check_shapes(cfg, D);
    const int n = cfg.n();
    const int p = cfg.p();

    ScaleFitResult out;
    out.theta = DisplacementSet::zeros(n, p);
    SubplexOptions sp;
    sp.max_evals = opts.inner.max_evals;
    sp.initial_step = opts.inner.step_factor * noise_scale(noise);
    sp.restarts = opts.inner.restarts;
    sp.seed = opts.inner.seed;

    for (int t = 0; t < opts.max_outer; ++t) {
        const double a = optimal_scale(D, modified_distances(cfg, out.theta));
        out.a_trace.push_back(a);
        if (out.a_trace.size() >= 2) {
            const double prev = out.a_trace[out.a_trace.size() - 2];
            if (std::abs(a - prev) / prev < opts.scale_tol) {
                out.converged = true;
                break;
            }
        }
        const Objective f = [&](const Vector& x) {
            return error_at(cfg, D, from_flat(x, n, p), a);
        };
        const SubplexResult r = subplex(f, to_flat(out.theta), sp);
        out.theta = from_flat(r.x, n, p);
    }
    out.a_star = out.a_trace.back();
    return out;
}

std::vector<FitResult> eta_sweep(const Configuration& cfg, const DistanceMatrix& D,
                                 const NoiseModel& noise, double a, const std::vector<double>& etas,
                                 const SolveOptions& opts)
{
    require(!etas.empty(), "eta list must not be empty");
    require(noise.is_iid(), "eta_sweep needs iid noise");
    const auto grid = LaguerreGrid::for_instance(D, noise.sigma(), cfg.p(), opts.z_grid);
    std::vector<FitResult> out(etas.size());
    const auto m = static_cast<long>(etas.size());
    detail::ExceptionSlot err;
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < m; ++k) {
        err.run([&] {
            const auto idx = static_cast<std::size_t>(k);
            out[idx] = solve_p1(cfg, D, noise, a, etas[idx], opts, grid);
        });
    }
    err.rethrow();
    return out;
}

std::size_t suggest_eta(const std::vector<FitResult>& sweep, int target)
{
    require(!sweep.empty(), "sweep must not be empty");
    std::size_t best = 0;
    int best_gap = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        const int gap = std::abs(sweep[k].nonzero_count - target);
        if (gap < best_gap) {
            best_gap = gap;
            best = k;
        }
    }
    return best;
}

double sigma_rule(const Configuration& cfg)
{
    cfg.validate();
    const auto& x = cfg.coords;
    const double denom = static_cast<double>(x.rows() - 1);
    double total = 0.0;
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
        const double mean = x.col(k).mean();
        total += std::sqrt((x.col(k).array() - mean).square().sum() / denom);
    }
    const double sigma = total / static_cast<double>(x.cols());
    if (!(sigma > 0.0)) { throw InputError("sigma rule undefined: every attribute is constant"); }
    return sigma;
}

} // namespace mdfit
