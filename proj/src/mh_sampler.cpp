#include "mdfit/mh_sampler.hpp"

#include "mdfit/errors.hpp"
#include "mdfit/format.hpp"
#include "mdfit/selection_test.hpp"

#include "omp_guard.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace mdfit {

using detail::require;

HypersphereProposal hypersphere_for(int l, const Matrix& y, const DistanceMatrix& D, double a,
                                    double xi)
{
    const auto n = static_cast<int>(y.rows());
    require(n >= 2, "hypersphere: need at least two points");
    require(l >= 0 && l < n, "hypersphere: point index out of range");
    require(D.n() == n, "hypersphere: D does not match the configuration");
    require(a > 0.0 && xi > 0.0, "hypersphere: a and xi must be positive");

    const double n_w = n - 1.0;
    Vector c = Vector::Zero(y.cols());
    double d2 = 0.0;
    double y2 = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == l) { continue; }
        const Vector g = (y.row(i) - y.row(l)).transpose();
        c += g;
        d2 += D(i, l) * D(i, l);
        y2 += g.squaredNorm();
    }
    c /= n_w;

    HypersphereProposal hs;
    hs.center = c;
    hs.xi = xi;
    hs.radius = std::sqrt(std::abs(d2 / (a * n_w) - y2 / n_w + c.squaredNorm()));
    const double cn = c.norm();
    hs.degenerate = !(cn > 0.0) || !std::isfinite(cn);
    hs.b_max = hs.degenerate ? Vector(Vector::Zero(y.cols()))
                             : Vector(((hs.radius + xi) / cn + 1.0) * c);
    return hs;
}

ProposalKernel::ProposalKernel(const Configuration& cfg, const DistanceMatrix& D, double a,
                               const Vector& weights, Options opts)
    : cfg_(cfg), D_(D), a_(a), opts_(opts)
{
    check_shapes(cfg, D);
    require(weights.size() == cfg.n(), "proposal weights must have one entry per point");
    require((weights.array() >= 0.0).all() && weights.allFinite(),
            "proposal weights must be finite and nonnegative");
    const double total = weights.sum();
    require(total > 0.0, "proposal weights must not all be zero");
    require(opts_.max_resample >= 1, "max_resample must be >= 1");
    w_ = weights / total;
}

HypersphereProposal ProposalKernel::geometry(const DisplacementSet& theta, int l) const
{
    if (opts_.frozen_geometry) { return hypersphere_for(l, cfg_.coords, D_, a_, opts_.xi); }
    return hypersphere_for(l, cfg_.coords + theta.theta, D_, a_, opts_.xi);
}

double ProposalKernel::q_value(const HypersphereProposal& hs, int l) const
{
    if (hs.degenerate) { return 0.0; }
    const double w = w_(l);
    if (opts_.literal_q) { return w / ((hs.radius + hs.xi) / hs.center.norm() + 1.0); }
    return w / hs.b_max.norm();
}

int ProposalKernel::draw_point(Rng& rng) const
{
    std::discrete_distribution<int> pick(w_.data(), w_.data() + w_.size());
    return pick(rng);
}

Proposal ProposalKernel::propose_at(const DisplacementSet& theta, int l, double u) const
{
    require(l >= 0 && l < cfg_.n(), "proposal point out of range");
    require(u >= 0.0 && u <= 1.0, "segment fraction must lie in [0,1]");
    Proposal out;
    out.l = l;
    out.u = u;
    out.theta = theta;
    const HypersphereProposal fwd = geometry(theta, l);
    if (fwd.degenerate) {
        out.null_move = true;
        return out;
    }
    out.theta.theta.row(l) += u * fwd.b_max.transpose();
    out.q_forward = q_value(fwd, l);
    out.q_backward = opts_.frozen_geometry ? out.q_forward : q_value(geometry(out.theta, l), l);
    return out;
}

Proposal ProposalKernel::propose(const DisplacementSet& theta, Rng& rng) const
{
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int attempt = 0; attempt < opts_.max_resample; ++attempt) {
        const int l = draw_point(rng);
        if (geometry(theta, l).degenerate) { continue; }
        return propose_at(theta, l, unif(rng));
    }
    Proposal out;
    out.theta = theta;
    out.null_move = true;
    return out;
}

namespace {

MHTrace run_chain(const Configuration& cfg, const DistanceMatrix& D, const NoiseLaw& law, double a,
                  const MHOptions& opts, std::uint64_t seed)
{
    const int n = cfg.n();
    const int p = cfg.p();
    MHTrace tr;
    tr.seed = seed;
    tr.best_theta = DisplacementSet::zeros(n, p);
    double e_cur = error_at(cfg, D, tr.best_theta, a);
    tr.best_error = e_cur;
    tr.error_series.push_back(e_cur);
    tr.accepted.push_back(false);

    const SelectionReport sel = selection(cfg, D, a, 0.0);
    if (sel.already_fitted) { return tr; }

    ProposalKernel::Options ko;
    ko.xi = opts.xi;
    ko.frozen_geometry = opts.frozen_geometry;
    ko.literal_q = opts.literal_q;
    const ProposalKernel kernel(cfg, D, a, sel.rho, ko);

    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    DisplacementSet theta = tr.best_theta;
    Matrix eps = law.draw(n, p, rng);
    double logh = law.log_density(eps);

    for (int t = 1; t <= opts.iterations; ++t) {
        const Proposal prop = kernel.propose(theta, rng);
        const Matrix eps_new = law.draw(n, p, rng);
        const double logh_new = law.log_density(eps_new);
        const double e_new = error_at(cfg, D, prop.theta, a);

        double log_ratio = -std::numeric_limits<double>::infinity();
        if (prop.q_backward > 0.0 && prop.q_forward > 0.0) {
            log_ratio = -(e_new - e_cur) / opts.temperature + (logh_new - logh) +
                        std::log(prop.q_backward) - std::log(prop.q_forward);
        }
        const double u = unif(rng);
        const bool accept = std::log(u) < std::min(0.0, log_ratio);
        if (accept) {
            theta = prop.theta;
            e_cur = e_new;
            eps = eps_new;
            logh = logh_new;
            ++tr.accept_count;
        }
        ++tr.iter_count;
        tr.error_series.push_back(e_cur);
        tr.accepted.push_back(accept);
        if (e_cur < tr.best_error) {
            tr.best_error = e_cur;
            tr.best_theta = theta;
        }
    }
    return tr;
}

void check_mh(const MHOptions& opts, double a)
{
    require(opts.temperature > 0.0 && std::isfinite(opts.temperature),
            "temperature must be positive");
    require(opts.xi > 0.0, "xi must be positive");
    require(opts.iterations >= 0, "iterations must be >= 0");
    require(a > 0.0, "a must be positive");
}

} // namespace

MHTrace mh_run(const Configuration& cfg, const DistanceMatrix& D, const NoiseLaw& law, double a,
               const MHOptions& opts)
{
    check_mh(opts, a);
    check_shapes(cfg, D);
    return run_chain(cfg, D, law, a, opts, opts.seed);
}

MHTrace mh_run(const Configuration& cfg, const DistanceMatrix& D, const NoiseModel& noise,
               double a, const MHOptions& opts)
{
    return mh_run(cfg, D, NoiseLaw::from_model(noise, cfg.p()), a, opts);
}

std::vector<MHTrace> mh_run_chains(const Configuration& cfg, const DistanceMatrix& D,
                                   const NoiseLaw& law, double a, const MHOptions& opts,
                                   int chains)
{
    check_mh(opts, a);
    check_shapes(cfg, D);
    require(chains >= 1, "need at least one chain");
    std::vector<MHTrace> out(static_cast<std::size_t>(chains));
    detail::ExceptionSlot err;
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < chains; ++k) {
        err.run([&] {
            out[static_cast<std::size_t>(k)] =
                run_chain(cfg, D, law, a, opts, derive_seed(opts.seed, static_cast<std::uint64_t>(k)));
        });
    }
    err.rethrow();
    return out;
}

std::size_t best_chain(const std::vector<MHTrace>& traces)
{
    require(!traces.empty(), "no traces");
    std::size_t best = 0;
    for (std::size_t k = 1; k < traces.size(); ++k) {
        if (traces[k].best_error < traces[best].best_error) { best = k; }
    }
    return best;
}

void write_trace_csv(std::ostream& os, const MHTrace& trace)
{
    os << "iteration,error,accepted\n";
    for (std::size_t t = 0; t < trace.error_series.size(); ++t) {
        os << t << ',' << fmt_sig(trace.error_series[t]) << ',' << (trace.accepted[t] ? 1 : 0)
           << '\n';
    }
}

} // namespace mdfit
