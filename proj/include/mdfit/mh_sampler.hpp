#pragma once

#include "mdfit/core_model.hpp"
#include "mdfit/noise.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mdfit {

/// Translation geometry for moving point l alone: centre C of the other
/// points relative to l, radius r from the relaxed fitting condition, and the
/// far end b_max of the segment along C.
struct HypersphereProposal {
    Vector center;
    double radius = 0.0;
    double xi = 0.0;
    Vector b_max;
    bool degenerate = false; ///< ||C|| == 0: no direction, b_max is zero
};

/// y holds the current coordinates (X + Theta). With n_W = n - 1:
///   C   = sum_{i != l} (y_i - y_l) / n_W
///   r^2 = | sum d_il^2 / (a n_W) - sum ||y_i - y_l||^2 / n_W + ||C||^2 |
///   b_max = ((r + xi) / ||C|| + 1) C
[[nodiscard]] HypersphereProposal hypersphere_for(int l, const Matrix& y, const DistanceMatrix& D,
                                                  double a, double xi);

struct Proposal {
    DisplacementSet theta;
    int l = 0;
    double u = 0.0;
    double q_forward = 1.0;
    double q_backward = 1.0;
    bool null_move = false; ///< no usable direction was found
};

/// Single-site proposal: pick l ~ Multinomial(weights), move theta_l by
/// u * b_max with u ~ U(0, 1).
class ProposalKernel {
  public:
    struct Options {
        double xi = 1e-4;
        /// Geometry from the unmodified configuration instead of X + Theta.
        bool frozen_geometry = false;
        /// q = w_l / ((r + xi)/||C|| + 1) instead of the segment density w_l / ||b_max||.
        bool literal_q = false;
        int max_resample = 16;
    };

    /// `weights` are normalized internally; they must be nonnegative with a
    /// positive sum.
    ProposalKernel(const Configuration& cfg, const DistanceMatrix& D, double a, const Vector& weights,
                   Options opts);

    [[nodiscard]] Proposal propose(const DisplacementSet& theta, Rng& rng) const;
    /// Deterministic core of propose() for a given point and segment fraction.
    [[nodiscard]] Proposal propose_at(const DisplacementSet& theta, int l, double u) const;
    /// Point draw alone, as used by propose().
    [[nodiscard]] int draw_point(Rng& rng) const;

    [[nodiscard]] const Vector& weights() const { return w_; }
    /// Proposal density of moving point l under the geometry at theta.
    [[nodiscard]] double q_value(const HypersphereProposal& hs, int l) const;
    [[nodiscard]] HypersphereProposal geometry(const DisplacementSet& theta, int l) const;

  private:
    const Configuration& cfg_;
    const DistanceMatrix& D_;
    double a_;
    Vector w_;
    Options opts_;
};

struct MHOptions {
    double temperature = 100.0;
    double xi = 1e-4;
    int iterations = 300;
    std::uint64_t seed = 1;
    bool frozen_geometry = false;
    bool literal_q = false;
};

struct MHTrace {
    DisplacementSet best_theta;
    double best_error = 0.0;
    int accept_count = 0;
    int iter_count = 0;
    /// Noiseless error of the chain state, iteration 0 (Theta = 0) first.
    std::vector<double> error_series;
    std::vector<bool> accepted; ///< same length as error_series; entry 0 is false
    std::uint64_t seed = 0;
};

/// Metropolis-Hastings over (Theta, eps) with target exp(-E(Theta)/T) h(eps).
/// Point weights are the selection rho at Theta = 0, frozen for the run.
[[nodiscard]] MHTrace mh_run(const Configuration& cfg, const DistanceMatrix& D,
                             const NoiseLaw& law, double a, const MHOptions& opts = {});
[[nodiscard]] MHTrace mh_run(const Configuration& cfg, const DistanceMatrix& D,
                             const NoiseModel& noise, double a, const MHOptions& opts = {});

/// Independent chains with seeds derive_seed(opts.seed, k), run concurrently.
/// Returns every trace; use best_chain() to pick the overall best.
[[nodiscard]] std::vector<MHTrace> mh_run_chains(const Configuration& cfg, const DistanceMatrix& D,
                                                 const NoiseLaw& law, double a,
                                                 const MHOptions& opts, int chains);
[[nodiscard]] std::size_t best_chain(const std::vector<MHTrace>& traces);

/// iteration,error,accepted
void write_trace_csv(std::ostream& os, const MHTrace& trace);

} // namespace mdfit
