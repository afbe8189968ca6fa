#include "mdfit/kernels.hpp"

#include "mdfit/pair_moments.hpp"
#include "mdfit/special_functions.hpp"

#include "omp_guard.hpp"

#include <cstddef>
#include <vector>

namespace mdfit::kernels {

namespace {

// Below these sizes the OpenMP fork costs more than the loop.
constexpr long kParallelPairs = 256;
constexpr long kParallelTable = 1024;

struct PairIndex {
    int i;
    int j;
};

std::vector<PairIndex> upper_pairs(int n)
{
    std::vector<PairIndex> out;
    out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) { out.push_back({i, j}); }
    }
    return out;
}

double ordered_sum(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) { s += x; }
    return s;
}

} // namespace

namespace serial {

Matrix row_distances(const Matrix& y)
{
    const auto n = y.rows();
    const Matrix yt = y.transpose(); // points as contiguous columns
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            out(i, j) = out(j, i) = (yt.col(i) - yt.col(j)).norm();
        }
    }
    return out;
}

double expected_error(const PairProblem& pb)
{
    const auto n = static_cast<int>(pb.d.rows());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            total += pair_expected_error(pb.d(i, j), pb.delta(i, j), pb.p, pb.sigma, pb.a);
        }
    }
    return total;
}

double var_delta_upper(const PairProblem& pb)
{
    const auto n = static_cast<int>(pb.d.rows());
    auto moments = [&](int i, int j) {
        return noncentral_chi_moments(pb.p, noncentrality(pb.delta(i, j), pb.sigma));
    };
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            total += pair_var_e(pb.d(i, j), moments(i, j), pb.sigma, pb.a);
        }
    }
    double cov = 0.0;
    for (int s = 0; s < n; ++s) {
        for (int j = 0; j < n; ++j) {
            if (j == s) { continue; }
            for (int jp = j + 1; jp < n; ++jp) {
                if (jp == s) { continue; }
                cov += pair_cov_upper(pb.d(s, j), pb.d(s, jp), moments(s, j), moments(s, jp),
                                      noncentrality(pb.delta(j, jp), pb.sigma), pb.sigma, pb.a);
            }
        }
    }
    return total + 2.0 * cov;
}

void tabulate_laguerre(double alpha, double step, long first, std::span<double> half,
                       std::span<double> three_half)
{
    for (std::size_t k = 0; k < half.size(); ++k) {
        const double z = -static_cast<double>(first + static_cast<long>(k)) * step;
        half[k] = laguerre_half(0.5, alpha, z);
        three_half[k] = laguerre_half(1.5, alpha, z);
    }
}

} // namespace serial

namespace parallel {

Matrix row_distances(const Matrix& y)
{
    const auto n = static_cast<int>(y.rows());
    const auto pairs = upper_pairs(n);
    const auto m = static_cast<long>(pairs.size());
    const Matrix yt = y.transpose();
    Matrix out = Matrix::Zero(n, n);
#pragma omp parallel for schedule(static) if (m >= kParallelPairs)
    for (long k = 0; k < m; ++k) {
        const auto [i, j] = pairs[static_cast<std::size_t>(k)];
        out(i, j) = out(j, i) = (yt.col(i) - yt.col(j)).norm();
    }
    return out;
}

double expected_error(const PairProblem& pb)
{
    const auto pairs = upper_pairs(static_cast<int>(pb.d.rows()));
    const auto m = static_cast<long>(pairs.size());
    std::vector<double> terms(pairs.size());
    detail::ExceptionSlot err;
#pragma omp parallel for schedule(static) if (m >= kParallelPairs)
    for (long k = 0; k < m; ++k) {
        err.run([&] {
            const auto [i, j] = pairs[static_cast<std::size_t>(k)];
            terms[static_cast<std::size_t>(k)] =
                pair_expected_error(pb.d(i, j), pb.delta(i, j), pb.p, pb.sigma, pb.a);
        });
    }
    err.rethrow();
    return ordered_sum(terms);
}

double var_delta_upper(const PairProblem& pb)
{
    const auto n = static_cast<int>(pb.d.rows());
    const auto pairs = upper_pairs(n);
    const auto m = static_cast<long>(pairs.size());
    const auto nn = static_cast<std::size_t>(n);

    std::vector<NoncentralChiMoments> chi(nn * nn);
    std::vector<double> var_terms(pairs.size());
    detail::ExceptionSlot err;
#pragma omp parallel for schedule(dynamic, 8) if (m >= kParallelPairs / 8)
    for (long k = 0; k < m; ++k) {
        err.run([&] {
            const auto [i, j] = pairs[static_cast<std::size_t>(k)];
            const auto mom = noncentral_chi_moments(pb.p, noncentrality(pb.delta(i, j), pb.sigma));
            chi[static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)] = mom;
            chi[static_cast<std::size_t>(j) * nn + static_cast<std::size_t>(i)] = mom;
            var_terms[static_cast<std::size_t>(k)] = pair_var_e(pb.d(i, j), mom, pb.sigma, pb.a);
        });
    }
    err.rethrow();
    auto at = [&](int i, int j) -> const NoncentralChiMoments& {
        return chi[static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)];
    };

    std::vector<double> cov_terms(nn, 0.0);
#pragma omp parallel for schedule(dynamic, 1) if (n >= 16)
    for (int s = 0; s < n; ++s) {
        err.run([&] {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == s) { continue; }
                for (int jp = j + 1; jp < n; ++jp) {
                    if (jp == s) { continue; }
                    acc += pair_cov_upper(pb.d(s, j), pb.d(s, jp), at(s, j), at(s, jp),
                                          noncentrality(pb.delta(j, jp), pb.sigma), pb.sigma,
                                          pb.a);
                }
            }
            cov_terms[static_cast<std::size_t>(s)] = acc;
        });
    }
    err.rethrow();
    return ordered_sum(var_terms) + 2.0 * ordered_sum(cov_terms);
}

void tabulate_laguerre(double alpha, double step, long first, std::span<double> half,
                       std::span<double> three_half)
{
    const auto m = static_cast<long>(half.size());
    detail::ExceptionSlot err;
#pragma omp parallel for schedule(dynamic, 256) if (m >= kParallelTable)
    for (long k = 0; k < m; ++k) {
        err.run([&] {
            const double z = -static_cast<double>(first + k) * step;
            half[static_cast<std::size_t>(k)] = laguerre_half(0.5, alpha, z);
            three_half[static_cast<std::size_t>(k)] = laguerre_half(1.5, alpha, z);
        });
    }
    err.rethrow();
}

} // namespace parallel

} // namespace mdfit::kernels
