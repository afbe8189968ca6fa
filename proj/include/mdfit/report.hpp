#pragma once

#include "mdfit/core_model.hpp"
#include "mdfit/csv_io.hpp"
#include "mdfit/mh_sampler.hpp"
#include "mdfit/optimizer.hpp"
#include "mdfit/selection_test.hpp"

#include <string>
#include <vector>

// Text and CSV renderings of results. Tables use 4 significant digits, CSV 12.

namespace mdfit {

/// Share of null displacements within one attribute category.
struct CategoryShare {
    std::string category;
    int zeros = 0;
    int total = 0;
    double p_c = 1.0;
};

/// p_C for each category of `map`, counting entries with |theta_ik| <= zero_tol
/// over all points and the category's attributes.
[[nodiscard]] std::vector<CategoryShare> category_shares(const DisplacementSet& theta,
                                                         const std::vector<std::string>& attrs,
                                                         const CategoryMap& map, double zero_tol);

/// p_C lines followed by the displacement table (attributes down, points
/// across, null entries left blank), attributes grouped by category.
[[nodiscard]] std::string cmd_report(const DisplacementSet& theta, const Configuration& cfg,
                                     const CategoryMap& map, double zero_tol);
[[nodiscard]] std::string category_csv(const std::vector<CategoryShare>& shares);

[[nodiscard]] std::string selection_text(const SelectionReport& s, const Configuration& cfg,
                                         double varrho);
[[nodiscard]] std::string selection_csv(const SelectionReport& s, const Configuration& cfg);

[[nodiscard]] std::string test_text(const TestReport& t);
[[nodiscard]] std::string test_csv(const TestReport& t);

[[nodiscard]] std::string scale_text(const ScaleFitResult& r);
[[nodiscard]] std::string scale_csv(const ScaleFitResult& r);

/// eta, E(Delta), nonzero count; the suggested row is marked.
[[nodiscard]] std::string sweep_text(const std::vector<FitResult>& sweep, std::size_t suggested);
[[nodiscard]] std::string sweep_csv(const std::vector<FitResult>& sweep);

[[nodiscard]] std::string fit_text(const FitResult& f);
[[nodiscard]] std::string fit_csv(const FitResult& f);

[[nodiscard]] std::string trace_csv(const MHTrace& t);
[[nodiscard]] std::string simulate_text(const MHTrace& t);

/// Theta in target format (label,<attr>...) with 12 significant digits.
[[nodiscard]] std::string theta_csv(const DisplacementSet& theta, const Configuration& cfg);

} // namespace mdfit
