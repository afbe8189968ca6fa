#include "mdfit/report.hpp"

#include "mdfit/errors.hpp"
#include "mdfit/format.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace mdfit {

namespace {

std::string tab(double v) { return fmt_sig(v, kTableDigits); }
std::string csv(double v) { return fmt_sig(v, kCsvDigits); }

std::string pad(const std::string& s, std::size_t w)
{
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w)
{
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

} // namespace

std::vector<CategoryShare> category_shares(const DisplacementSet& theta,
                                           const std::vector<std::string>& attrs,
                                           const CategoryMap& map, double zero_tol)
{
    detail::require(static_cast<Eigen::Index>(attrs.size()) == theta.theta.cols(),
                    "one attribute name per displacement column required");
    check_category_map(map, attrs);
    std::vector<CategoryShare> out;
    for (const auto& cat : map.categories()) {
        CategoryShare s;
        s.category = cat;
        for (std::size_t k = 0; k < attrs.size(); ++k) {
            if (map.category_of(attrs[k]) != cat) { continue; }
            const auto col = theta.theta.col(static_cast<Eigen::Index>(k));
            s.total += static_cast<int>(col.size());
            s.zeros += static_cast<int>((col.array().abs() <= zero_tol).count());
        }
        s.p_c = s.total > 0 ? static_cast<double>(s.zeros) / s.total : 1.0;
        out.push_back(s);
    }
    return out;
}

std::string cmd_report(const DisplacementSet& theta, const Configuration& cfg,
                       const CategoryMap& map, double zero_tol)
{
    detail::require(theta.theta.rows() == cfg.n() && theta.theta.cols() == cfg.p(),
                    "displacement shape does not match configuration");
    const auto shares = category_shares(theta, cfg.attr_names, map, zero_tol);
    std::ostringstream os;
    os << "Proportion of null displacements per category\n";
    std::size_t wcat = 8;
    for (const auto& s : shares) { wcat = std::max(wcat, s.category.size()); }
    for (const auto& s : shares) {
        os << "  " << pad_right(s.category, wcat) << "  p_C = " << tab(s.p_c) << "  (" << s.zeros
           << "/" << s.total << ")\n";
    }

    os << "\nDisplacements (blank = null)\n";
    std::size_t wattr = 9;
    for (const auto& a : cfg.attr_names) { wattr = std::max(wattr, a.size()); }
    std::size_t wnum = 10;
    for (const auto& l : cfg.labels) { wnum = std::max(wnum, l.size()); }
    os << pad_right("category", wcat) << "  " << pad_right("attribute", wattr);
    for (const auto& l : cfg.labels) { os << "  " << pad(l, wnum); }
    os << '\n';
    for (const auto& cat : map.categories()) {
        for (int k = 0; k < cfg.p(); ++k) {
            const auto& attr = cfg.attr_names[static_cast<std::size_t>(k)];
            if (map.category_of(attr) != cat) { continue; }
            os << pad_right(cat, wcat) << "  " << pad_right(attr, wattr);
            for (int i = 0; i < cfg.n(); ++i) {
                const double v = theta.theta(i, k);
                os << "  " << pad(std::abs(v) <= zero_tol ? "" : tab(v), wnum);
            }
            os << '\n';
        }
    }
    return os.str();
}

std::string category_csv(const std::vector<CategoryShare>& shares)
{
    std::ostringstream os;
    os << "category,zeros,total,p_c\n";
    for (const auto& s : shares) {
        os << s.category << ',' << s.zeros << ',' << s.total << ',' << csv(s.p_c) << '\n';
    }
    return os.str();
}

std::string selection_text(const SelectionReport& s, const Configuration& cfg, double varrho)
{
    std::ostringstream os;
    if (s.already_fitted) {
        os << "All residuals are zero: the configuration already fits the reference.\n";
        return os.str();
    }
    os << "Selection (threshold " << tab(varrho) << ")\n";
    std::size_t w = 5;
    for (const auto& l : cfg.labels) { w = std::max(w, l.size()); }
    os << pad_right("point", w) << "  " << pad("rho", 10) << "  set\n";
    for (int i = 0; i < cfg.n(); ++i) {
        const bool m = std::find(s.misplaced.begin(), s.misplaced.end(), i) != s.misplaced.end();
        os << pad_right(cfg.labels[static_cast<std::size_t>(i)], w) << "  " << pad(tab(s.rho(i)), 10)
           << "  " << (m ? "M" : "W") << '\n';
    }
    os << "|M| = " << s.misplaced.size() << ", suggested nonzero displacements = "
       << s.suggested_nonzero << '\n';
    return os.str();
}

std::string selection_csv(const SelectionReport& s, const Configuration& cfg)
{
    std::ostringstream os;
    os << "label,rho,misplaced\n";
    for (int i = 0; i < cfg.n(); ++i) {
        const bool m = std::find(s.misplaced.begin(), s.misplaced.end(), i) != s.misplaced.end();
        os << cfg.labels[static_cast<std::size_t>(i)] << ',' << csv(s.rho(i)) << ',' << (m ? 1 : 0)
           << '\n';
    }
    return os.str();
}

namespace {
const char* outcome_name(TestOutcome o)
{
    switch (o) {
    case TestOutcome::Reject: return "reject";
    case TestOutcome::Accept: return "accept";
    case TestOutcome::Inconclusive: return "inconclusive";
    }
    return "?";
}
} // namespace

std::string test_text(const TestReport& t)
{
    std::ostringstream os;
    os << "Delta0            " << tab(t.delta0) << '\n'
       << "E(Delta) | H0     " << tab(t.expected_delta_h0) << '\n'
       << "Var bound | H0    " << tab(t.var_delta_upper_h0) << '\n'
       << "R                 " << tab(t.ratio) << '\n'
       << "alpha             " << tab(t.alpha) << '\n';
    switch (t.outcome) {
    case TestOutcome::Reject: os << "H0 rejected: displacements are needed.\n"; break;
    case TestOutcome::Accept: os << "H0 not rejected.\n"; break;
    case TestOutcome::Inconclusive: os << "Inconclusive: Delta0 equals E(Delta) under H0.\n"; break;
    }
    return os.str();
}

std::string test_csv(const TestReport& t)
{
    std::ostringstream os;
    os << "delta0,expected_delta_h0,var_delta_upper_h0,ratio,alpha,outcome\n"
       << csv(t.delta0) << ',' << csv(t.expected_delta_h0) << ',' << csv(t.var_delta_upper_h0)
       << ',' << csv(t.ratio) << ',' << csv(t.alpha) << ',' << outcome_name(t.outcome) << '\n';
    return os.str();
}

std::string scale_text(const ScaleFitResult& r)
{
    std::ostringstream os;
    os << "a = " << tab(r.a_star) << (r.converged ? " (converged" : " (not converged")
       << " after " << r.a_trace.size() << " step" << (r.a_trace.size() == 1 ? "" : "s") << ")\n";
    return os.str();
}

std::string scale_csv(const ScaleFitResult& r)
{
    std::ostringstream os;
    os << "iteration,a\n";
    for (std::size_t k = 0; k < r.a_trace.size(); ++k) { os << k << ',' << csv(r.a_trace[k]) << '\n'; }
    return os.str();
}

std::string sweep_text(const std::vector<FitResult>& sweep, std::size_t suggested)
{
    std::ostringstream os;
    os << pad("eta", 12) << "  " << pad("E(Delta)", 12) << "  " << pad("nonzero", 8) << '\n';
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        os << pad(tab(sweep[k].eta), 12) << "  " << pad(tab(sweep[k].expected_delta), 12) << "  "
           << pad(std::to_string(sweep[k].nonzero_count), 8) << (k == suggested ? "  <-" : "")
           << '\n';
    }
    return os.str();
}

std::string sweep_csv(const std::vector<FitResult>& sweep)
{
    std::ostringstream os;
    os << "eta,expected_delta,expected_delta_exact,nonzero_count,objective,evaluations\n";
    for (const auto& f : sweep) {
        os << csv(f.eta) << ',' << csv(f.expected_delta) << ',' << csv(f.expected_delta_exact)
           << ',' << f.nonzero_count << ',' << csv(f.objective) << ',' << f.evaluations << '\n';
    }
    return os.str();
}

std::string fit_text(const FitResult& f)
{
    std::ostringstream os;
    os << "eta               " << tab(f.eta) << '\n'
       << "E(Delta)          " << tab(f.expected_delta) << '\n'
       << "nonzero           " << f.nonzero_count << '\n'
       << "objective         " << tab(f.objective) << '\n'
       << "evaluations       " << f.evaluations << '\n';
    return os.str();
}

std::string fit_csv(const FitResult& f)
{
    std::ostringstream os;
    os << "evaluation,objective\n";
    for (const auto& [e, v] : f.trace) { os << e << ',' << csv(v) << '\n'; }
    return os.str();
}

std::string trace_csv(const MHTrace& t)
{
    std::ostringstream os;
    write_trace_csv(os, t);
    return os.str();
}

std::string simulate_text(const MHTrace& t)
{
    std::ostringstream os;
    os << "iterations        " << t.iter_count << '\n'
       << "accepted          " << t.accept_count << '\n'
       << "Delta(Theta=0)    " << tab(t.error_series.front()) << '\n'
       << "best Delta        " << tab(t.best_error) << '\n';
    return os.str();
}

std::string theta_csv(const DisplacementSet& theta, const Configuration& cfg)
{
    std::ostringstream os;
    os << "label";
    for (const auto& a : cfg.attr_names) { os << ',' << a; }
    os << '\n';
    for (int i = 0; i < cfg.n(); ++i) {
        os << cfg.labels[static_cast<std::size_t>(i)];
        for (int k = 0; k < cfg.p(); ++k) { os << ',' << csv(theta.theta(i, k)); }
        os << '\n';
    }
    return os.str();
}

} // namespace mdfit
