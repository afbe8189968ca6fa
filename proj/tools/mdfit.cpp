// Command-line front end: one subcommand per pipeline stage.
//
// Every subcommand writes its CSV/text outputs and a <mode>.manifest.json to
// --out, and prints the text report to stdout.
//
// Exit codes: 0 ok, 2 bad input, 3 numeric failure, 4 inconclusive test.

#include "mdfit/csv_io.hpp"
#include "mdfit/error_moments.hpp"
#include "mdfit/errors.hpp"
#include "mdfit/format.hpp"
#include "mdfit/manifest.hpp"
#include "mdfit/mh_sampler.hpp"
#include "mdfit/optimizer.hpp"
#include "mdfit/report.hpp"
#include "mdfit/selection_test.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace mdfit;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInconclusive = 4;

struct Flags {
    std::string target;
    std::string reference;
    std::string reference_mode = "distances";
    std::string categories;
    std::string theta;
    std::string out = ".";
    bool force = false;

    double a = 1.0;
    double sigma = 1.0;
    double eta = 0.0;
    std::vector<double> etas{0.0, 0.01, 0.1, 1.0, 10.0, 100.0};
    double xi = 1e-4;
    double temperature = 100.0;
    double c = 1e-3;
    int iterations = 300;
    int chains = 1;
    std::uint64_t seed = 1;
    double zero_tol = 1e-6;
    double varrho = 0.1;
    double alpha = 0.05;
    int max_evals = 50000;
    std::string noise = "dependent";
    bool exact_laguerre = false;
    bool h0_literal_d = false;
    bool frozen_geometry = false;
    bool literal_q = false;

    // Options by flag name, one entry per subcommand that declares it.
    std::multimap<std::string, CLI::Option*> opt;
    [[nodiscard]] bool given(const std::string& name) const
    {
        const auto [lo, hi] = opt.equal_range(name);
        return std::any_of(lo, hi, [](const auto& kv) { return kv.second->count() > 0; });
    }
    void add(const std::string& name, CLI::Option* o) { opt.emplace(name, o); }
};

// Resolved inputs shared by most subcommands.
struct Instance {
    Configuration cfg;
    DistanceMatrix D;
};

Instance load_instance(const Flags& f)
{
    detail::require(!f.target.empty(), "--target is required");
    detail::require(!f.reference.empty(), "--reference is required");
    ReferenceMode mode = ReferenceMode::Distances;
    if (f.reference_mode == "scores") {
        mode = ReferenceMode::Scores;
    } else if (f.reference_mode != "distances") {
        throw InputError("--reference-mode must be 'distances' or 'scores'");
    }
    Configuration cfg = load_target(f.target);
    DistanceMatrix D = load_reference(f.reference, mode, &cfg);
    return {std::move(cfg), std::move(D)};
}

class Run {
  public:
    Run(std::string mode, const Flags& f) : f_(f)
    {
        m_.mode = std::move(mode);
        m_.timestamp = manifest_timestamp();
        check_collision(f.out, m_.mode, f.force);
    }

    void input(const std::string& role, const std::string& path) { m_.inputs.emplace_back(role, path); }
    void param(const std::string& name, ParamValue v) { m_.set(name, std::move(v), !f_.given(name)); }
    void param(const std::string& name, ParamValue v, bool defaulted) { m_.set(name, std::move(v), defaulted); }
    void note(std::string s) { m_.notes.push_back(std::move(s)); }

    void output(const std::string& name, const std::string& text)
    {
        write_text(fs::path(f_.out) / name, text);
        m_.outputs.push_back(name);
    }

    void finish() { write_manifest(f_.out, m_, f_.force); }

  private:
    const Flags& f_;
    RunManifest m_;
};

void record_instance(Run& run, const Flags& f)
{
    run.input("target", f.target);
    run.input("reference", f.reference);
    run.param("reference-mode", f.reference_mode);
}

double resolve_sigma(Run& run, const Flags& f, const Configuration& cfg)
{
    const double sigma = f.given("sigma") ? f.sigma : sigma_rule(cfg);
    run.param("sigma", sigma);
    return sigma;
}

SolveOptions solve_options(const Flags& f)
{
    SolveOptions so;
    so.max_evals = f.max_evals;
    so.seed = f.seed;
    so.zero_tol = f.zero_tol;
    so.exact_laguerre = f.exact_laguerre;
    return so;
}

double resolve_a(Run& run, const Flags& f, const Instance& in, double sigma)
{
    if (f.given("a")) {
        run.param("a", f.a);
        return f.a;
    }
    ScaleOptions so;
    so.inner = solve_options(f);
    const ScaleFitResult r = fit_scale(in.cfg, in.D, NoiseModel::iid(sigma), so);
    run.param("a", r.a_star);
    run.note("a from the alternating scale fit");
    return r.a_star;
}

void record_grid(Run& run)
{
    const ZGridSpec g;
    run.param("z-grid-ell", g.ell, true);
    run.param("z-grid-step", g.step, true);
    run.note("z_min = -max(d^2)/(4 sigma^2) - ell*step; nearest-point lookup");
}

int cmd_scale(const Flags& f)
{
    Run run("scale", f);
    const Instance in = load_instance(f);
    record_instance(run, f);
    const double sigma = resolve_sigma(run, f, in.cfg);
    run.param("seed", f.seed);
    run.param("max-evals", static_cast<std::int64_t>(f.max_evals));
    ScaleOptions so;
    so.inner = solve_options(f);
    const ScaleFitResult r = fit_scale(in.cfg, in.D, NoiseModel::iid(sigma), so);
    const std::string text = scale_text(r);
    std::cout << text;
    run.output("scale.txt", text);
    run.output("scale.csv", scale_csv(r));
    run.finish();
    return 0;
}

int cmd_select(const Flags& f)
{
    Run run("select", f);
    const Instance in = load_instance(f);
    record_instance(run, f);
    const double sigma = resolve_sigma(run, f, in.cfg);
    run.param("seed", f.seed);
    const double a = resolve_a(run, f, in, sigma);
    run.param("varrho", f.varrho);
    const SelectionReport s = selection(in.cfg, in.D, a, f.varrho);
    const std::string text = selection_text(s, in.cfg, f.varrho);
    std::cout << text;
    run.output("select.txt", text);
    run.output("select.csv", selection_csv(s, in.cfg));
    run.finish();
    return 0;
}

int cmd_test(const Flags& f)
{
    Run run("test", f);
    const Instance in = load_instance(f);
    record_instance(run, f);
    const double sigma = resolve_sigma(run, f, in.cfg);
    run.param("seed", f.seed);
    const double a = resolve_a(run, f, in, sigma);
    run.param("alpha", f.alpha);
    run.param("h0-literal-d", f.h0_literal_d);
    TestOptions to;
    to.alpha = f.alpha;
    to.h0_literal_d = f.h0_literal_d;
    const TestReport t = chebyshev_test(in.cfg, in.D, NoiseModel::iid(sigma), a, to);
    const std::string text = test_text(t);
    std::cout << text;
    run.output("test.txt", text);
    run.output("test.csv", test_csv(t));
    run.finish();
    return t.outcome == TestOutcome::Inconclusive ? kExitInconclusive : 0;
}

void record_solver(Run& run, const Flags& f)
{
    run.param("seed", f.seed);
    run.param("zero-tol", f.zero_tol);
    run.param("max-evals", static_cast<std::int64_t>(f.max_evals));
    run.param("exact-laguerre", f.exact_laguerre);
    if (!f.exact_laguerre) { record_grid(run); }
}

int cmd_fit(const Flags& f)
{
    Run run("fit", f);
    const Instance in = load_instance(f);
    record_instance(run, f);
    const double sigma = resolve_sigma(run, f, in.cfg);
    record_solver(run, f);
    const double a = resolve_a(run, f, in, sigma);
    run.param("eta", f.eta);
    const FitResult r = solve_p1(in.cfg, in.D, NoiseModel::iid(sigma), a, f.eta, solve_options(f));
    const std::string text = fit_text(r);
    std::cout << text;
    run.output("fit.txt", text);
    run.output("fit_trace.csv", fit_csv(r));
    run.output("fit_theta.csv", theta_csv(r.theta_star, in.cfg));
    run.finish();
    return 0;
}

int cmd_sweep(const Flags& f)
{
    Run run("sweep", f);
    const Instance in = load_instance(f);
    record_instance(run, f);
    const double sigma = resolve_sigma(run, f, in.cfg);
    record_solver(run, f);
    const double a = resolve_a(run, f, in, sigma);
    run.param("etas", f.etas);
    run.param("varrho", f.varrho);
    const auto sweep = eta_sweep(in.cfg, in.D, NoiseModel::iid(sigma), a, f.etas, solve_options(f));
    const SelectionReport s = selection(in.cfg, in.D, a, f.varrho);
    const std::size_t pick = suggest_eta(sweep, s.suggested_nonzero);
    std::ostringstream text;
    text << sweep_text(sweep, pick) << "suggested eta = " << fmt_sig(sweep[pick].eta, kTableDigits)
         << " (target " << s.suggested_nonzero << " nonzero displacements)\n";
    std::cout << text.str();
    run.output("sweep.txt", text.str());
    run.output("sweep.csv", sweep_csv(sweep));
    run.output("sweep_theta.csv", theta_csv(sweep[pick].theta_star, in.cfg));
    run.finish();
    return 0;
}

int cmd_simulate(const Flags& f)
{
    Run run("simulate", f);
    const Instance in = load_instance(f);
    record_instance(run, f);
    run.param("noise", f.noise);
    std::optional<NoiseModel> noise;
    if (f.noise == "dependent") {
        run.param("c", f.c);
        noise = NoiseModel::dependent(scaled_covariance(in.cfg, f.c));
    } else if (f.noise == "iid") {
        noise = NoiseModel::iid(resolve_sigma(run, f, in.cfg));
    } else {
        throw InputError("--noise must be 'dependent' or 'iid'");
    }
    run.param("seed", f.seed);
    const double a = resolve_a(run, f, in, noise_scale(*noise));
    run.param("temperature", f.temperature);
    run.param("xi", f.xi);
    run.param("iterations", static_cast<std::int64_t>(f.iterations));
    run.param("chains", static_cast<std::int64_t>(f.chains));
    run.param("frozen-geometry", f.frozen_geometry);
    run.param("paper-q", f.literal_q);

    MHOptions mo;
    mo.temperature = f.temperature;
    mo.xi = f.xi;
    mo.iterations = f.iterations;
    mo.seed = f.seed;
    mo.frozen_geometry = f.frozen_geometry;
    mo.literal_q = f.literal_q;
    const NoiseLaw law = NoiseLaw::from_model(*noise, in.cfg.p());
    MHTrace tr;
    if (f.chains == 1) {
        tr = mh_run(in.cfg, in.D, law, a, mo);
    } else {
        auto all = mh_run_chains(in.cfg, in.D, law, a, mo, f.chains);
        tr = std::move(all[best_chain(all)]);
    }
    const std::string text = simulate_text(tr);
    std::cout << text;
    run.output("simulate.txt", text);
    run.output("simulate_trace.csv", trace_csv(tr));
    run.output("simulate_theta.csv", theta_csv(tr.best_theta, in.cfg));
    run.finish();
    return 0;
}

int cmd_report(const Flags& f)
{
    Run run("report", f);
    detail::require(!f.target.empty(), "--target is required");
    detail::require(!f.theta.empty(), "--theta is required");
    detail::require(!f.categories.empty(), "--categories is required");
    const Configuration cfg = load_target(f.target);
    const Configuration th = load_target(f.theta);
    if (th.labels != cfg.labels || th.attr_names != cfg.attr_names) {
        throw InputError(f.theta + ": labels or attributes differ from the target");
    }
    const CategoryMap map = load_category_map(f.categories);
    run.input("target", f.target);
    run.input("theta", f.theta);
    run.input("categories", f.categories);
    run.param("zero-tol", f.zero_tol);
    const DisplacementSet theta(th.coords);
    const std::string text = cmd_report(theta, cfg, map, f.zero_tol);
    std::cout << text;
    run.output("report.txt", text);
    run.output("report.csv", category_csv(category_shares(theta, cfg.attr_names, map, f.zero_tol)));
    run.finish();
    return 0;
}

void add_io(CLI::App* sc, Flags& f, bool reference = true)
{
    f.add("target", sc->add_option("--target", f.target, "target matrix CSV (label,<attr>...)"));
    if (reference) {
        f.add("reference", sc->add_option("--reference", f.reference, "reference CSV"));
        f.add("reference-mode",
              sc->add_option("--reference-mode", f.reference_mode, "distances | scores")
                  ->check(CLI::IsMember({"distances", "scores"})));
    }
    sc->add_option("--out", f.out, "output directory");
    sc->add_flag("--force", f.force, "overwrite an existing manifest");
}

void add_model(CLI::App* sc, Flags& f)
{
    f.add("a", sc->add_option("--a", f.a, "scale a (default: alternating fit)")
                   ->check(CLI::PositiveNumber));
    f.add("sigma", sc->add_option("--sigma", f.sigma, "noise sd (default: mean column sd)")
                       ->check(CLI::PositiveNumber));
    f.add("seed", sc->add_option("--seed", f.seed, "random seed"));
    f.add("max-evals", sc->add_option("--max-evals", f.max_evals, "simplex evaluation budget")
                           ->check(CLI::PositiveNumber));
}

void add_solver(CLI::App* sc, Flags& f)
{
    f.add("zero-tol", sc->add_option("--zero-tol", f.zero_tol, "threshold below which theta is zero")
                          ->check(CLI::PositiveNumber));
    f.add("exact-laguerre", sc->add_flag("--exact-laguerre", f.exact_laguerre,
                                         "evaluate L directly instead of the grid"));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Random-model multidimensional fitting"};
    app.require_subcommand(1);
    Flags f;

    auto* scale = app.add_subcommand("scale", "estimate the scale a");
    add_io(scale, f);
    add_model(scale, f);

    auto* select = app.add_subcommand("select", "rho criterion and misplaced points");
    add_io(select, f);
    add_model(select, f);
    f.add("varrho", select->add_option("--varrho", f.varrho, "selection threshold")
                        ->check(CLI::Range(0.0, 1.0)));

    auto* test = app.add_subcommand("test", "Chebyshev test for the need of displacements");
    add_io(test, f);
    add_model(test, f);
    f.add("alpha", test->add_option("--alpha", f.alpha, "significance level")
                       ->check(CLI::Range(0.0, 1.0)));
    f.add("h0-literal-d", test->add_flag("--h0-literal-d", f.h0_literal_d,
                                         "use d_ij (not d_ij/a) as H0 distances"));

    auto* fit = app.add_subcommand("fit", "penalized fit for one eta");
    add_io(fit, f);
    add_model(fit, f);
    add_solver(fit, f);
    f.add("eta", fit->add_option("--eta", f.eta, "l0 penalty")->check(CLI::NonNegativeNumber));

    auto* sweep = app.add_subcommand("sweep", "penalized fits over a list of eta");
    add_io(sweep, f);
    add_model(sweep, f);
    add_solver(sweep, f);
    f.add("etas", sweep->add_option("--etas", f.etas, "comma-separated eta values")
                      ->delimiter(',')
                      ->check(CLI::NonNegativeNumber));
    f.add("varrho", sweep->add_option("--varrho", f.varrho, "selection threshold")
                        ->check(CLI::Range(0.0, 1.0)));

    auto* sim = app.add_subcommand("simulate", "Metropolis-Hastings simulation");
    add_io(sim, f);
    add_model(sim, f);
    f.add("xi", sim->add_option("--xi", f.xi, "hypersphere slack")->check(CLI::PositiveNumber));
    f.add("temperature", sim->add_option("--temperature", f.temperature, "temperature T")
                             ->check(CLI::PositiveNumber));
    f.add("c", sim->add_option("--c", f.c, "covariance multiplier")->check(CLI::PositiveNumber));
    f.add("iterations", sim->add_option("--iterations", f.iterations, "chain length")
                            ->check(CLI::NonNegativeNumber));
    f.add("chains", sim->add_option("--chains", f.chains, "independent chains")
                        ->check(CLI::PositiveNumber));
    f.add("noise", sim->add_option("--noise", f.noise, "dependent | iid")
                       ->check(CLI::IsMember({"dependent", "iid"})));
    f.add("frozen-geometry", sim->add_flag("--frozen-geometry", f.frozen_geometry,
                                           "hypersphere from the initial configuration"));
    f.add("paper-q", sim->add_flag("--paper-q", f.literal_q, "unnormalized proposal density"));

    auto* rep = app.add_subcommand("report", "null-displacement shares per category");
    add_io(rep, f, false);
    rep->add_option("--theta", f.theta, "displacements CSV written by fit/sweep/simulate");
    rep->add_option("--categories", f.categories, "attribute,category CSV");
    f.add("zero-tol", rep->add_option("--zero-tol", f.zero_tol, "threshold below which theta is zero")
                          ->check(CLI::PositiveNumber));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (*scale) { return cmd_scale(f); }
        if (*select) { return cmd_select(f); }
        if (*test) { return cmd_test(f); }
        if (*fit) { return cmd_fit(f); }
        if (*sweep) { return cmd_sweep(f); }
        if (*sim) { return cmd_simulate(f); }
        if (*rep) { return cmd_report(f); }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
