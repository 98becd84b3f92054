// Command-line interface: simulate parametric point processes, fit them by
// maximum likelihood, and run the goodness-of-fit procedures.

#include "ppgof/csv.hpp"
#include "ppgof/errors.hpp"
#include "ppgof/experiment.hpp"
#include "ppgof/gof.hpp"
#include "ppgof/ingest.hpp"
#include "ppgof/likelihood.hpp"
#include "ppgof/simulate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace ppgof;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot open for writing: " + path);
    f << text;
}

struct EventInputOptions {
    std::string in_path;
    double horizon = 0.0;
    // Catalog mode (real-data files with coarse resolution):
    std::string time_column;
    std::string resolution = "exact";
    std::string mark_column;
    double mark_cutoff = 0.0;
    bool has_cutoff = false;
    std::string epoch;
    std::uint64_t jitter_seed = 0;

    void add_to(CLI::App* cmd, bool horizon_required) {
        cmd->add_option("--in", in_path, "input events CSV")->required();
        auto* h = cmd->add_option("--horizon", horizon,
                                  "observation window end T (canonical CSVs may embed it)");
        if (horizon_required) h->check(CLI::PositiveNumber);
        cmd->add_option("--time-column", time_column,
                        "catalog mode: name of the time column");
        cmd->add_option("--resolution", resolution, "exact|daily|weekly")
            ->check(CLI::IsMember({"exact", "daily", "weekly"}));
        cmd->add_option("--mark-column", mark_column, "catalog mode: mark (magnitude) column");
        cmd->add_option("--mark-cutoff", mark_cutoff, "keep events with mark >= cutoff")
            ->each([this](const std::string&) { has_cutoff = true; });
        cmd->add_option("--epoch", epoch, "date origin for ISO-8601 time columns (YYYY-MM-DD)");
        cmd->add_option("--jitter-seed", jitter_seed, "seed for the resolution jitter");
    }

    bool catalog_mode() const { return !time_column.empty(); }

    Realization load() const {
        if (!catalog_mode()) {
            return read_realization_csv(in_path, horizon);
        }
        CatalogSchema schema;
        schema.time_column = time_column;
        schema.time_resolution = resolution_from_name(resolution);
        if (!mark_column.empty()) schema.mark_column = mark_column;
        if (has_cutoff) schema.mark_cutoff = mark_cutoff;
        schema.epoch = epoch;
        if (!(horizon > 0.0)) {
            throw InvalidInput("catalog mode requires --horizon");
        }
        const auto catalog = load_events(in_path, schema);
        return jitter(catalog, schema, horizon, SeedSpec{jitter_seed, 0});
    }
};

ModelSpec model_from(const std::string& kind_name_, const std::vector<double>& params,
                     double mark_cutoff) {
    auto m = make_model(kind_from_name(kind_name_), params);
    m.mark_cutoff = mark_cutoff;
    return m;
}

Bounds bounds_from(ModelKind kind, const std::vector<double>& lo, const std::vector<double>& hi) {
    if (lo.empty() && hi.empty()) return default_bounds(kind);
    if (lo.size() != hi.size() ||
        lo.size() != static_cast<std::size_t>(param_count(kind))) {
        throw InvalidInput("--lo/--hi must both list one bound per parameter");
    }
    Bounds b;
    for (std::size_t i = 0; i < lo.size(); ++i) b.emplace_back(lo[i], hi[i]);
    return b;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"goodness-of-fit testing for temporal point processes"};
    app.require_subcommand(1);

    // --- simulate ---------------------------------------------------------
    auto* sim_cmd = app.add_subcommand("simulate", "draw one realization by Ogata thinning");
    std::string sim_model;
    std::vector<double> sim_params;
    double sim_horizon = 0.0;
    std::uint64_t sim_seed = 0;
    std::uint32_t sim_rep = 0;
    std::string sim_out, shots_out;
    double sim_cutoff = 6.0;
    double sim_mark_b = 1.0;
    bool allow_unstable = false;
    sim_cmd->add_option("--model", sim_model, "model kind")->required();
    sim_cmd->add_option("--params", sim_params, "parameter vector")->required()->delimiter(',');
    sim_cmd->add_option("--horizon", sim_horizon, "window end T")->required()->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--seed", sim_seed, "experiment seed");
    sim_cmd->add_option("--rep", sim_rep, "replication index");
    sim_cmd->add_option("--out", sim_out, "output events CSV (default stdout)");
    sim_cmd->add_option("--shots-out", shots_out, "ShotNoise: dump the latent driver times");
    sim_cmd->add_option("--mark-cutoff", sim_cutoff, "EtasTemporal magnitude cutoff");
    sim_cmd->add_option("--mark-b", sim_mark_b, "EtasTemporal Gutenberg-Richter b-value");
    sim_cmd->add_flag("--allow-unstable", allow_unstable, "simulate past a failed stability check");

    // --- fit --------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "maximum likelihood fit of a null family");
    EventInputOptions fit_in;
    fit_in.add_to(fit_cmd, false);
    std::string fit_null;
    std::vector<double> fit_lo, fit_hi;
    int fit_starts = 5;
    std::uint64_t fit_seed = 0;
    double fit_cutoff = 6.0;
    std::string fit_out;
    fit_cmd->add_option("--null", fit_null, "null family kind")->required();
    fit_cmd->add_option("--lo", fit_lo, "lower bounds")->delimiter(',');
    fit_cmd->add_option("--hi", fit_hi, "upper bounds")->delimiter(',');
    fit_cmd->add_option("--starts", fit_starts, "number of multistart points");
    fit_cmd->add_option("--seed", fit_seed, "seed for the start sampling");
    fit_cmd->add_option("--fit-mark-cutoff", fit_cutoff, "EtasTemporal magnitude cutoff");
    fit_cmd->add_option("--out", fit_out, "output FitResult JSON (default stdout)");

    // --- test -------------------------------------------------------------
    auto* test_cmd = app.add_subcommand("test", "one goodness-of-fit run on an event file");
    EventInputOptions test_in;
    test_in.add_to(test_cmd, false);
    std::string test_null, test_proc = "transform", test_kind = "AD", test_basis = "horizon";
    std::vector<double> test_lo, test_hi;
    double test_nc = 0.25, test_tau = 0.9;
    int test_nfloor = 1, test_n = 0, test_grid = 0, test_starts = 5;
    std::uint64_t test_seed = 0;
    double test_cutoff = 6.0;
    std::string test_out, fit_json_out, path_out;
    test_cmd->add_option("--null", test_null, "null family kind")->required();
    test_cmd->add_option("--procedure", test_proc, "transform|naive|rtc");
    test_cmd->add_option("--test", test_kind, "KS|CvM|AD");
    test_cmd->add_option("--n-c", test_nc, "n-rule factor c");
    test_cmd->add_option("--n-floor", test_nfloor, "n-rule floor");
    test_cmd->add_option("--n", test_n, "override n directly (skips the rule)");
    test_cmd->add_option("--basis", test_basis, "n-rule count basis: horizon|events")
        ->check(CLI::IsMember({"horizon", "events"}));
    test_cmd->add_option("--tau", test_tau, "transform endpoint in (0,1)");
    test_cmd->add_option("--grid", test_grid, "grid size m (0: max(4096, 64 n))");
    test_cmd->add_option("--lo", test_lo, "fit lower bounds")->delimiter(',');
    test_cmd->add_option("--hi", test_hi, "fit upper bounds")->delimiter(',');
    test_cmd->add_option("--starts", test_starts, "fit multistart points");
    test_cmd->add_option("--seed", test_seed, "fit start seed");
    test_cmd->add_option("--fit-mark-cutoff", test_cutoff, "EtasTemporal magnitude cutoff");
    test_cmd->add_option("--out", test_out, "output TestReport JSON (default stdout)");
    test_cmd->add_option("--fit-out", fit_json_out, "also dump the FitResult JSON");
    test_cmd->add_option("--path-out", path_out, "also dump the test-process path CSV");

    // --- montecarlo -------------------------------------------------------
    auto* mc_cmd = app.add_subcommand("montecarlo", "run a declarative experiment config");
    std::string mc_config, mc_table_out, mc_pvalues_out;
    mc_cmd->add_option("--config", mc_config, "experiment config file")->required();
    mc_cmd->add_option("--out-table", mc_table_out, "rejection table CSV (default stdout)");
    mc_cmd->add_option("--out-pvalues", mc_pvalues_out, "p-value log CSV");

    // --- qq ---------------------------------------------------------------
    auto* qq_cmd = app.add_subcommand("qq", "quantile pairs against a reference distribution");
    std::string qq_in, qq_column = "statistic", qq_ref = "kolmogorov", qq_out;
    qq_cmd->add_option("--in", qq_in, "statistics CSV")->required();
    qq_cmd->add_option("--column", qq_column, "column to read (default 'statistic')");
    qq_cmd->add_option("--reference", qq_ref, "kolmogorov|normal|exponential");
    qq_cmd->add_option("--out", qq_out, "output pairs CSV (default stdout)");

    // --- ingest -----------------------------------------------------------
    auto* ing_cmd = app.add_subcommand("ingest", "catalog CSV -> canonical realization CSV");
    EventInputOptions ing_in;
    ing_in.add_to(ing_cmd, true);
    std::string ing_out;
    ing_cmd->add_option("--out", ing_out, "output events CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (sim_cmd->parsed()) {
        auto model = model_from(sim_model, sim_params, sim_cutoff);
        SimOptions opt;
        opt.allow_unstable = allow_unstable;
        opt.etas_mark_b = sim_mark_b;
        const auto sim = simulate(model, sim_horizon, SeedSpec{sim_seed, sim_rep}, opt);
        const auto csv = realization_to_csv(sim.realization);
        if (sim_out.empty()) std::cout << csv;
        else write_text(sim_out, csv);
        if (!shots_out.empty()) {
            Realization shots;
            shots.times = sim.shots;
            shots.horizon = sim_horizon;
            write_text(shots_out, realization_to_csv(shots));
        }
        return 0;
    }

    if (fit_cmd->parsed()) {
        const auto r = fit_in.load();
        const auto kind = kind_from_name(fit_null);
        FitOptions opt;
        opt.n_starts = fit_starts;
        opt.seed = fit_seed;
        opt.mark_cutoff = fit_cutoff;
        const auto fit = fit_mle(kind, r, bounds_from(kind, fit_lo, fit_hi), opt);
        const auto json = fit.to_json(kind) + "\n";
        if (fit_out.empty()) std::cout << json;
        else write_text(fit_out, json);
        return 0;
    }

    if (test_cmd->parsed()) {
        const auto r = test_in.load();
        const auto kind = kind_from_name(test_null);
        FitOptions fopt;
        fopt.n_starts = test_starts;
        fopt.seed = test_seed;
        fopt.mark_cutoff = test_cutoff;
        const auto fit = fit_mle(kind, r, bounds_from(kind, test_lo, test_hi), fopt);

        const double basis = test_basis == "horizon"
                                 ? r.horizon
                                 : static_cast<double>(r.size());
        const int n = test_n > 0 ? test_n : choose_n(basis, test_nc, test_nfloor);
        GofOptions gopt;
        gopt.grid_m = test_grid;

        const auto proc = procedure_from_name(test_proc);
        const auto tk = test_from_name(test_kind);
        TestReport report;
        switch (proc) {
            case Procedure::Transform:
                report = transformation_test(r, kind, fit, n, test_tau, tk, gopt);
                break;
            case Procedure::Naive:
                report = naive_test(r, kind, fit, n, test_tau, tk, gopt);
                break;
            case Procedure::Rtc:
                report = rtc_test(r, kind, fit, tk);
                break;
        }
        const auto json = report.to_json() + "\n";
        if (test_out.empty()) std::cout << json;
        else write_text(test_out, json);
        if (!fit_json_out.empty()) write_text(fit_json_out, fit.to_json(kind) + "\n");
        if (!path_out.empty() && proc != Procedure::Rtc) {
            ModelSpec fitted;
            fitted.kind = kind;
            fitted.params = fit.params_hat;
            fitted.dim = r.dim;
            fitted.mark_cutoff = test_cutoff;
            const auto eta = compensated_process(r, fitted, gopt.grid_m > 0 ? gopt.grid_m
                                                                            : std::max(4096, 64 * n));
            std::vector<double> mu_hat{static_cast<double>(r.size()) / r.horizon};
            if (proc == Procedure::Transform) {
                write_text(path_out, martingale_transform(eta, mu_hat, test_tau).to_csv());
            } else {
                auto scaled = eta;
                for (auto& v : scaled.values) v /= std::sqrt(mu_hat[0]);
                write_text(path_out, scaled.to_csv());
            }
        }
        return 0;
    }

    if (mc_cmd->parsed()) {
        const auto cfg = load_experiment_config(mc_config);
        const auto table = run_experiment(cfg);
        if (mc_table_out.empty()) std::cout << table.table_csv();
        else write_text(mc_table_out, table.table_csv());
        if (!mc_pvalues_out.empty()) write_text(mc_pvalues_out, table.pvalues_csv());
        return 0;
    }

    if (qq_cmd->parsed()) {
        const auto stats = read_numeric_column(qq_in, qq_column);
        const auto pairs = qq_data(stats, qq_reference_from_name(qq_ref));
        const auto csv = qq_pairs_csv(pairs);
        if (qq_out.empty()) std::cout << csv;
        else write_text(qq_out, csv);
        return 0;
    }

    if (ing_cmd->parsed()) {
        const auto r = ing_in.load();
        const auto csv = realization_to_csv(r);
        if (ing_out.empty()) std::cout << csv;
        else write_text(ing_out, csv);
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ppgof::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ppgof::InsufficientData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
