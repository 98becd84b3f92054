#include "ppgof/experiment.hpp"

#include "ppgof/csv.hpp"
#include "ppgof/errors.hpp"
#include "ppgof/rng.hpp"
#include "ppgof/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace ppgof {

void ExperimentConfig::validate() const {
    true_model.validate();
    if (replications < 1) throw InvalidInput("config: replications must be >= 1");
    if (!(horizon > 0.0)) throw InvalidInput("config: horizon must be positive");
    if (procedures.empty()) throw InvalidInput("config: no procedures selected");
    if (tests.empty()) throw InvalidInput("config: no tests selected");
    if (levels.empty()) throw InvalidInput("config: no levels given");
    for (double lv : levels) {
        if (!(lv > 0.0 && lv < 1.0)) throw InvalidInput("config: levels must lie in (0,1)");
    }
    if (!(tau > 0.0 && tau < 1.0)) throw InvalidInput("config: tau must lie in (0,1)");
    if (!(n_rule.c > 0.0)) throw InvalidInput("config: n_c must be positive");
}

namespace {

std::vector<std::string> tokens(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : value) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> parse_doubles(const std::string& value, const std::string& key) {
    std::vector<double> out;
    for (const auto& t : tokens(value)) {
        char* end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        if (end == t.c_str()) throw InvalidInput("config: bad number in " + key + ": " + t);
        out.push_back(v);
    }
    return out;
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw InvalidInput("config line " + std::to_string(lineno) +
                                   ": expected 'key = value'");
            }
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw InvalidInput("config line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key)) throw InvalidInput("config: duplicate key '" + key + "'");
        kv[key] = value;
    }

    auto take = [&](const std::string& key) -> std::string {
        const auto it = kv.find(key);
        if (it == kv.end()) return {};
        const auto v = it->second;
        kv.erase(it);
        return v;
    };
    auto require = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw InvalidInput("config: missing required key '" + key + "'");
        const auto v = it->second;
        kv.erase(it);
        return v;
    };

    const auto version = require("schema_version");
    if (version != "1") {
        throw InvalidInput("config: unsupported schema_version '" + version + "' (expected 1)");
    }

    ExperimentConfig cfg;
    cfg.true_model.kind = kind_from_name(require("true_model"));
    cfg.true_model.params = parse_doubles(require("true_params"), "true_params");
    if (const auto v = take("true_mark_cutoff"); !v.empty()) {
        cfg.true_model.mark_cutoff = parse_doubles(v, "true_mark_cutoff").at(0);
    }
    cfg.null_family = kind_from_name(require("null_family"));
    const auto lo = take("null_lo");
    const auto hi = take("null_hi");
    if (lo.empty() != hi.empty()) {
        throw InvalidInput("config: null_lo and null_hi must be given together");
    }
    if (!lo.empty()) {
        const auto lov = parse_doubles(lo, "null_lo");
        const auto hiv = parse_doubles(hi, "null_hi");
        if (lov.size() != hiv.size()) {
            throw InvalidInput("config: null_lo and null_hi lengths differ");
        }
        for (std::size_t i = 0; i < lov.size(); ++i) {
            cfg.null_bounds.emplace_back(lov[i], hiv[i]);
        }
    }
    cfg.horizon = parse_doubles(require("horizon"), "horizon").at(0);
    cfg.replications = static_cast<int>(parse_doubles(require("replications"), "replications").at(0));
    if (const auto v = take("procedures"); !v.empty()) {
        cfg.procedures.clear();
        for (const auto& t : tokens(v)) cfg.procedures.push_back(procedure_from_name(t));
    }
    if (const auto v = take("tests"); !v.empty()) {
        cfg.tests.clear();
        for (const auto& t : tokens(v)) cfg.tests.push_back(test_from_name(t));
    }
    if (const auto v = take("levels"); !v.empty()) cfg.levels = parse_doubles(v, "levels");
    if (const auto v = take("n_c"); !v.empty()) cfg.n_rule.c = parse_doubles(v, "n_c").at(0);
    if (const auto v = take("n_floor"); !v.empty()) {
        cfg.n_rule.floor_n = static_cast<int>(parse_doubles(v, "n_floor").at(0));
    }
    if (const auto v = take("count_basis"); !v.empty()) {
        if (v == "horizon") cfg.count_basis = CountBasis::Horizon;
        else if (v == "events") cfg.count_basis = CountBasis::Events;
        else throw InvalidInput("config: count_basis must be 'horizon' or 'events'");
    }
    if (const auto v = take("tau"); !v.empty()) cfg.tau = parse_doubles(v, "tau").at(0);
    if (const auto v = take("grid_m"); !v.empty()) {
        cfg.grid_m = static_cast<int>(parse_doubles(v, "grid_m").at(0));
    }
    if (const auto v = take("experiment_seed"); !v.empty()) {
        cfg.experiment_seed = static_cast<std::uint64_t>(std::strtoull(v.c_str(), nullptr, 10));
    }
    if (const auto v = take("n_starts"); !v.empty()) {
        cfg.n_starts = static_cast<int>(parse_doubles(v, "n_starts").at(0));
    }
    if (const auto v = take("workers"); !v.empty()) {
        cfg.workers = static_cast<int>(parse_doubles(v, "workers").at(0));
    }

    if (!kv.empty()) {
        std::ostringstream os;
        os << "config: unknown key(s):";
        for (const auto& [k, _] : kv) os << " '" << k << "'";
        throw InvalidInput(os.str());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open config: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_experiment_config(os.str());
}

int RejectionTable::count(Procedure p, TestKind t, double level) const {
    int c = 0;
    for (const auto& rec : records) {
        if (rec.procedure == p && rec.test == t && rec.p_value < level) ++c;
    }
    return c;
}

std::string RejectionTable::table_csv() const {
    // Preserve the record ordering of a single replication.
    std::vector<std::pair<Procedure, TestKind>> cells;
    for (const auto& rec : records) {
        const auto cell = std::make_pair(rec.procedure, rec.test);
        if (std::find(cells.begin(), cells.end(), cell) == cells.end()) {
            cells.push_back(cell);
        }
        if (rec.replication > 0) break;
    }
    std::ostringstream os;
    os << "procedure,test,level,rejections,total\n";
    for (const auto& [proc, test] : cells) {
        for (double level : levels) {
            os << procedure_name(proc) << ',' << test_name(test) << ','
               << format_sig12(level) << ',' << count(proc, test, level) << ',' << total
               << "\n";
        }
    }
    return os.str();
}

std::string RejectionTable::pvalues_csv() const {
    std::ostringstream os;
    os << "replication,procedure,test,statistic,p_value\n";
    for (const auto& rec : records) {
        os << rec.replication << ',' << procedure_name(rec.procedure) << ','
           << test_name(rec.test) << ',' << format_sig12(rec.statistic) << ','
           << format_sig12(rec.p_value) << "\n";
    }
    return os.str();
}

namespace {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PPGOF_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

RejectionTable run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Bounds bounds =
        config.null_bounds.empty() ? default_bounds(config.null_family) : config.null_bounds;

    const int reps = config.replications;
    std::vector<std::vector<PValueRecord>> slots(static_cast<std::size_t>(reps));
    std::atomic<int> next{0};
    std::atomic<int> redraws{0};
    std::atomic<bool> fatal{false};
    std::string fatal_message;
    std::mutex fatal_mutex;

    constexpr int kMaxRetries = 24;

    auto worker = [&]() {
        while (!fatal.load(std::memory_order_relaxed)) {
            const int r = next.fetch_add(1);
            if (r >= reps) break;
            try {
                std::vector<PValueRecord> recs;
                for (int attempt = 0;; ++attempt) {
                    if (attempt >= kMaxRetries) {
                        throw ExperimentError("replication " + std::to_string(r) +
                                              ": too many failed fit attempts");
                    }
                    const SeedSpec seed{config.experiment_seed, static_cast<std::uint32_t>(r)};
                    SimulationResult sim;
                    FitResult fit;
                    try {
                        SimOptions sopt;
                        sopt.stream = stream_tag::kSimulate + 16ULL * static_cast<std::uint64_t>(attempt);
                        sim = simulate(config.true_model, config.horizon, seed, sopt);
                        FitOptions fopt;
                        fopt.n_starts = config.n_starts;
                        fopt.seed = Rng(seed, stream_tag::kFit + 16ULL * attempt).next_u64();
                        fit = fit_mle(config.null_family, sim.realization, bounds, fopt);
                        if (!fit.converged) throw FitFailure("fit did not converge");
                    } catch (const FitFailure&) {
                        redraws.fetch_add(1);
                        continue;
                    } catch (const SimulationBlowup&) {
                        redraws.fetch_add(1);
                        continue;
                    } catch (const InsufficientData&) {
                        redraws.fetch_add(1);
                        continue;
                    }

                    const double basis = config.count_basis == CountBasis::Horizon
                                             ? config.horizon
                                             : static_cast<double>(sim.realization.size());
                    const int n = choose_n(basis, config.n_rule.c, config.n_rule.floor_n);
                    GofOptions gopt;
                    gopt.grid_m = config.grid_m;
                    for (Procedure proc : config.procedures) {
                        for (TestKind test : config.tests) {
                            TestReport rep;
                            switch (proc) {
                                case Procedure::Transform:
                                    rep = transformation_test(sim.realization, config.null_family,
                                                              fit, n, config.tau, test, gopt);
                                    break;
                                case Procedure::Naive:
                                    rep = naive_test(sim.realization, config.null_family, fit, n,
                                                     config.tau, test, gopt);
                                    break;
                                case Procedure::Rtc:
                                    rep = rtc_test(sim.realization, config.null_family, fit, test);
                                    break;
                            }
                            recs.push_back(PValueRecord{r, proc, test, rep.statistic, rep.p_value});
                        }
                    }
                    break;
                }
                slots[static_cast<std::size_t>(r)] = std::move(recs);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fatal_mutex);
                fatal.store(true);
                if (fatal_message.empty()) fatal_message = e.what();
            }
        }
    };

    const int n_workers = std::min(resolve_workers(config.workers), reps);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    if (fatal.load()) throw ExperimentError(fatal_message);
    const double failure_rate =
        static_cast<double>(redraws.load()) / static_cast<double>(reps);
    if (failure_rate > config.max_failure_rate) {
        std::ostringstream os;
        os << "experiment: " << redraws.load() << " re-drawn replications out of " << reps
           << " exceeds the failure budget (" << config.max_failure_rate * 100.0 << "%)";
        throw ExperimentError(os.str());
    }

    RejectionTable table;
    table.levels = config.levels;
    table.total = reps;
    table.redraws = redraws.load();
    for (auto& recs : slots) {
        for (auto& rec : recs) table.records.push_back(rec);
    }
    return table;
}

QqReference qq_reference_from_name(std::string_view name) {
    if (name == "kolmogorov" || name == "Kolmogorov") return QqReference::Kolmogorov;
    if (name == "normal" || name == "StdNormal") return QqReference::StdNormal;
    if (name == "exponential" || name == "StdExponential") return QqReference::StdExponential;
    throw InvalidInput("unknown qq reference: " + std::string(name));
}

std::vector<std::pair<double, double>> qq_data(std::span<const double> statistics,
                                               QqReference reference) {
    if (statistics.empty()) throw InvalidInput("qq_data: empty sample");
    std::vector<double> x(statistics.begin(), statistics.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) / n;
        double q = 0.0;
        switch (reference) {
            case QqReference::Kolmogorov: q = kolmogorov_quantile(p); break;
            case QqReference::StdNormal: q = normal_quantile(p); break;
            case QqReference::StdExponential: q = exponential_quantile(p); break;
        }
        pairs.emplace_back(x[i], q);
    }
    return pairs;
}

std::string qq_pairs_csv(const std::vector<std::pair<double, double>>& pairs) {
    std::ostringstream os;
    os << "empirical_quantile,theoretical_quantile\n";
    for (const auto& [e, t] : pairs) {
        os << format_sig12(e) << ',' << format_sig12(t) << "\n";
    }
    return os.str();
}

std::pair<double, double> fit_line(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2) throw InvalidInput("fit_line: need at least two pairs");
    // Regress empirical on theoretical quantiles (x = theory, y = data).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(pairs.size());
    for (const auto& [emp, theo] : pairs) {
        sx += theo;
        sy += emp;
        sxx += theo * theo;
        sxy += theo * emp;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

} // namespace ppgof
