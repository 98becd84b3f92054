#include "ppgof/gof.hpp"

#include "ppgof/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ppgof {

std::string_view procedure_name(Procedure p) {
    switch (p) {
        case Procedure::Transform: return "transform";
        case Procedure::Naive: return "naive";
        case Procedure::Rtc: return "rtc";
    }
    return "?";
}

Procedure procedure_from_name(std::string_view name) {
    if (name == "transform") return Procedure::Transform;
    if (name == "naive") return Procedure::Naive;
    if (name == "rtc") return Procedure::Rtc;
    throw InvalidInput("unknown procedure: " + std::string(name));
}

std::string TestReport::to_json() const {
    nlohmann::ordered_json j;
    j["procedure"] = std::string(procedure_name(procedure));
    j["test"] = std::string(test_name(test));
    j["statistic"] = statistic;
    j["p_value"] = p_value;
    j["n_effective"] = n_effective;
    j["notes"] = notes;
    return j.dump(2);
}

PathFunction compensated_process(const Realization& r, const ModelSpec& model, int grid_m) {
    if (grid_m < 256) throw InvalidInput("compensated_process: grid size must be >= 256");
    r.validate();
    const double T = r.horizon;
    if (!(T > 0.0)) throw InvalidInput("compensated_process: horizon must be positive");

    const auto m = static_cast<std::size_t>(grid_m);
    std::vector<double> grid_times(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        grid_times[j] = T * static_cast<double>(j) / static_cast<double>(grid_m);
    }

    std::vector<double> aux;
    if (model.kind == ModelKind::Recursive) {
        aux = recursive_event_intensities(model, r);
    }
    const auto lambda_grid = compensator_grid(model, r, grid_times, aux);

    PathFunction eta;
    eta.dim = r.dim;
    eta.step = 1.0 / static_cast<double>(grid_m);
    eta.scale_T = T;
    eta.values.assign((m + 1) * static_cast<std::size_t>(r.dim), 0.0);

    const double root_t = std::sqrt(T);
    // Counting sweep (events <= grid time, per coordinate).
    std::vector<int> counts(static_cast<std::size_t>(r.dim), 0);
    std::size_t next_ev = 0;
    for (std::size_t j = 0; j <= m; ++j) {
        while (next_ev < r.size() && r.times[next_ev] <= grid_times[j]) {
            const auto k = static_cast<std::size_t>(r.coords.empty() ? 0 : r.coords[next_ev] - 1);
            counts[k] += 1;
            ++next_ev;
        }
        for (int k = 0; k < r.dim; ++k) {
            eta.values[j * static_cast<std::size_t>(r.dim) + static_cast<std::size_t>(k)] =
                (static_cast<double>(counts[static_cast<std::size_t>(k)]) -
                 lambda_grid[j][static_cast<std::size_t>(k)]) /
                root_t;
        }
    }
    eta.validate();
    return eta;
}

PathFunction martingale_transform(const PathFunction& eta, std::span<const double> mu_hat,
                                  double tau) {
    eta.validate();
    const auto dim = static_cast<std::size_t>(eta.dim);
    if (mu_hat.size() != dim) {
        throw InvalidInput("martingale_transform: mu_hat length must equal dim");
    }
    for (double v : mu_hat) {
        if (!(v > 0.0)) throw InvalidInput("martingale_transform: mu_hat must be positive");
    }
    const double h = eta.step;
    const double max_tau = 1.0 - 2.0 * h;
    if (!(tau > 0.0) || tau > max_tau + 1e-12) {
        std::ostringstream os;
        os << "martingale_transform: tau must lie in (0, 1 - 2/m] = (0, " << max_tau
           << "] for this grid";
        throw InvalidInput(os.str());
    }
    const std::size_t last = eta.nodes() - 1; // node at u = 1

    // Cut the output grid just past tau so increments() can interpolate
    // anywhere in [0, tau].
    auto out_nodes = static_cast<std::size_t>(std::ceil(tau / h - 1e-12)) + 1;
    out_nodes = std::min(out_nodes, last); // <= 1 - h, keeps 1/(1-v) finite

    PathFunction w;
    w.dim = eta.dim;
    w.step = h;
    w.scale_T = eta.scale_T;
    w.values.assign((out_nodes + 1) * dim, 0.0);

    for (std::size_t k = 0; k < dim; ++k) {
        const double eta1 = eta.at_node(last, static_cast<int>(k));
        const double inv_root_mu = 1.0 / std::sqrt(mu_hat[k]);
        double integral = 0.0;
        double prev_g = eta1 - eta.at_node(0, static_cast<int>(k)); // / (1 - 0)
        w.values[k] = eta.at_node(0, static_cast<int>(k)) * inv_root_mu;
        for (std::size_t j = 1; j <= out_nodes; ++j) {
            const double v = h * static_cast<double>(j);
            const double g = (eta1 - eta.at_node(j, static_cast<int>(k))) / (1.0 - v);
            integral += 0.5 * h * (prev_g + g);
            prev_g = g;
            w.values[j * dim + k] =
                (eta.at_node(j, static_cast<int>(k)) - integral) * inv_root_mu;
        }
    }
    return w;
}

IncrementSample increments(const PathFunction& w, int n, double tau) {
    w.validate();
    if (n < 1) throw InvalidInput("increments: n must be >= 1");
    if (!(tau > 0.0) || tau > w.domain_end() + 1e-9) {
        throw InvalidInput("increments: tau outside the path domain");
    }
    const auto m_eff = static_cast<int>(std::lround(1.0 / w.step));
    if (n > m_eff / 4) {
        throw InvalidInput("increments: grid too coarse for the requested n (need n <= m/4)");
    }
    IncrementSample out;
    out.n = n;
    out.dim = w.dim;
    out.tau = tau;
    out.z.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(w.dim));
    const double scale = std::sqrt(static_cast<double>(n) / tau);
    for (int k = 0; k < w.dim; ++k) {
        double prev = w.value(0.0, k);
        for (int i = 1; i <= n; ++i) {
            const double cur = w.value(tau * static_cast<double>(i) / static_cast<double>(n), k);
            out.z[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(w.dim) +
                  static_cast<std::size_t>(k)] = scale * (cur - prev);
            prev = cur;
        }
    }
    return out;
}

int choose_n(double count_basis, double c, int floor_n) {
    if (!(count_basis > 0.0) || !(c > 0.0)) {
        throw InvalidInput("choose_n: count_basis and c must be positive");
    }
    const auto n = static_cast<int>(std::ceil(c * std::sqrt(count_basis) - 1e-12));
    return std::max(n, floor_n);
}

namespace {

std::vector<double> event_rate_per_coord(const Realization& r) {
    std::vector<double> mu(static_cast<std::size_t>(r.dim), 0.0);
    if (r.coords.empty()) {
        mu[0] = static_cast<double>(r.size()) / r.horizon;
    } else {
        for (int c : r.coords) mu[static_cast<std::size_t>(c - 1)] += 1.0;
        for (auto& v : mu) v /= r.horizon;
    }
    return mu;
}

ModelSpec fitted_model(ModelKind kind, const FitResult& fit, const Realization& r) {
    if (!fit.converged) {
        throw InvalidInput("goodness-of-fit test requires a converged fit");
    }
    ModelSpec m;
    m.kind = kind;
    m.params = fit.params_hat;
    m.dim = r.dim;
    m.validate();
    return m;
}

TestReport finish_report(Procedure proc, TestKind test, const IncrementSample& z) {
    const auto outcome = run_test(test, z.pooled(), NullDistribution{NullKind::StdNormal});
    TestReport rep;
    rep.procedure = proc;
    rep.test = test;
    rep.statistic = outcome.statistic;
    rep.p_value = outcome.p_value;
    rep.n_effective = z.n * z.dim;
    if (rep.n_effective < 10) {
        rep.notes = "small increment sample (n_effective < 10): asymptotic p-value is rough";
    }
    return rep;
}

int resolve_grid(const GofOptions& opt, int n) {
    return opt.grid_m > 0 ? opt.grid_m : std::max(4096, 64 * n);
}

} // namespace

TestReport transformation_test(const Realization& r, ModelKind null_kind, const FitResult& fit,
                               int n, double tau, TestKind test, const GofOptions& opt) {
    const auto model = fitted_model(null_kind, fit, r);
    const auto eta = compensated_process(r, model, resolve_grid(opt, n));
    const auto mu_hat = event_rate_per_coord(r);
    const auto w = martingale_transform(eta, mu_hat, tau);
    const auto z = increments(w, n, tau);
    return finish_report(Procedure::Transform, test, z);
}

TestReport naive_test(const Realization& r, ModelKind null_kind, const FitResult& fit,
                      int n, double tau, TestKind test, const GofOptions& opt) {
    const auto model = fitted_model(null_kind, fit, r);
    auto eta = compensated_process(r, model, resolve_grid(opt, n));
    const auto mu_hat = event_rate_per_coord(r);
    for (double v : mu_hat) {
        if (!(v > 0.0)) throw InvalidInput("naive_test: empty coordinate");
    }
    const auto dim = static_cast<std::size_t>(eta.dim);
    for (std::size_t j = 0; j < eta.nodes(); ++j) {
        for (std::size_t k = 0; k < dim; ++k) {
            eta.values[j * dim + k] /= std::sqrt(mu_hat[k]);
        }
    }
    const auto z = increments(eta, n, tau);
    return finish_report(Procedure::Naive, test, z);
}

TestReport rtc_test(const Realization& r, ModelKind null_kind, const FitResult& fit,
                    TestKind test) {
    if (r.size() < 2) {
        throw InsufficientData("rtc_test: need at least 2 events");
    }
    const auto model = fitted_model(null_kind, fit, r);
    std::vector<double> aux;
    if (model.kind == ModelKind::Recursive) {
        aux = recursive_event_intensities(model, r);
    }
    const auto transformed = compensator_at_events(model, r, aux);

    // Interarrivals per coordinate with t_0 = 0; the first value is
    // Lambda(t_1) - Lambda(0), so the sample keeps size N(T).
    std::vector<double> sample;
    sample.reserve(transformed.size());
    std::vector<double> prev(static_cast<std::size_t>(r.dim), 0.0);
    for (std::size_t i = 0; i < transformed.size(); ++i) {
        const auto k = static_cast<std::size_t>(r.coords.empty() ? 0 : r.coords[i] - 1);
        sample.push_back(transformed[i] - prev[k]);
        prev[k] = transformed[i];
    }

    const auto outcome = run_test(test, sample, NullDistribution{NullKind::StdExponential});
    TestReport rep;
    rep.procedure = Procedure::Rtc;
    rep.test = test;
    rep.statistic = outcome.statistic;
    rep.p_value = outcome.p_value;
    rep.n_effective = static_cast<int>(sample.size());
    return rep;
}

} // namespace ppgof
