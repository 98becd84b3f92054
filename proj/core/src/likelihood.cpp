#include "ppgof/likelihood.hpp"

#include "ppgof/errors.hpp"
#include "ppgof/nelder_mead.hpp"
#include "ppgof/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ppgof {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log-likelihood contribution of one coordinate's event times.
double coord_loglik(const ModelSpec& m, std::span<const double> ev,
                    std::span<const double> marks, double horizon) {
    const auto& q = m.params;
    switch (m.kind) {
        case ModelKind::ExpHawkes: {
            const double mu = q[0], alpha = q[1], beta = q[2];
            double ll = 0.0;
            double decayed = 0.0; // sum exp(-beta (t_i - t_j)), j < i
            double comp_tail = 0.0;
            double prev = 0.0;
            for (std::size_t i = 0; i < ev.size(); ++i) {
                decayed = i == 0 ? 0.0 : (decayed + 1.0) * std::exp(-beta * (ev[i] - prev));
                prev = ev[i];
                const double lam = mu + alpha * decayed;
                if (!(lam > 0.0)) return kNegInf;
                ll += std::log(lam);
                comp_tail += -std::expm1(-beta * (horizon - ev[i]));
            }
            return ll - mu * horizon - (alpha / beta) * comp_tail;
        }
        case ModelKind::PowerLawHawkes: {
            const double mu = q[0], alpha = q[1], beta = q[2];
            double ll = 0.0;
            double comp = mu * horizon;
            for (std::size_t i = 0; i < ev.size(); ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < i; ++j) {
                    s += std::pow(1.0 + ev[i] - ev[j], -beta);
                }
                const double lam = mu + alpha * s;
                if (!(lam > 0.0)) return kNegInf;
                ll += std::log(lam);
                if (std::abs(beta - 1.0) < 1e-12) {
                    comp += alpha * std::log1p(horizon - ev[i]);
                } else {
                    comp += (alpha / (beta - 1.0)) *
                            (1.0 - std::pow(1.0 + horizon - ev[i], 1.0 - beta));
                }
            }
            return ll - comp;
        }
        case ModelKind::ShotNoise:
            // Latent Poisson driver: the event-time likelihood is not
            // available in closed form; any nonempty sample is infeasible.
            return ev.empty() ? 0.0 : kNegInf;
        case ModelKind::PeriodicPoisson: {
            const double mu = q[0], alpha = q[1], beta = q[2], gamma = q[3];
            double ll = 0.0;
            for (double t : ev) {
                const double lam = mu + alpha * std::sin(beta * (t - gamma));
                if (!(lam > 0.0)) return kNegInf;
                ll += std::log(lam);
            }
            const double comp = mu * horizon + (alpha / beta) *
                                (std::cos(beta * gamma) - std::cos(beta * (horizon - gamma)));
            return ll - comp;
        }
        case ModelKind::SelfCorrecting: {
            const double log_mu = std::log(q[0]);
            const double log_alpha = std::log(q[1]);
            const double beta = q[2];
            double ll = 0.0;
            double comp = 0.0;
            double seg_start = 0.0;
            for (std::size_t i = 0; i < ev.size(); ++i) {
                ll += log_mu + beta * ev[i] + static_cast<double>(i) * log_alpha;
                const double lam_start = std::exp(log_mu + beta * seg_start +
                                                  static_cast<double>(i) * log_alpha);
                comp += lam_start * std::expm1(beta * (ev[i] - seg_start)) / beta;
                seg_start = ev[i];
            }
            const double lam_start = std::exp(log_mu + beta * seg_start +
                                              static_cast<double>(ev.size()) * log_alpha);
            comp += lam_start * std::expm1(beta * (horizon - seg_start)) / beta;
            if (!std::isfinite(comp)) return kNegInf;
            return ll - comp;
        }
        case ModelKind::EtasTemporal: {
            const double mu = q[0], k = q[1], c = q[2], beta = q[3];
            if (ev.empty()) return -mu * horizon;
            if (marks.size() != ev.size()) {
                throw InvalidInput("EtasTemporal likelihood requires marks");
            }
            double ll = 0.0;
            double comp = mu * horizon;
            std::vector<double> w(ev.size());
            for (std::size_t i = 0; i < ev.size(); ++i) {
                w[i] = std::exp(beta * (marks[i] - m.mark_cutoff));
            }
            for (std::size_t i = 0; i < ev.size(); ++i) {
                double s = mu;
                for (std::size_t j = 0; j < i; ++j) {
                    s += w[j] * k / (ev[i] - ev[j] + c);
                }
                if (!(s > 0.0)) return kNegInf;
                ll += std::log(s);
                comp += w[i] * k * std::log((horizon - ev[i] + c) / c);
            }
            return ll - comp;
        }
        case ModelKind::Recursive: {
            const double mu = q[0], kappa = q[1], beta = q[2], alpha = q[3];
            double ll = 0.0;
            double comp = mu * horizon;
            double state = 0.0;
            double prev = 0.0;
            for (std::size_t i = 0; i < ev.size(); ++i) {
                state *= std::exp(-beta * (ev[i] - prev));
                prev = ev[i];
                const double lam = mu + beta * state;
                if (!(lam > 0.0)) return kNegInf;
                ll += std::log(lam);
                const double w = kappa / std::pow(lam, alpha);
                comp += w * -std::expm1(-beta * (horizon - ev[i]));
                state += w;
            }
            return ll - comp;
        }
    }
    throw InvalidInput("unknown model kind");
}

double stability_violation(ModelKind kind, const std::vector<double>& q) {
    switch (kind) {
        case ModelKind::ExpHawkes:
            return std::max(0.0, q[1] / q[2] - 1.0);
        case ModelKind::PowerLawHawkes:
            if (q[2] <= 1.0) return 2.0 - q[2];
            return std::max(0.0, q[1] / (q[2] - 1.0) - 1.0);
        default:
            return 0.0;
    }
}

} // namespace

double log_likelihood(const ModelSpec& model, const Realization& r) {
    model.validate();
    if (model.dim == 1 || r.coords.empty()) {
        return coord_loglik(model, r.times, r.marks, r.horizon);
    }
    double total = 0.0;
    std::vector<double> times, marks;
    for (int k = 1; k <= model.dim; ++k) {
        times.clear();
        marks.clear();
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r.coords[i] != k) continue;
            times.push_back(r.times[i]);
            if (!r.marks.empty()) marks.push_back(r.marks[i]);
        }
        total += coord_loglik(model, times, marks, r.horizon);
        if (total == kNegInf) return kNegInf;
    }
    return total;
}

FitResult fit_mle(ModelKind kind, const Realization& r, const Bounds& bounds,
                  const FitOptions& opt) {
    if (r.times.empty()) {
        throw InsufficientData("fit_mle: empty realization");
    }
    if (kind == ModelKind::ShotNoise) {
        throw FitFailure("fit_mle: ShotNoise has a latent driver and no tractable likelihood");
    }
    const auto n_params = static_cast<std::size_t>(param_count(kind));
    if (bounds.size() != n_params) {
        throw InvalidInput("fit_mle: bounds length must match the family's parameter count");
    }
    for (const auto& [lo, hi] : bounds) {
        if (!(lo > 0.0) || !std::isfinite(hi) || !(hi > lo)) {
            throw InvalidInput("fit_mle: bounds must be finite with 0 < lo < hi");
        }
    }

    std::vector<double> log_lo(n_params), log_hi(n_params);
    for (std::size_t i = 0; i < n_params; ++i) {
        log_lo[i] = std::log(bounds[i].first);
        log_hi[i] = std::log(bounds[i].second);
    }

    ModelSpec scratch;
    scratch.kind = kind;
    scratch.params.assign(n_params, 1.0);
    scratch.dim = r.dim;
    scratch.mark_cutoff = opt.mark_cutoff;

    auto params_from = [&](const std::vector<double>& x, double& box_violation) {
        box_violation = 0.0;
        for (std::size_t i = 0; i < n_params; ++i) {
            double xi = x[i];
            if (xi < log_lo[i]) {
                box_violation += (log_lo[i] - xi) * (log_lo[i] - xi);
                xi = log_lo[i];
            } else if (xi > log_hi[i]) {
                box_violation += (xi - log_hi[i]) * (xi - log_hi[i]);
                xi = log_hi[i];
            }
            scratch.params[i] = std::exp(xi);
        }
    };

    auto objective = [&](const std::vector<double>& x) -> double {
        double box_violation = 0.0;
        params_from(x, box_violation);
        if (opt.enforce_stability) {
            const double v = stability_violation(kind, scratch.params);
            if (v > 0.0) return 1e12 * (1.0 + v) + 1e8 * box_violation;
        }
        const double ll = log_likelihood(scratch, r);
        if (!std::isfinite(ll)) return 1e14 + 1e8 * box_violation;
        return -ll + 1e8 * box_violation;
    };

    // Latin-hypercube starting points in the log box.
    Rng rng(SeedSpec{opt.seed, 0}, stream_tag::kFit);
    const int n_starts = std::max(1, opt.n_starts);
    std::vector<std::vector<double>> starts;
    std::vector<std::vector<int>> strata(n_params, std::vector<int>(static_cast<std::size_t>(n_starts)));
    for (auto& s : strata) {
        std::iota(s.begin(), s.end(), 0);
        for (std::size_t i = s.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng.next_u64() % i);
            std::swap(s[i - 1], s[j]);
        }
    }
    for (int s = 0; s < n_starts; ++s) {
        std::vector<double> x(n_params);
        bool ok = false;
        for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
            for (std::size_t i = 0; i < n_params; ++i) {
                const double u = (static_cast<double>(strata[i][static_cast<std::size_t>(s)]) +
                                  rng.uniform01()) /
                                 static_cast<double>(n_starts);
                x[i] = log_lo[i] + (log_hi[i] - log_lo[i]) * u;
            }
            ok = objective(x) < 1e11;
        }
        if (ok) starts.push_back(x);
    }
    if (starts.empty()) {
        throw FitFailure("fit_mle: all starting points are infeasible");
    }

    SimplexOptions sopt;
    sopt.max_iterations = opt.max_iterations;
    sopt.diameter_tol = opt.diameter_tol;
    sopt.spread_tol = opt.spread_tol;

    SimplexResult best;
    best.fx = std::numeric_limits<double>::infinity();
    for (const auto& x0 : starts) {
        const auto res = nelder_mead(objective, x0, sopt);
        if (res.fx < best.fx) best = res;
    }

    FitResult fit;
    double box_violation = 0.0;
    params_from(best.x, box_violation);
    fit.params_hat = scratch.params;
    fit.loglik = log_likelihood(scratch, r);
    fit.converged = best.converged && std::isfinite(fit.loglik);
    fit.n_restarts_used = static_cast<int>(starts.size());
    fit.at_bound.resize(n_params);
    for (std::size_t i = 0; i < n_params; ++i) {
        fit.at_bound[i] = std::abs(fit.params_hat[i] - bounds[i].first) < 1e-6 ||
                          std::abs(fit.params_hat[i] - bounds[i].second) < 1e-6;
    }
    return fit;
}

std::string FitResult::to_json(ModelKind kind) const {
    nlohmann::ordered_json j;
    j["kind"] = std::string(kind_name(kind));
    j["params"] = params_hat;
    j["loglik"] = loglik;
    j["converged"] = converged;
    j["at_bound"] = at_bound;
    return j.dump(2);
}

} // namespace ppgof
