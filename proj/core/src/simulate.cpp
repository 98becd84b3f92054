#include "ppgof/simulate.hpp"

#include "ppgof/errors.hpp"

#include <cmath>
#include <string>

namespace ppgof {

namespace {

void check_cap(std::size_t accepted, const SimOptions& opt) {
    if (static_cast<double>(accepted) > opt.max_events) {
        throw SimulationBlowup("simulation exceeded the event cap (" +
                               std::to_string(opt.max_events) + "); intensity may be explosive");
    }
}

// Families whose intensity is nonincreasing between events: the intensity
// just after the cursor bounds the intensity until the next accepted event.
void simulate_decreasing_kernel(const ModelSpec& model, double horizon, Rng& rng,
                                const SimOptions& opt, SimulationResult& out) {
    const double mu = model.params[0];
    const double alpha = model.params[1];
    const double beta_or_c = model.params[2];

    auto& times = out.realization.times;
    auto& marks = out.realization.marks;
    auto& lambdas = out.event_intensities;

    // Exponential-kernel state (ExpHawkes, Recursive): decayed weighted sum.
    double state = 0.0;
    double cursor = 0.0;

    auto lambda_at = [&](double t) -> double {
        switch (model.kind) {
            case ModelKind::ExpHawkes:
                return mu + alpha * state * std::exp(-beta_or_c * (t - cursor));
            case ModelKind::Recursive: {
                const double beta = model.params[2];
                return mu + beta * state * std::exp(-beta * (t - cursor));
            }
            case ModelKind::PowerLawHawkes: {
                double s = 0.0;
                for (double e : times) s += std::pow(1.0 + t - e, -beta_or_c);
                return mu + alpha * s;
            }
            case ModelKind::EtasTemporal: {
                const double k = model.params[1];
                const double c = model.params[2];
                const double beta = model.params[3];
                double s = mu;
                for (std::size_t i = 0; i < times.size(); ++i) {
                    s += std::exp(beta * (marks[i] - model.mark_cutoff)) * k /
                         (t - times[i] + c);
                }
                return s;
            }
            default:
                throw InvalidState("wrong dispatch");
        }
    };

    double t = 0.0;
    double proposals = 0.0;
    while (true) {
        const double bound = lambda_at(t);
        if (!(bound > 0.0)) {
            throw SimulationBlowup("nonpositive thinning bound");
        }
        if (++proposals > 10.0 * opt.max_events) {
            throw SimulationBlowup("proposal budget exhausted; intensity may be explosive");
        }
        const double candidate = t + rng.exponential(bound);
        if (candidate > horizon) break;
        const double lam = lambda_at(candidate);
        t = candidate;
        if (rng.uniform01() * bound <= lam) {
            // Accept; update the per-family state.
            switch (model.kind) {
                case ModelKind::ExpHawkes:
                    state = state * std::exp(-beta_or_c * (t - cursor)) + 1.0;
                    cursor = t;
                    break;
                case ModelKind::Recursive: {
                    const double kappa = model.params[1];
                    const double beta = model.params[2];
                    const double a = model.params[3];
                    state *= std::exp(-beta * (t - cursor));
                    cursor = t;
                    lambdas.push_back(lam);
                    state += kappa / std::pow(lam, a);
                    break;
                }
                case ModelKind::EtasTemporal: {
                    const double b_gr = opt.etas_mark_b * std::log(10.0);
                    marks.push_back(model.mark_cutoff + rng.exponential(b_gr));
                    break;
                }
                default:
                    break;
            }
            times.push_back(t);
            check_cap(times.size(), opt);
        }
    }
}

void simulate_shot_noise(const ModelSpec& model, double horizon, Rng& rng,
                         const SimOptions& opt, SimulationResult& out) {
    const double mu = model.params[0];
    const double alpha = model.params[1];
    const double beta = model.params[2];

    // Latent shots: homogeneous Poisson(mu).
    double s = rng.exponential(mu);
    while (s <= horizon) {
        out.shots.push_back(s);
        s += rng.exponential(mu);
    }

    double state = 0.0; // sum of exp(-beta (cursor - s_i)) over shots <= cursor
    double cursor = 0.0;
    std::size_t next_shot = 0;
    double t = 0.0;

    auto advance_to_shot = [&]() {
        const double shot = out.shots[next_shot];
        state = state * std::exp(-beta * (shot - cursor)) + 1.0;
        cursor = shot;
        t = shot;
        ++next_shot;
    };

    while (t < horizon) {
        const double bound = alpha * state * std::exp(-beta * (t - cursor));
        if (!(bound > 1e-300)) {
            // Intensity (numerically) zero until the next shot lifts it.
            if (next_shot >= out.shots.size()) break;
            advance_to_shot();
            continue;
        }
        const double candidate = t + rng.exponential(bound);
        const double next_shot_time =
            next_shot < out.shots.size() ? out.shots[next_shot] : horizon + 1.0;
        if (candidate >= next_shot_time && next_shot_time <= horizon) {
            // The bound jumps upward at the shot; restart the proposal there.
            advance_to_shot();
            continue;
        }
        if (candidate > horizon) break;
        const double lam = alpha * state * std::exp(-beta * (candidate - cursor));
        t = candidate;
        if (rng.uniform01() * bound <= lam) {
            out.realization.times.push_back(t);
            check_cap(out.realization.times.size(), opt);
        }
    }
}

void simulate_periodic(const ModelSpec& model, double horizon, Rng& rng,
                       const SimOptions& opt, SimulationResult& out) {
    const double mu = model.params[0];
    const double alpha = model.params[1];
    const double beta = model.params[2];
    const double gamma = model.params[3];
    const double bound = mu + alpha;
    double t = 0.0;
    while (true) {
        t += rng.exponential(bound);
        if (t > horizon) break;
        const double lam = std::max(0.0, mu + alpha * std::sin(beta * (t - gamma)));
        if (rng.uniform01() * bound <= lam) {
            out.realization.times.push_back(t);
            check_cap(out.realization.times.size(), opt);
        }
    }
}

void simulate_self_correcting(const ModelSpec& model, double horizon, Rng& rng,
                              const SimOptions& opt, SimulationResult& out) {
    const double log_mu = std::log(model.params[0]);
    const double log_alpha = std::log(model.params[1]);
    const double beta = model.params[2];

    double t = 0.0;
    std::size_t n = 0;
    while (t < horizon) {
        const double log_lam_now = log_mu + beta * t + static_cast<double>(n) * log_alpha;
        // Lookahead window: four expected gaps at the current intensity,
        // recomputed on expiry; e^{beta t} growth invalidates global bounds.
        // Capped so the bound never exceeds four times the current
        // intensity, else a lull makes the proposal rate astronomically
        // pessimistic and the sweep stalls.
        const double w = std::min(4.0 / std::exp(log_lam_now), std::log(4.0) / beta);
        const double window_end = std::min(t + w, horizon);
        const double bound = std::exp(log_mu + beta * window_end +
                                      static_cast<double>(n) * log_alpha);
        if (!std::isfinite(bound)) {
            throw SimulationBlowup("self-correcting intensity overflow");
        }
        const double candidate = t + rng.exponential(bound);
        if (candidate >= window_end) {
            t = window_end;
            continue;
        }
        const double lam = std::exp(log_mu + beta * candidate +
                                    static_cast<double>(n) * log_alpha);
        t = candidate;
        if (rng.uniform01() * bound <= lam) {
            out.realization.times.push_back(t);
            ++n;
            check_cap(n, opt);
        }
    }
}

} // namespace

SimulationResult simulate(const ModelSpec& model, double horizon, SeedSpec seed,
                          const SimOptions& options) {
    model.validate();
    if (!(horizon >= 0.0)) throw InvalidInput("simulate: horizon must be >= 0");
    if (model.dim != 1) {
        throw InvalidInput("simulate: only univariate simulation is implemented");
    }
    const auto stab = stability_check(model);
    if (!stab.stable && !options.allow_unstable) {
        throw InvalidInput("simulate: unstable model (" + stab.note +
                           "); pass allow_unstable to override");
    }

    SimulationResult out;
    out.realization.horizon = horizon;
    out.realization.dim = 1;
    if (horizon == 0.0) return out;

    Rng rng(seed, options.stream);
    switch (model.kind) {
        case ModelKind::ExpHawkes:
        case ModelKind::PowerLawHawkes:
        case ModelKind::EtasTemporal:
        case ModelKind::Recursive:
            simulate_decreasing_kernel(model, horizon, rng, options, out);
            break;
        case ModelKind::ShotNoise:
            simulate_shot_noise(model, horizon, rng, options, out);
            break;
        case ModelKind::PeriodicPoisson:
            simulate_periodic(model, horizon, rng, options, out);
            break;
        case ModelKind::SelfCorrecting:
            simulate_self_correcting(model, horizon, rng, options, out);
            break;
    }
    out.realization.validate();
    return out;
}

std::vector<double> time_rescale(const Realization& r, const ModelSpec& model,
                                 std::span<const double> aux) {
    std::vector<double> owned_aux;
    if (model.kind == ModelKind::Recursive && aux.empty()) {
        owned_aux = recursive_event_intensities(model, r);
        aux = owned_aux;
    }
    return compensator_at_events(model, r, aux);
}

} // namespace ppgof
