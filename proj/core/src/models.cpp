#include "ppgof/models.hpp"

#include "ppgof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace ppgof {

namespace {

constexpr double kLogBranchTol = 1e-12;

// Parameter accessors, named per family.
struct P3 { double mu, alpha, beta; };
struct P4 { double a, b, c, d; };

P3 p3(const ModelSpec& m) { return {m.params[0], m.params[1], m.params[2]}; }
P4 p4(const ModelSpec& m) { return {m.params[0], m.params[1], m.params[2], m.params[3]}; }

// One coordinate's slice of a history. For dim == 1 the spans alias the
// history; otherwise the events are gathered into the scratch buffers.
struct CoordView {
    std::span<const double> times;
    std::span<const double> marks;
    std::span<const double> aux;
    std::vector<double> times_buf, marks_buf, aux_buf;
};

void gather_coord(const History& h, int coord, CoordView& view) {
    if (h.coords.empty()) {
        view.times = h.times;
        view.marks = h.marks;
        view.aux = h.event_intensities;
        return;
    }
    view.times_buf.clear();
    view.marks_buf.clear();
    view.aux_buf.clear();
    for (std::size_t i = 0; i < h.times.size(); ++i) {
        if (h.coords[i] != coord) continue;
        view.times_buf.push_back(h.times[i]);
        if (!h.marks.empty()) view.marks_buf.push_back(h.marks[i]);
        if (!h.event_intensities.empty()) view.aux_buf.push_back(h.event_intensities[i]);
    }
    view.times = view.times_buf;
    view.marks = view.marks_buf;
    view.aux = view.aux_buf;
}

// ---- scalar intensities, one coordinate ----------------------------------

double intensity_exp_hawkes(const P3& p, double t, std::span<const double> ev) {
    double s = 0.0;
    for (double e : ev) s += std::exp(-p.beta * (t - e));
    return p.mu + p.alpha * s;
}

double intensity_power_law(const P3& p, double t, std::span<const double> ev) {
    double s = 0.0;
    for (double e : ev) s += std::pow(1.0 + t - e, -p.beta);
    return p.mu + p.alpha * s;
}

double intensity_shot_noise(const P3& p, double t, std::span<const double> shots) {
    double s = 0.0;
    for (double e : shots) s += std::exp(-p.beta * (t - e));
    return p.alpha * s;
}

double intensity_periodic(const P4& p, double t) {
    return p.a + p.b * std::sin(p.c * (t - p.d));
}

double intensity_self_correcting(const P3& p, double t, std::size_t n_before) {
    return std::exp(std::log(p.mu) + p.beta * t +
                    static_cast<double>(n_before) * std::log(p.alpha));
}

double intensity_etas(const P4& p, double cutoff, double t, std::span<const double> ev,
                      std::span<const double> marks) {
    double s = p.a;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        s += std::exp(p.d * (marks[i] - cutoff)) * p.b / (t - ev[i] + p.c);
    }
    return s;
}

double recursive_weight(const P4& p, double lambda_at_event) {
    return p.b / std::pow(lambda_at_event, p.d);
}

double intensity_recursive(const P4& p, double t, std::span<const double> ev,
                           std::span<const double> lambdas) {
    double s = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        s += recursive_weight(p, lambdas[i]) * std::exp(-p.c * (t - ev[i]));
    }
    return p.a + p.c * s;
}

// ---- scalar compensators, one coordinate ---------------------------------

double compensator_exp_hawkes(const P3& p, double t, std::span<const double> ev) {
    double s = 0.0;
    for (double e : ev) s += -std::expm1(-p.beta * (t - e));
    return p.mu * t + (p.alpha / p.beta) * s;
}

double power_law_kernel_integral(const P3& p, double u) {
    // int_0^u alpha (1+s)^{-beta} ds, with the log branch at beta == 1.
    if (std::abs(p.beta - 1.0) < kLogBranchTol) {
        return p.alpha * std::log1p(u);
    }
    return (p.alpha / (p.beta - 1.0)) * (1.0 - std::pow(1.0 + u, 1.0 - p.beta));
}

double compensator_power_law(const P3& p, double t, std::span<const double> ev) {
    double s = 0.0;
    for (double e : ev) s += power_law_kernel_integral(p, t - e);
    return p.mu * t + s;
}

double compensator_shot_noise(const P3& p, double t, std::span<const double> shots) {
    double s = 0.0;
    for (double e : shots) s += -std::expm1(-p.beta * (t - e));
    return (p.alpha / p.beta) * s;
}

double compensator_periodic(const P4& p, double t) {
    return p.a * t + (p.b / p.c) * (std::cos(p.c * p.d) - std::cos(p.c * (t - p.d)));
}

double compensator_self_correcting(const P3& p, double t, std::span<const double> ev) {
    // Piecewise between events: N(s-) is constant on each segment.
    const double log_mu = std::log(p.mu);
    const double log_alpha = std::log(p.alpha);
    double total = 0.0;
    double seg_start = 0.0;
    std::size_t k = 0;
    auto segment = [&](double a, double b, std::size_t count) {
        if (b <= a) return;
        const double lambda_a = std::exp(log_mu + p.beta * a +
                                         static_cast<double>(count) * log_alpha);
        total += lambda_a * std::expm1(p.beta * (b - a)) / p.beta;
    };
    for (double e : ev) {
        segment(seg_start, std::min(e, t), k);
        seg_start = e;
        ++k;
        if (e >= t) break;
    }
    if (seg_start < t) segment(seg_start, t, k);
    return total;
}

double compensator_etas(const P4& p, double cutoff, double t, std::span<const double> ev,
                        std::span<const double> marks) {
    double s = p.a * t;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        s += std::exp(p.d * (marks[i] - cutoff)) * p.b *
             std::log((t - ev[i] + p.c) / p.c);
    }
    return s;
}

double compensator_recursive(const P4& p, double t, std::span<const double> ev,
                             std::span<const double> lambdas) {
    double s = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        s += recursive_weight(p, lambdas[i]) * -std::expm1(-p.c * (t - ev[i]));
    }
    return p.a * t + s;
}

void require_marks(const History& h) {
    if (h.marks.empty() && !h.times.empty()) {
        throw InvalidInput("EtasTemporal requires per-event marks (magnitudes)");
    }
}

void require_aux(std::span<const double> aux, std::size_t n) {
    if (aux.size() < n) {
        throw InvalidState(
            "Recursive model queried without its event-intensity cache; "
            "build it with recursive_event_intensities()");
    }
}

double scalar_intensity(const ModelSpec& m, double t, const CoordView& v) {
    switch (m.kind) {
        case ModelKind::ExpHawkes: return intensity_exp_hawkes(p3(m), t, v.times);
        case ModelKind::PowerLawHawkes: return intensity_power_law(p3(m), t, v.times);
        case ModelKind::ShotNoise: return intensity_shot_noise(p3(m), t, v.times);
        case ModelKind::PeriodicPoisson: return intensity_periodic(p4(m), t);
        case ModelKind::SelfCorrecting:
            return intensity_self_correcting(p3(m), t, v.times.size());
        case ModelKind::EtasTemporal:
            return intensity_etas(p4(m), m.mark_cutoff, t, v.times, v.marks);
        case ModelKind::Recursive:
            require_aux(v.aux, v.times.size());
            return intensity_recursive(p4(m), t, v.times, v.aux);
    }
    throw InvalidInput("unknown model kind");
}

double scalar_compensator(const ModelSpec& m, double t, const CoordView& v) {
    switch (m.kind) {
        case ModelKind::ExpHawkes: return compensator_exp_hawkes(p3(m), t, v.times);
        case ModelKind::PowerLawHawkes: return compensator_power_law(p3(m), t, v.times);
        case ModelKind::ShotNoise: return compensator_shot_noise(p3(m), t, v.times);
        case ModelKind::PeriodicPoisson: return compensator_periodic(p4(m), t);
        case ModelKind::SelfCorrecting:
            return compensator_self_correcting(p3(m), t, v.times);
        case ModelKind::EtasTemporal:
            return compensator_etas(p4(m), m.mark_cutoff, t, v.times, v.marks);
        case ModelKind::Recursive:
            require_aux(v.aux, v.times.size());
            return compensator_recursive(p4(m), t, v.times, v.aux);
    }
    throw InvalidInput("unknown model kind");
}

} // namespace

int param_count(ModelKind kind) {
    switch (kind) {
        case ModelKind::ExpHawkes:
        case ModelKind::PowerLawHawkes:
        case ModelKind::ShotNoise:
        case ModelKind::SelfCorrecting:
            return 3;
        case ModelKind::PeriodicPoisson:
        case ModelKind::EtasTemporal:
        case ModelKind::Recursive:
            return 4;
    }
    throw InvalidInput("unknown model kind");
}

std::string_view kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::ExpHawkes: return "ExpHawkes";
        case ModelKind::PowerLawHawkes: return "PowerLawHawkes";
        case ModelKind::ShotNoise: return "ShotNoise";
        case ModelKind::PeriodicPoisson: return "PeriodicPoisson";
        case ModelKind::SelfCorrecting: return "SelfCorrecting";
        case ModelKind::EtasTemporal: return "EtasTemporal";
        case ModelKind::Recursive: return "Recursive";
    }
    return "?";
}

ModelKind kind_from_name(std::string_view name) {
    for (ModelKind k : {ModelKind::ExpHawkes, ModelKind::PowerLawHawkes, ModelKind::ShotNoise,
                        ModelKind::PeriodicPoisson, ModelKind::SelfCorrecting,
                        ModelKind::EtasTemporal, ModelKind::Recursive}) {
        if (kind_name(k) == name) return k;
    }
    throw InvalidInput("unknown model kind: " + std::string(name));
}

Bounds default_bounds(ModelKind kind) {
    return Bounds(static_cast<std::size_t>(param_count(kind)), {1e-4, 10.0});
}

void ModelSpec::validate() const {
    const auto expected = static_cast<std::size_t>(param_count(kind));
    if (params.size() != expected) {
        std::ostringstream os;
        os << kind_name(kind) << " expects " << expected << " parameters, got "
           << params.size();
        throw InvalidInput(os.str());
    }
    if (dim < 1) throw InvalidInput("model dim must be >= 1");
    if (!bounds.empty()) {
        if (bounds.size() != expected) {
            throw InvalidInput("bounds length must match parameter count");
        }
        for (std::size_t i = 0; i < expected; ++i) {
            if (!(params[i] > bounds[i].first && params[i] < bounds[i].second)) {
                std::ostringstream os;
                os << kind_name(kind) << " parameter " << i << " = " << params[i]
                   << " outside open box (" << bounds[i].first << ", "
                   << bounds[i].second << ")";
                throw InvalidInput(os.str());
            }
        }
    }
    for (double v : params) {
        if (!std::isfinite(v)) throw InvalidInput("non-finite model parameter");
    }
}

ModelSpec make_model(ModelKind kind, std::vector<double> params, int dim) {
    ModelSpec m;
    m.kind = kind;
    m.params = std::move(params);
    m.dim = dim;
    const auto expected = static_cast<std::size_t>(param_count(kind));
    if (m.params.size() != expected) {
        throw InvalidInput(std::string(kind_name(kind)) + ": wrong parameter count");
    }
    return m;
}

StabilityReport stability_check(const ModelSpec& model) {
    const auto& q = model.params;
    switch (model.kind) {
        case ModelKind::ExpHawkes: {
            if (q[1] < q[2]) return {true, ""};
            return {false, "ExpHawkes requires alpha < beta (branching ratio < 1)"};
        }
        case ModelKind::PowerLawHawkes: {
            if (q[2] > 1.0 && q[1] / (q[2] - 1.0) < 1.0) return {true, ""};
            return {false, "PowerLawHawkes requires beta > 1 and kernel mass alpha/(beta-1) < 1"};
        }
        case ModelKind::ShotNoise:
            return {true, ""};
        case ModelKind::PeriodicPoisson: {
            if (q[0] >= q[1]) return {true, ""};
            return {false, "PeriodicPoisson requires mu >= alpha for a nonnegative intensity"};
        }
        case ModelKind::SelfCorrecting: {
            if (q[1] > 0.0 && q[1] < 1.0 && q[2] > 0.0) return {true, ""};
            return {false, "SelfCorrecting requires alpha in (0,1) and beta > 0"};
        }
        case ModelKind::EtasTemporal:
            return {true, "no closed-form stationarity criterion; report-only"};
        case ModelKind::Recursive:
            return {true, "no closed-form stationarity criterion; report-only"};
    }
    return {false, "unknown model kind"};
}

std::vector<double> intensity(const ModelSpec& model, double t, const History& history) {
    model.validate();
    if (!std::isfinite(t) || t < 0.0) throw InvalidInput("intensity: t must be >= 0");
    if (model.kind == ModelKind::EtasTemporal) require_marks(history);
    std::vector<double> out(static_cast<std::size_t>(model.dim));
    CoordView view;
    for (int k = 1; k <= model.dim; ++k) {
        gather_coord(history, k, view);
        out[static_cast<std::size_t>(k - 1)] = scalar_intensity(model, t, view);
    }
    return out;
}

std::vector<double> compensator(const ModelSpec& model, double t, const History& history) {
    model.validate();
    if (!std::isfinite(t) || t < 0.0) {
        throw InvalidInput("compensator: t outside the observation window");
    }
    if (!history.times.empty() && history.times.back() > t) {
        throw InvalidInput("compensator: history contains events after t");
    }
    if (model.kind == ModelKind::EtasTemporal) require_marks(history);
    std::vector<double> out(static_cast<std::size_t>(model.dim));
    CoordView view;
    for (int k = 1; k <= model.dim; ++k) {
        gather_coord(history, k, view);
        out[static_cast<std::size_t>(k - 1)] = scalar_compensator(model, t, view);
    }
    return out;
}

std::vector<double> compensator_by_quadrature(const ModelSpec& model, double t,
                                              const History& history, double abs_tol) {
    model.validate();
    if (t < 0.0) throw InvalidInput("compensator: t outside the observation window");

    // Adaptive Simpson on a single smooth segment.
    std::function<double(std::function<double(double)>&, double, double, double, double,
                         double, double, double, int)>
        simpson = [&](std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm, double whole, double tol, int depth) -> double {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
            return left + right + (left + right - whole) / 15.0;
        }
        return simpson(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
               simpson(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
    };

    std::vector<double> out(static_cast<std::size_t>(model.dim), 0.0);
    CoordView view;
    for (int k = 1; k <= model.dim; ++k) {
        gather_coord(history, k, view);
        // Integrate between consecutive events; the intensity is smooth there.
        std::vector<double> cuts{0.0};
        for (double e : view.times) {
            if (e > 0.0 && e < t) cuts.push_back(e);
        }
        cuts.push_back(t);
        double total = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double a = cuts[s];
            const double b = cuts[s + 1];
            if (b <= a) continue;
            // Events strictly before the open segment (a, b): all times <= a.
            const auto n_prefix = static_cast<std::size_t>(
                std::upper_bound(view.times.begin(), view.times.end(), a) - view.times.begin());
            CoordView prefix;
            prefix.times = view.times.subspan(0, n_prefix);
            prefix.marks = view.marks.empty() ? view.marks : view.marks.subspan(0, n_prefix);
            prefix.aux = view.aux.empty() ? view.aux : view.aux.subspan(0, n_prefix);
            std::function<double(double)> f = [&](double s_) {
                return scalar_intensity(model, s_, prefix);
            };
            const double fa = f(a);
            const double fb = f(b);
            const double fm = f(0.5 * (a + b));
            const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            total += simpson(f, a, b, fa, fb, fm, whole,
                             abs_tol / static_cast<double>(cuts.size()), 48);
        }
        out[static_cast<std::size_t>(k - 1)] = total;
    }
    return out;
}

std::vector<double> recursive_event_intensities(const ModelSpec& model, const Realization& r) {
    model.validate();
    if (model.kind != ModelKind::Recursive) {
        // Generic left-to-right replay; useful for diagnostics on any family.
        std::vector<double> out(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            out[i] = intensity(model, r.times[i], history_before(r, r.times[i]))
                         [r.coords.empty() ? 0 : static_cast<std::size_t>(r.coords[i] - 1)];
        }
        return out;
    }
    const P4 p = p4(model);
    std::vector<double> out(r.size());
    // Per-coordinate decayed sums S = sum_i H(lambda_i) exp(-beta (t - t_i)).
    std::vector<double> state(static_cast<std::size_t>(r.dim), 0.0);
    std::vector<double> last_t(static_cast<std::size_t>(r.dim), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto k = static_cast<std::size_t>(r.coords.empty() ? 0 : r.coords[i] - 1);
        const double t = r.times[i];
        state[k] *= std::exp(-p.c * (t - last_t[k]));
        last_t[k] = t;
        const double lambda_here = p.a + p.c * state[k];
        out[i] = lambda_here;
        state[k] += recursive_weight(p, lambda_here);
    }
    return out;
}

std::vector<std::vector<double>> compensator_grid(const ModelSpec& model, const Realization& r,
                                                  std::span<const double> query_times,
                                                  std::span<const double> aux) {
    model.validate();
    for (std::size_t j = 0; j < query_times.size(); ++j) {
        if (query_times[j] < 0.0 || (j > 0 && query_times[j] < query_times[j - 1])) {
            throw InvalidInput("compensator_grid: query times must be nondecreasing and >= 0");
        }
    }
    if (model.kind == ModelKind::Recursive && aux.size() < r.size()) {
        throw InvalidState("compensator_grid: Recursive model needs its event-intensity cache");
    }
    if (model.kind == ModelKind::EtasTemporal && !r.times.empty() && r.marks.empty()) {
        throw InvalidInput("compensator_grid: EtasTemporal requires marks");
    }

    const std::size_t m = query_times.size();
    std::vector<std::vector<double>> out(m, std::vector<double>(static_cast<std::size_t>(model.dim), 0.0));

    for (int coord = 1; coord <= model.dim; ++coord) {
        const auto kc = static_cast<std::size_t>(coord - 1);
        // Gather this coordinate's events (cheap pass; no copy for dim==1).
        std::vector<double> tbuf, mbuf, abuf;
        std::span<const double> ev, marks, evaux;
        if (r.coords.empty() || model.dim == 1) {
            ev = r.times;
            marks = r.marks;
            evaux = aux;
        } else {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (r.coords[i] != coord) continue;
                tbuf.push_back(r.times[i]);
                if (!r.marks.empty()) mbuf.push_back(r.marks[i]);
                if (!aux.empty()) abuf.push_back(aux[i]);
            }
            ev = tbuf;
            marks = mbuf;
            evaux = abuf;
        }

        switch (model.kind) {
            case ModelKind::ExpHawkes:
            case ModelKind::ShotNoise:
            case ModelKind::Recursive: {
                // One sweep; state decays between positions, jumps at events.
                const double beta = model.params[2];
                const double mu = model.params[0];
                const double alpha = model.params[1];
                double s = 0.0;       // decayed weighted sum at the cursor
                double wsum = 0.0;    // total weight of events before the cursor
                double cursor = 0.0;
                std::size_t next_ev = 0;
                for (std::size_t j = 0; j < m; ++j) {
                    const double q = query_times[j];
                    while (next_ev < ev.size() && ev[next_ev] < q) {
                        const double e = ev[next_ev];
                        s *= std::exp(-beta * (e - cursor));
                        cursor = e;
                        double w = 1.0;
                        if (model.kind == ModelKind::Recursive) {
                            w = recursive_weight(p4(model), evaux[next_ev]);
                        }
                        s += w;
                        wsum += w;
                        ++next_ev;
                    }
                    const double sq = s * std::exp(-beta * (q - cursor));
                    double value;
                    if (model.kind == ModelKind::ExpHawkes) {
                        value = mu * q + (alpha / beta) * (wsum - sq);
                    } else if (model.kind == ModelKind::ShotNoise) {
                        value = (alpha / beta) * (wsum - sq);
                    } else {
                        value = mu * q + (wsum - sq);
                    }
                    out[j][kc] = value;
                }
                break;
            }
            case ModelKind::PowerLawHawkes: {
                const P3 p = p3(model);
                std::size_t next_ev = 0;
                for (std::size_t j = 0; j < m; ++j) {
                    const double q = query_times[j];
                    while (next_ev < ev.size() && ev[next_ev] < q) ++next_ev;
                    double s = p.mu * q;
                    for (std::size_t i = 0; i < next_ev; ++i) {
                        s += power_law_kernel_integral(p, q - ev[i]);
                    }
                    out[j][kc] = s;
                }
                break;
            }
            case ModelKind::EtasTemporal: {
                const P4 p = p4(model);
                std::size_t next_ev = 0;
                for (std::size_t j = 0; j < m; ++j) {
                    const double q = query_times[j];
                    while (next_ev < ev.size() && ev[next_ev] < q) ++next_ev;
                    double s = p.a * q;
                    for (std::size_t i = 0; i < next_ev; ++i) {
                        s += std::exp(p.d * (marks[i] - model.mark_cutoff)) * p.b *
                             std::log((q - ev[i] + p.c) / p.c);
                    }
                    out[j][kc] = s;
                }
                break;
            }
            case ModelKind::PeriodicPoisson: {
                const P4 p = p4(model);
                for (std::size_t j = 0; j < m; ++j) {
                    out[j][kc] = compensator_periodic(p, query_times[j]);
                }
                break;
            }
            case ModelKind::SelfCorrecting: {
                const P3 p = p3(model);
                const double log_mu = std::log(p.mu);
                const double log_alpha = std::log(p.alpha);
                double cursor = 0.0;
                double acc = 0.0;
                std::size_t k = 0;
                auto advance = [&](double to) {
                    if (to <= cursor) return;
                    const double lam = std::exp(log_mu + p.beta * cursor +
                                                static_cast<double>(k) * log_alpha);
                    acc += lam * std::expm1(p.beta * (to - cursor)) / p.beta;
                    cursor = to;
                };
                std::size_t next_ev = 0;
                for (std::size_t j = 0; j < m; ++j) {
                    const double q = query_times[j];
                    while (next_ev < ev.size() && ev[next_ev] < q) {
                        advance(ev[next_ev]);
                        ++k;
                        ++next_ev;
                    }
                    advance(q);
                    out[j][kc] = acc;
                }
                break;
            }
        }
    }
    return out;
}

std::vector<double> compensator_at_events(const ModelSpec& model, const Realization& r,
                                          std::span<const double> aux) {
    const auto grid = compensator_grid(model, r, r.times, aux);
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto k = static_cast<std::size_t>(r.coords.empty() ? 0 : r.coords[i] - 1);
        out[i] = grid[i][k];
    }
    return out;
}

} // namespace ppgof
