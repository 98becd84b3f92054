#pragma once

#include "ppgof/realization.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ppgof {

enum class ModelKind {
    ExpHawkes,      // (mu, alpha, beta)
    PowerLawHawkes, // (mu, alpha, beta)
    ShotNoise,      // (mu, alpha, beta); mu is the latent shot rate
    PeriodicPoisson,// (mu, alpha, beta, gamma)
    SelfCorrecting, // (mu, alpha, beta)
    EtasTemporal,   // (mu, k, c, beta); magnitudes enter through exp(beta (m - cutoff))
    Recursive,      // (mu, kappa, beta, alpha); H(x) = kappa / x^alpha, g(u) = beta exp(-beta u)
};

int param_count(ModelKind kind);
std::string_view kind_name(ModelKind kind);
ModelKind kind_from_name(std::string_view name);

using Bounds = std::vector<std::pair<double, double>>;

/// Default open box (lo, hi) = (1e-4, 10) per parameter.
Bounds default_bounds(ModelKind kind);

/// A parametric conditional-intensity family together with one parameter
/// vector. All seven families are univariate recipes; for dim > 1 the
/// coordinates are treated as independent copies sharing the parameters.
struct ModelSpec {
    ModelKind kind = ModelKind::ExpHawkes;
    std::vector<double> params;
    Bounds bounds;
    int dim = 1;
    /// Magnitude cutoff M for EtasTemporal; ignored by other kinds.
    double mark_cutoff = 6.0;

    /// Throws InvalidInput on wrong parameter count or params outside bounds.
    void validate() const;
};

ModelSpec make_model(ModelKind kind, std::vector<double> params, int dim = 1);

struct StabilityReport {
    bool stable = true;
    std::string note;
};

/// Stationarity / nonnegativity constraint per family. EtasTemporal and
/// Recursive have no closed criterion and always report stable with a note.
StabilityReport stability_check(const ModelSpec& model);

/// Conditional intensity at time t given the events strictly before t.
/// Returns one value per coordinate.
///
/// For ShotNoise the history must hold the latent shot times (the driver),
/// not the observed events. For Recursive the history must carry
/// event_intensities built by recursive_event_intensities().
std::vector<double> intensity(const ModelSpec& model, double t, const History& history);

/// Integrated intensity on [0, t] (closed form for every family).
/// Requires t >= 0 and t >= every history time.
std::vector<double> compensator(const ModelSpec& model, double t, const History& history);

/// Adaptive-Simpson integral of the intensity, split at event times.
/// Independent route used to cross-check the closed forms.
std::vector<double> compensator_by_quadrature(const ModelSpec& model, double t,
                                              const History& history, double abs_tol = 1e-10);

/// Left-to-right replay computing lambda(t_i-) at every event, the cache
/// the recursive family needs. Valid for any kind (useful elsewhere), but
/// mandatory before intensity/compensator queries on Recursive models.
std::vector<double> recursive_event_intensities(const ModelSpec& model, const Realization& r);

/// Compensator evaluated at an increasing sequence of query times, sharing
/// work across the queries (O(n + m) for the exponential-kernel families).
/// `aux` is the recursive cache when model.kind == Recursive, otherwise
/// ignored. For ShotNoise, `r` must carry the shots as its event times.
std::vector<std::vector<double>> compensator_grid(const ModelSpec& model, const Realization& r,
                                                  std::span<const double> query_times,
                                                  std::span<const double> aux = {});

/// Compensator at each event time of the realization (same conventions as
/// compensator_grid; each value uses the events strictly before it).
std::vector<double> compensator_at_events(const ModelSpec& model, const Realization& r,
                                          std::span<const double> aux = {});

} // namespace ppgof
