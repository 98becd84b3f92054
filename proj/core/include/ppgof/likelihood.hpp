#pragma once

#include "ppgof/models.hpp"
#include "ppgof/realization.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ppgof {

/// Log-likelihood of the realization under the model:
/// sum_i log lambda(t_i-) - Lambda(T), summed over coordinates.
///
/// Returns -inf when the intensity vanishes (or goes negative) at any
/// event, signalling infeasible parameters to the optimizer rather than
/// throwing. ShotNoise has a latent driver and no tractable event-time
/// likelihood; any nonempty realization scores -inf under it.
double log_likelihood(const ModelSpec& model, const Realization& r);

struct FitOptions {
    int n_starts = 5;
    std::uint64_t seed = 0;
    int max_iterations = 6000;
    double diameter_tol = 1e-8;
    double spread_tol = 1e-10;
    /// Keep the search inside the family's stationarity region
    /// (alpha < beta for ExpHawkes, kernel mass < 1 for PowerLawHawkes).
    bool enforce_stability = true;
    double mark_cutoff = 6.0;
};

struct FitResult {
    std::vector<double> params_hat;
    double loglik = 0.0;
    bool converged = false;
    int n_restarts_used = 0;
    std::vector<bool> at_bound;

    std::string to_json(ModelKind kind) const;
};

/// Box-constrained maximum likelihood by multistart Nelder-Mead in
/// log-parameter space. Starts are Latin-hypercube samples inside the
/// bounds; deterministic for fixed (realization, bounds, options).
FitResult fit_mle(ModelKind kind, const Realization& r, const Bounds& bounds,
                  const FitOptions& options = {});

} // namespace ppgof
