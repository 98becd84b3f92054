#pragma once

#include "ppgof/models.hpp"
#include "ppgof/realization.hpp"
#include "ppgof/rng.hpp"

#include <vector>

namespace ppgof {

struct SimOptions {
    /// Abort with SimulationBlowup once this many events have been accepted.
    double max_events = 1e7;
    /// Simulate even if stability_check fails.
    bool allow_unstable = false;
    /// Gutenberg-Richter b-value for EtasTemporal magnitudes
    /// (m - cutoff ~ Exp(b ln 10)).
    double etas_mark_b = 1.0;
    /// RNG substream; bump to re-draw a replication with a fresh stream.
    std::uint64_t stream = stream_tag::kSimulate;
};

struct SimulationResult {
    Realization realization;
    /// Latent driver times for ShotNoise (debugging side channel); the
    /// realization itself holds only the observed events.
    std::vector<double> shots;
    /// lambda(t_i-) at each accepted event for Recursive models.
    std::vector<double> event_intensities;
};

/// Draw one realization on [0, horizon] by Ogata thinning.
/// Identical (model, horizon, seed) inputs give identical output.
SimulationResult simulate(const ModelSpec& model, double horizon, SeedSpec seed,
                          const SimOptions& options = {});

/// Transformed event times Lambda(t_1) < ... < Lambda(t_N). For dim > 1 the
/// transformation uses each event's own coordinate compensator.
/// `aux` is the recursive event-intensity cache when needed.
std::vector<double> time_rescale(const Realization& r, const ModelSpec& model,
                                 std::span<const double> aux = {});

} // namespace ppgof
