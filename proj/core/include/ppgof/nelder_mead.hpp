#pragma once

#include <functional>
#include <vector>

namespace ppgof {

struct SimplexOptions {
    int max_iterations = 6000;
    /// Stop when the max pairwise vertex distance (inf norm) is below this.
    double diameter_tol = 1e-8;
    /// ... and the spread of function values is below this.
    double spread_tol = 1e-10;
    /// Initial per-coordinate displacement of the simplex.
    double initial_step = 0.25;
};

struct SimplexResult {
    std::vector<double> x;
    double fx = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Classic Nelder-Mead minimization (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5). Deterministic.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& options = {});

} // namespace ppgof
