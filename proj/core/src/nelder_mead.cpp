#include "ppgof/nelder_mead.hpp"

#include <algorithm>
#include <cmath>

namespace ppgof {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& opt) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> verts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        verts[i + 1][i] += opt.initial_step;
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(verts[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    SimplexResult result;
    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second_worst = order[n - 1];

        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                diameter = std::max(diameter, std::abs(verts[order[i]][j] - verts[best][j]));
            }
        }
        const double spread = fv[worst] - fv[best];
        if (diameter < opt.diameter_tol && spread < opt.spread_tol) {
            result.converged = true;
            break;
        }

        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i <= n; ++i) {
                if (i != worst) s += verts[i][j];
            }
            centroid[j] = s / static_cast<double>(n);
        }

        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - verts[worst][j]);
        const double fr = f(xr);
        if (fr < fv[best]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - verts[worst][j]);
            const double fe = f(xe);
            if (fe < fr) {
                verts[worst] = xe;
                fv[worst] = fe;
            } else {
                verts[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second_worst]) {
            verts[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        if (fr < fv[worst]) {
            // Outside contraction.
            for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
            const double fc = f(xc);
            if (fc <= fr) {
                verts[worst] = xc;
                fv[worst] = fc;
                continue;
            }
        } else {
            // Inside contraction.
            for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] - 0.5 * (centroid[j] - verts[worst][j]);
            const double fc = f(xc);
            if (fc < fv[worst]) {
                verts[worst] = xc;
                fv[worst] = fc;
                continue;
            }
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) {
                verts[i][j] = verts[best][j] + 0.5 * (verts[i][j] - verts[best][j]);
            }
            fv[i] = f(verts[i]);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (fv[i] < fv[best]) best = i;
    }
    result.x = verts[best];
    result.fx = fv[best];
    result.iterations = iter;
    return result;
}

} // namespace ppgof
