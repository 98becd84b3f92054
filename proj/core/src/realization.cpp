#include "ppgof/realization.hpp"

#include "ppgof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ppgof {

void Realization::validate() const {
    if (!(horizon > 0.0) && !times.empty()) {
        throw InvalidInput("realization: horizon must be positive");
    }
    if (dim < 1) {
        throw InvalidInput("realization: dim must be >= 1");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0 || times[i] > horizon) {
            throw InvalidInput("realization: event time " + std::to_string(i) +
                               " outside [0, horizon]");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw InvalidInput("realization: times not strictly increasing at index " +
                               std::to_string(i));
        }
    }
    if (!coords.empty() && coords.size() != times.size()) {
        throw InvalidInput("realization: coords length mismatch");
    }
    for (int c : coords) {
        if (c < 1 || c > dim) {
            throw InvalidInput("realization: coordinate label outside {1,...,dim}");
        }
    }
    if (!marks.empty() && marks.size() != times.size()) {
        throw InvalidInput("realization: marks length mismatch");
    }
}

History history_before(const Realization& r, double t,
                       std::span<const double> event_intensities) {
    const auto it = std::lower_bound(r.times.begin(), r.times.end(), t);
    const std::size_t n = static_cast<std::size_t>(it - r.times.begin());
    History h;
    h.times = std::span<const double>(r.times.data(), n);
    if (!r.coords.empty()) {
        h.coords = std::span<const int>(r.coords.data(), n);
    }
    if (!r.marks.empty()) {
        h.marks = std::span<const double>(r.marks.data(), n);
    }
    if (!event_intensities.empty()) {
        h.event_intensities = event_intensities.subspan(0, std::min(n, event_intensities.size()));
    }
    return h;
}

std::vector<int> count_through(const Realization& r, double t) {
    std::vector<int> counts(static_cast<std::size_t>(r.dim), 0);
    const auto it = std::upper_bound(r.times.begin(), r.times.end(), t);
    const std::size_t n = static_cast<std::size_t>(it - r.times.begin());
    if (r.coords.empty()) {
        counts[0] = static_cast<int>(n);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            counts[static_cast<std::size_t>(r.coords[i] - 1)] += 1;
        }
    }
    return counts;
}

} // namespace ppgof
