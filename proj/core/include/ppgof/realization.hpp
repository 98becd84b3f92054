#pragma once

#include <span>
#include <vector>

namespace ppgof {

/// One observed sample path of a temporal point process on [0, horizon].
///
/// Event times are strictly increasing. Coordinates are 1-based labels in
/// {1, ..., dim}; an empty coords vector means "all events on coordinate 1".
/// Marks are optional (ETAS magnitudes); when present they align with times.
struct Realization {
    std::vector<double> times;
    std::vector<int> coords;
    std::vector<double> marks;
    double horizon = 0.0;
    int dim = 1;

    std::size_t size() const { return times.size(); }
    bool has_marks() const { return !marks.empty(); }

    /// Throws InvalidInput if any invariant is violated.
    void validate() const;
};

/// Immutable view of the events of a Realization strictly before a query
/// time. The spans alias the parent realization (or a caller-owned
/// auxiliary buffer for event_intensities, see recursive_event_intensities).
struct History {
    std::span<const double> times;
    std::span<const int> coords;
    std::span<const double> marks;
    /// Conditional intensity observed at each event (left limit), needed
    /// by the recursive family. Empty unless built explicitly.
    std::span<const double> event_intensities;

    std::size_t size() const { return times.size(); }
};

/// Events with t_i < t (strict).
History history_before(const Realization& r, double t,
                       std::span<const double> event_intensities = {});

/// Number of events with t_i <= t (cadlag counting convention), per
/// coordinate. Returns a vector of length r.dim.
std::vector<int> count_through(const Realization& r, double t);

} // namespace ppgof
