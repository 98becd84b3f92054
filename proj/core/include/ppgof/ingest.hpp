#pragma once

#include "ppgof/realization.hpp"
#include "ppgof/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ppgof {

enum class TimeResolution { Exact, Daily, Weekly };

TimeResolution resolution_from_name(std::string_view name);

/// Describes one real-world catalog file.
struct CatalogSchema {
    std::string time_column = "time";
    TimeResolution time_resolution = TimeResolution::Exact;
    std::optional<std::string> mark_column;
    /// Keep events with mark >= cutoff (requires mark_column).
    std::optional<double> mark_cutoff;
    /// Date origin for ISO-8601 time columns ("YYYY-MM-DD"); empty means
    /// the time column is already a numeric day index.
    std::string epoch;

    void validate() const;
};

/// Events sorted by time; duplicates allowed (resolution is coarse).
struct RawCatalog {
    std::vector<double> times;
    std::vector<double> marks; ///< empty when the schema has no mark column
};

/// Read and filter a catalog CSV. Unparseable rows raise InvalidInput
/// listing the offending line numbers; an empty post-filter result raises
/// InsufficientData.
RawCatalog load_events(const std::string& path, const CatalogSchema& schema);

/// Resolution jitter: every event moves to bucket_start + U * bucket_width
/// (daily: [floor(t), floor(t)+1); weekly: [t, t+7)). Output is re-sorted
/// and strictly increasing (ties re-drawn); horizon is the configured
/// study-window end.
Realization jitter(const RawCatalog& catalog, const CatalogSchema& schema, double horizon,
                   SeedSpec seed);

/// Days between two ISO-8601 dates (civil calendar).
long days_between(const std::string& iso_from, const std::string& iso_to);

} // namespace ppgof
