#include "ppgof/ingest.hpp"

#include "ppgof/csv.hpp"
#include "ppgof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace ppgof {

TimeResolution resolution_from_name(std::string_view name) {
    if (name == "exact") return TimeResolution::Exact;
    if (name == "daily") return TimeResolution::Daily;
    if (name == "weekly") return TimeResolution::Weekly;
    throw InvalidInput("unknown time resolution: " + std::string(name));
}

void CatalogSchema::validate() const {
    if (time_column.empty()) throw InvalidInput("schema: time_column required");
    if (mark_cutoff && !mark_column) {
        throw InvalidInput("schema: mark_cutoff requires a mark_column");
    }
}

namespace {

// Days from civil epoch (Howard Hinnant's algorithm).
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

long parse_iso_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3 || m < 1 || m > 12 || d < 1 ||
        d > 31) {
        throw InvalidInput("bad ISO-8601 date: " + s);
    }
    return days_from_civil(y, m, d);
}

} // namespace

long days_between(const std::string& iso_from, const std::string& iso_to) {
    return parse_iso_date(iso_to) - parse_iso_date(iso_from);
}

RawCatalog load_events(const std::string& path, const CatalogSchema& schema) {
    schema.validate();
    const auto table = read_csv(path);
    const int t_idx = table.column_index(schema.time_column);
    if (t_idx < 0) {
        throw InvalidInput(path + ": no column named '" + schema.time_column + "'");
    }
    int m_idx = -1;
    if (schema.mark_column) {
        m_idx = table.column_index(*schema.mark_column);
        if (m_idx < 0) {
            throw InvalidInput(path + ": no column named '" + *schema.mark_column + "'");
        }
    }

    const long epoch_days = schema.epoch.empty() ? 0 : parse_iso_date(schema.epoch);

    std::vector<std::size_t> bad_rows;
    RawCatalog out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t lineno = i + 2;
        if (static_cast<std::size_t>(t_idx) >= row.size() ||
            (m_idx >= 0 && static_cast<std::size_t>(m_idx) >= row.size())) {
            bad_rows.push_back(lineno);
            continue;
        }
        const auto& cell = row[static_cast<std::size_t>(t_idx)];
        double t;
        if (!schema.epoch.empty() && cell.find('-') != std::string::npos) {
            try {
                t = static_cast<double>(parse_iso_date(cell) - epoch_days);
            } catch (const InvalidInput&) {
                bad_rows.push_back(lineno);
                continue;
            }
        } else {
            char* end = nullptr;
            t = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || !std::isfinite(t)) {
                bad_rows.push_back(lineno);
                continue;
            }
        }
        double mark = 0.0;
        if (m_idx >= 0) {
            const auto& mcell = row[static_cast<std::size_t>(m_idx)];
            char* end = nullptr;
            mark = std::strtod(mcell.c_str(), &end);
            if (end == mcell.c_str() || !std::isfinite(mark)) {
                bad_rows.push_back(lineno);
                continue;
            }
            if (schema.mark_cutoff && mark < *schema.mark_cutoff) continue;
        }
        out.times.push_back(t);
        if (m_idx >= 0) out.marks.push_back(mark);
    }
    if (!bad_rows.empty()) {
        std::ostringstream os;
        os << path << ": unparseable rows at lines";
        for (auto n : bad_rows) os << ' ' << n;
        throw InvalidInput(os.str());
    }
    if (out.times.empty()) {
        throw InsufficientData(path + ": no events left after filtering");
    }

    // Sort by time, marks riding along.
    std::vector<std::size_t> order(out.times.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.times[a] < out.times[b]; });
    RawCatalog sorted;
    sorted.times.reserve(out.times.size());
    for (std::size_t idx : order) {
        sorted.times.push_back(out.times[idx]);
        if (!out.marks.empty()) sorted.marks.push_back(out.marks[idx]);
    }
    return sorted;
}

Realization jitter(const RawCatalog& catalog, const CatalogSchema& schema, double horizon,
                   SeedSpec seed) {
    if (!(horizon > 0.0)) throw InvalidInput("jitter: horizon must be positive");
    Realization r;
    r.horizon = horizon;
    r.dim = 1;

    if (schema.time_resolution == TimeResolution::Exact) {
        r.times = catalog.times;
        r.marks = catalog.marks;
        r.validate();
        return r;
    }

    const double width = schema.time_resolution == TimeResolution::Daily ? 1.0 : 7.0;
    Rng rng(seed, stream_tag::kJitter);
    const std::size_t n = catalog.times.size();
    std::vector<double> jittered(n);
    for (int pass = 0; pass < 100; ++pass) {
        for (std::size_t i = 0; i < n; ++i) {
            const double start = schema.time_resolution == TimeResolution::Daily
                                     ? std::floor(catalog.times[i])
                                     : catalog.times[i];
            jittered[i] = start + rng.uniform01() * width;
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return jittered[a] < jittered[b]; });
        bool strict = true;
        for (std::size_t i = 1; i < n && strict; ++i) {
            strict = jittered[order[i]] > jittered[order[i - 1]];
        }
        if (!strict) continue; // ties: re-draw everything

        r.times.clear();
        r.marks.clear();
        for (std::size_t idx : order) {
            r.times.push_back(jittered[idx]);
            if (!catalog.marks.empty()) r.marks.push_back(catalog.marks[idx]);
        }
        r.validate();
        return r;
    }
    throw InvalidInput("jitter: could not break ties after 100 passes");
}

} // namespace ppgof
