#pragma once

#include "ppgof/realization.hpp"

#include <string>
#include <vector>

namespace ppgof {

/// 12 significant digits; the on-disk number format for every CSV output.
std::string format_sig12(double v);

/// Canonical realization CSV: header "time,coord,mark", one row per event,
/// empty mark field when the realization is unmarked, LF line endings.
std::string realization_to_csv(const Realization& r);
void write_realization_csv(const std::string& path, const Realization& r);

/// Parses the canonical format back. Pass horizon <= 0 to take it from the
/// file's "# horizon=..." comment line (written by realization_to_csv).
Realization read_realization_csv(const std::string& path, double horizon = 0.0, int dim = 1);

/// Minimal table reader: header row of column names, comma-separated cells.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const; // -1 if absent
};
CsvTable read_csv(const std::string& path);

/// One numeric column from a CSV file (used by the qq subcommand).
std::vector<double> read_numeric_column(const std::string& path, const std::string& column);

} // namespace ppgof
