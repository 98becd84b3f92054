#include "ppgof/csv.hpp"

#include "ppgof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ppgof {

std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string realization_to_csv(const Realization& r) {
    std::ostringstream os;
    os << "# horizon=" << format_sig12(r.horizon) << " dim=" << r.dim << "\n";
    os << "time,coord,mark\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        os << format_sig12(r.times[i]) << ','
           << (r.coords.empty() ? 1 : r.coords[i]) << ',';
        if (!r.marks.empty()) os << format_sig12(r.marks[i]);
        os << "\n";
    }
    return os.str();
}

void write_realization_csv(const std::string& path, const Realization& r) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot open for writing: " + path);
    f << realization_to_csv(r);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    cells.push_back(cell);
    return cells;
}

} // namespace

Realization read_realization_csv(const std::string& path, double horizon, int dim) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open: " + path);
    Realization r;
    r.dim = dim;
    std::string line;
    bool header_seen = false;
    bool any_marks = false;
    std::size_t lineno = 0;
    std::vector<std::size_t> bad_rows;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto hpos = line.find("horizon=");
            if (hpos != std::string::npos && horizon <= 0.0) {
                horizon = std::strtod(line.c_str() + hpos + 8, nullptr);
            }
            const auto dpos = line.find("dim=");
            if (dpos != std::string::npos) {
                r.dim = std::max(dim, static_cast<int>(std::strtol(line.c_str() + dpos + 4, nullptr, 10)));
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true; // "time,coord,mark"
            continue;
        }
        const auto cells = split_line(line);
        if (cells.empty() || cells[0].empty()) {
            bad_rows.push_back(lineno);
            continue;
        }
        char* end = nullptr;
        const double t = std::strtod(cells[0].c_str(), &end);
        if (end == cells[0].c_str() || !std::isfinite(t)) {
            bad_rows.push_back(lineno);
            continue;
        }
        r.times.push_back(t);
        r.coords.push_back(cells.size() > 1 && !cells[1].empty()
                               ? static_cast<int>(std::strtol(cells[1].c_str(), nullptr, 10))
                               : 1);
        if (cells.size() > 2 && !cells[2].empty()) {
            r.marks.push_back(std::strtod(cells[2].c_str(), nullptr));
            any_marks = true;
        } else {
            r.marks.push_back(std::nan(""));
        }
    }
    if (!bad_rows.empty()) {
        std::ostringstream os;
        os << path << ": unparseable rows at lines";
        for (auto n : bad_rows) os << ' ' << n;
        throw InvalidInput(os.str());
    }
    if (!any_marks) r.marks.clear();
    if (std::all_of(r.coords.begin(), r.coords.end(), [](int c) { return c == 1; }) &&
        r.dim == 1) {
        r.coords.clear();
    }
    if (horizon <= 0.0) {
        throw InvalidInput(path + ": no horizon given and none recorded in the file");
    }
    r.horizon = horizon;
    r.validate();
    return r;
}

int CsvTable::column_index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open: " + path);
    CsvTable table;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (table.columns.empty()) {
            table.columns = split_line(line);
        } else {
            table.rows.push_back(split_line(line));
        }
    }
    if (table.columns.empty()) throw InvalidInput(path + ": empty CSV");
    return table;
}

std::vector<double> read_numeric_column(const std::string& path, const std::string& column) {
    const auto table = read_csv(path);
    int idx = table.column_index(column);
    if (idx < 0) {
        if (table.columns.size() == 1) idx = 0;
        else throw InvalidInput(path + ": no column named '" + column + "'");
    }
    std::vector<double> out;
    std::vector<std::size_t> bad_rows;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (static_cast<std::size_t>(idx) >= row.size()) {
            bad_rows.push_back(i + 2);
            continue;
        }
        char* end = nullptr;
        const double v = std::strtod(row[static_cast<std::size_t>(idx)].c_str(), &end);
        if (end == row[static_cast<std::size_t>(idx)].c_str()) {
            bad_rows.push_back(i + 2);
            continue;
        }
        out.push_back(v);
    }
    if (!bad_rows.empty()) {
        std::ostringstream os;
        os << path << ": unparseable rows at lines";
        for (auto n : bad_rows) os << ' ' << n;
        throw InvalidInput(os.str());
    }
    return out;
}

} // namespace ppgof
