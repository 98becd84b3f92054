#include "ppgof/path_function.hpp"

#include "ppgof/csv.hpp"
#include "ppgof/errors.hpp"

#include <cmath>
#include <sstream>

namespace ppgof {

double PathFunction::value(double u, int coord) const {
    const std::size_t n = nodes();
    if (n == 0) throw InvalidState("empty path function");
    if (u <= 0.0) return at_node(0, coord);
    const double end = domain_end();
    if (u >= end) return at_node(n - 1, coord);
    const double pos = u / step;
    auto j = static_cast<std::size_t>(pos);
    if (j >= n - 1) j = n - 2;
    const double w = pos - static_cast<double>(j);
    return (1.0 - w) * at_node(j, coord) + w * at_node(j + 1, coord);
}

void PathFunction::validate() const {
    if (dim < 1 || step <= 0.0 || values.empty() ||
        values.size() % static_cast<std::size_t>(dim) != 0) {
        throw InvalidInput("path function: malformed grid");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidInput("path function: non-finite sample");
        }
    }
}

std::string PathFunction::to_csv() const {
    std::ostringstream os;
    os << "u";
    for (int k = 1; k <= dim; ++k) os << ",value_" << k;
    os << "\n";
    for (std::size_t j = 0; j < nodes(); ++j) {
        os << format_sig12(step * static_cast<double>(j));
        for (int k = 0; k < dim; ++k) {
            os << ',' << format_sig12(at_node(j, k));
        }
        os << "\n";
    }
    return os.str();
}

} // namespace ppgof
