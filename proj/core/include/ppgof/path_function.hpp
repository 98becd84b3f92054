#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ppgof {

/// A cadlag function on [0, domain_end] sampled on an equispaced grid.
/// Houses the compensated empirical process and its transforms.
struct PathFunction {
    /// Row-major (node, coordinate) samples; nodes() x dim values.
    std::vector<double> values;
    double step = 0.0;
    double scale_T = 0.0;
    int dim = 1;

    std::size_t nodes() const { return values.size() / static_cast<std::size_t>(dim); }
    double domain_end() const { return step * static_cast<double>(nodes() - 1); }

    double at_node(std::size_t j, int coord) const {
        return values[j * static_cast<std::size_t>(dim) + static_cast<std::size_t>(coord)];
    }

    /// Linear interpolation at u in [0, domain_end].
    double value(double u, int coord) const;

    /// Throws InvalidInput on non-finite samples or a degenerate grid.
    void validate() const;

    /// CSV with header "u,value_1,...,value_d", 12 significant digits.
    std::string to_csv() const;
};

} // namespace ppgof
