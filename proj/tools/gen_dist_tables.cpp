// Regenerates core/src/generated/dist_tables.inc: 2001-point lookup tables
// for the asymptotic Cramer-von Mises and Anderson-Darling CDFs, evaluated
// from their truncated series. Usage: ppgof-gen-dist-tables <output-path>

#include "../core/src/dist_series.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: ppgof-gen-dist-tables <output .inc path>\n";
        return 2;
    }
    std::ofstream out(argv[1]);
    if (!out) {
        std::cerr << "cannot open " << argv[1] << "\n";
        return 2;
    }

    const int n = 2001;
    const double cvm_step = 0.0025; // covers [0, 5]
    const double ad_step = 0.005;   // covers [0, 10]

    auto emit = [&](const char* name_prefix, double step, double (*f)(double)) {
        out << "inline constexpr double k" << name_prefix << "GridMin = 0.0;\n";
        out << "inline constexpr double k" << name_prefix << "GridStep = " << step << ";\n";
        out << "inline constexpr int k" << name_prefix << "TableSize = " << n << ";\n";
        out << "inline constexpr double k" << name_prefix << "Table[] = {\n";
        for (int i = 0; i < n; ++i) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", f(step * i));
            out << "    " << buf << ",\n";
        }
        out << "};\n";
    };

    out << "// Generated by ppgof-gen-dist-tables; do not edit by hand.\n";
    out << "namespace ppgof::tables {\n";
    emit("Cvm", cvm_step, &ppgof::detail::cvm_cdf_series);
    emit("Ad", ad_step, &ppgof::detail::ad_cdf_series);
    out << "} // namespace ppgof::tables\n";
    std::cout << "wrote " << argv[1] << "\n";
    return 0;
}
