#pragma once

#include "ppgof/likelihood.hpp"
#include "ppgof/models.hpp"
#include "ppgof/path_function.hpp"
#include "ppgof/realization.hpp"
#include "ppgof/stat_tests.hpp"

#include <string>
#include <vector>

namespace ppgof {

enum class Procedure { Transform, Naive, Rtc };

std::string_view procedure_name(Procedure p);
Procedure procedure_from_name(std::string_view name);

/// Standard-normal increments extracted from a transformed path.
struct IncrementSample {
    /// Row-major (increment, coordinate); n x dim values.
    std::vector<double> z;
    int n = 0;
    int dim = 1;
    double tau = 0.0;

    std::span<const double> pooled() const { return z; }
};

struct TestReport {
    Procedure procedure = Procedure::Transform;
    TestKind test = TestKind::KS;
    double statistic = 0.0;
    double p_value = 1.0;
    int n_effective = 0;
    std::string notes;

    std::string to_json() const;
};

/// The compensated empirical process
///   eta(u) = (N(uT) - Lambda_theta(uT)) / sqrt(T)
/// sampled at m+1 equispaced points on [0,1]. Counts use the cadlag
/// convention: events landing exactly on a grid point are included there.
/// Requires m >= 256.
PathFunction compensated_process(const Realization& r, const ModelSpec& fitted_model,
                                 int grid_m);

/// The innovation martingale transform
///   W(u) = (eta(u) - int_0^u (eta(1) - eta(v)) / (1 - v) dv) / sqrt(mu_hat),
/// computed with a composite trapezoid on eta's grid and returned on
/// [0, ~tau] (the grid is cut just past tau so interpolation stays inside).
/// Requires tau in (0, 1 - 2/m] and mu_hat > 0 componentwise.
PathFunction martingale_transform(const PathFunction& eta, std::span<const double> mu_hat,
                                  double tau);

/// Scaled increments z_i = sqrt(n/tau) (W(i tau/n) - W((i-1) tau/n)); W is
/// read off the grid by linear interpolation. Requires n <= m/4.
IncrementSample increments(const PathFunction& w, int n, double tau);

/// Hyperparameter rule n = max(ceil(c sqrt(count_basis)), floor_n).
int choose_n(double count_basis, double c, int floor_n);

struct GofOptions {
    int grid_m = 0; ///< 0 selects max(4096, 64 n)
};

/// Algorithm steps (ii)-(v): compensate, transform with
/// mu_hat = N(T)/T, slice increments, test them against N(0,1).
TestReport transformation_test(const Realization& r, ModelKind null_kind, const FitResult& fit,
                               int n, double tau, TestKind test, const GofOptions& opt = {});

/// Same chain with the transform left out: the standardized process
/// eta / sqrt(mu_hat) is treated as a standard Wiener process directly.
TestReport naive_test(const Realization& r, ModelKind null_kind, const FitResult& fit,
                      int n, double tau, TestKind test, const GofOptions& opt = {});

/// Random-time-change test: the compensator-transformed interarrival times
/// (with t_0 = 0) are tested against the standard exponential.
TestReport rtc_test(const Realization& r, ModelKind null_kind, const FitResult& fit,
                    TestKind test);

} // namespace ppgof
