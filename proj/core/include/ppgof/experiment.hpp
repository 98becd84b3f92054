#pragma once

#include "ppgof/gof.hpp"
#include "ppgof/models.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ppgof {

/// Basis for the n = ceil(c sqrt(basis)) rule: the horizon T for the
/// simulation studies, the event count for the data studies.
enum class CountBasis { Horizon, Events };

struct NRule {
    double c = 0.25;
    int floor_n = 1;
};

/// One Monte Carlo table cell, declaratively.
struct ExperimentConfig {
    ModelSpec true_model;
    ModelKind null_family = ModelKind::ExpHawkes;
    Bounds null_bounds; ///< empty selects default_bounds(null_family)
    double horizon = 5000.0;
    int replications = 500;
    std::vector<Procedure> procedures{Procedure::Transform, Procedure::Naive, Procedure::Rtc};
    std::vector<TestKind> tests{TestKind::KS, TestKind::CvM, TestKind::AD};
    std::vector<double> levels{0.01, 0.05, 0.20};
    NRule n_rule;
    CountBasis count_basis = CountBasis::Horizon;
    double tau = 0.9;
    int grid_m = 0; ///< 0 selects max(4096, 64 n)
    std::uint64_t experiment_seed = 0;
    int n_starts = 5;
    int workers = 0; ///< 0: PPGOF_WORKERS env var, then hardware concurrency
    double max_failure_rate = 0.05;

    void validate() const;
};

/// Parse the key-value config format (see README for the schema).
/// Unknown keys are a hard error; schema_version is required.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

struct PValueRecord {
    int replication = 0;
    Procedure procedure = Procedure::Transform;
    TestKind test = TestKind::KS;
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Rejection counts plus the per-replication p-value log they derive from.
struct RejectionTable {
    std::vector<PValueRecord> records; ///< ordered by (replication, procedure, test)
    std::vector<double> levels;
    int total = 0;
    int redraws = 0; ///< replications re-drawn after a fit failure

    int count(Procedure p, TestKind t, double level) const;

    /// "procedure,test,level,rejections,total" rows.
    std::string table_csv() const;
    /// "replication,procedure,test,statistic,p_value" rows.
    std::string pvalues_csv() const;
};

/// Simulate -> fit -> test over config.replications, distributed over a
/// worker pool. Deterministic for a fixed experiment_seed, independent of
/// the worker count. Failed fits are re-drawn with fresh sub-seeds; more
/// than max_failure_rate of them aborts with ExperimentError.
RejectionTable run_experiment(const ExperimentConfig& config);

enum class QqReference { Kolmogorov, StdNormal, StdExponential };

QqReference qq_reference_from_name(std::string_view name);

/// Ordered (empirical quantile, theoretical quantile) pairs:
/// (x_(i), Q((i - 1/2) / n)).
std::vector<std::pair<double, double>> qq_data(std::span<const double> statistics,
                                               QqReference reference);

std::string qq_pairs_csv(const std::vector<std::pair<double, double>>& pairs);

/// Least-squares line through the pairs; returns {slope, intercept}.
std::pair<double, double> fit_line(const std::vector<std::pair<double, double>>& pairs);

} // namespace ppgof
