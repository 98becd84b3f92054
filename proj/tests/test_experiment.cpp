#include <doctest.h>

#include "ppgof/errors.hpp"
#include "ppgof/experiment.hpp"
#include "ppgof/stat_tests.hpp"

#include <cmath>

using namespace ppgof;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.true_model = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    cfg.null_family = ModelKind::ExpHawkes;
    cfg.horizon = 400.0;
    cfg.replications = 6;
    cfg.procedures = {Procedure::Transform, Procedure::Rtc};
    cfg.tests = {TestKind::KS};
    cfg.levels = {0.01, 0.05, 0.20};
    cfg.experiment_seed = 2025;
    cfg.n_starts = 3;
    return cfg;
}

} // namespace

TEST_CASE("config parser accepts the documented schema") {
    const std::string text = R"(
schema_version = 1
true_model = ExpHawkes
true_params = 0.5, 1, 2
null_family = ExpHawkes
horizon = 5000
replications = 500
procedures = transform naive
tests = KS AD
levels = 0.01 0.05 0.20
n_c = 0.25
n_floor = 1
tau = 0.9
experiment_seed = 42
)";
    const auto cfg = parse_experiment_config(text);
    CHECK(cfg.true_model.kind == ModelKind::ExpHawkes);
    CHECK(cfg.true_model.params[2] == 2.0);
    CHECK(cfg.replications == 500);
    CHECK(cfg.procedures.size() == 2);
    CHECK(cfg.tests.size() == 2);
    CHECK(cfg.tau == 0.9);
    CHECK(cfg.experiment_seed == 42);
}

TEST_CASE("config parser rejects unknown keys and bad versions") {
    CHECK_THROWS_WITH_AS(parse_experiment_config("schema_version = 1\n"
                                                 "true_model = ExpHawkes\n"
                                                 "true_params = 0.5 1 2\n"
                                                 "null_family = ExpHawkes\n"
                                                 "horizon = 100\n"
                                                 "replications = 2\n"
                                                 "taus = 0.9\n"),
                         doctest::Contains("unknown key"), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_config("true_model = ExpHawkes\n"), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_config("schema_version = 2\n"), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_config("schema_version = 1\nschema_version = 1\n"),
                    InvalidInput);
}

TEST_CASE("experiment is deterministic and worker-count independent") {
    auto cfg = tiny_config();
    cfg.workers = 1;
    const auto a = run_experiment(cfg);
    cfg.workers = 2;
    const auto b = run_experiment(cfg);
    CHECK(a.pvalues_csv() == b.pvalues_csv());
    CHECK(a.table_csv() == b.table_csv());
    REQUIRE(!a.records.empty());
}

TEST_CASE("rejection counts are reproducible from the p-value log") {
    auto cfg = tiny_config();
    const auto table = run_experiment(cfg);
    for (Procedure proc : cfg.procedures) {
        for (TestKind test : cfg.tests) {
            for (double level : cfg.levels) {
                int manual = 0;
                for (const auto& rec : table.records) {
                    if (rec.procedure == proc && rec.test == test && rec.p_value < level) {
                        ++manual;
                    }
                }
                CHECK(manual == table.count(proc, test, level));
            }
        }
    }
    CHECK(table.total == cfg.replications);
}

TEST_CASE("single replication bookkeeping") {
    auto cfg = tiny_config();
    cfg.replications = 1;
    cfg.procedures = {Procedure::Transform};
    const auto table = run_experiment(cfg);
    REQUIRE(table.records.size() == 1);
    const auto& rec = table.records[0];
    for (double level : cfg.levels) {
        CHECK(table.count(Procedure::Transform, TestKind::KS, level) ==
              (rec.p_value < level ? 1 : 0));
    }
}

TEST_CASE("qq pairs of reference quantiles sit on the diagonal") {
    for (auto ref : {QqReference::Kolmogorov, QqReference::StdNormal, QqReference::StdExponential}) {
        std::vector<double> sample;
        const int n = 50;
        for (int i = 1; i <= n; ++i) {
            const double p = (i - 0.5) / n;
            switch (ref) {
                case QqReference::Kolmogorov: sample.push_back(kolmogorov_quantile(p)); break;
                case QqReference::StdNormal: sample.push_back(normal_quantile(p)); break;
                case QqReference::StdExponential: sample.push_back(exponential_quantile(p)); break;
            }
        }
        const auto pairs = qq_data(sample, ref);
        for (const auto& [emp, theo] : pairs) {
            CHECK(emp == doctest::Approx(theo).epsilon(1e-9));
        }
        const auto [slope, intercept] = fit_line(pairs);
        CHECK(slope == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(intercept == doctest::Approx(0.0).epsilon(1e-7));
    }
    CHECK_THROWS_AS(qq_data(std::vector<double>{}, QqReference::Kolmogorov), InvalidInput);
}

TEST_CASE("csv outputs carry headers and LF endings") {
    auto cfg = tiny_config();
    cfg.replications = 2;
    const auto table = run_experiment(cfg);
    const auto pcsv = table.pvalues_csv();
    CHECK(pcsv.rfind("replication,procedure,test,statistic,p_value\n", 0) == 0);
    CHECK(pcsv.find('\r') == std::string::npos);
    const auto tcsv = table.table_csv();
    CHECK(tcsv.rfind("procedure,test,level,rejections,total\n", 0) == 0);
}
