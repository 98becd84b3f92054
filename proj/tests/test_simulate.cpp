#include <doctest.h>

#include "ppgof/errors.hpp"
#include "ppgof/models.hpp"
#include "ppgof/rng.hpp"
#include "ppgof/simulate.hpp"
#include "ppgof/stat_tests.hpp"

#include <cmath>
#include <numeric>
#include <vector>

using namespace ppgof;

namespace {

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-14) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    double b = x + 1.0 - a;
    double c = 1e300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-14) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

double chi_square_cdf(double x, double dof) { return gamma_p(0.5 * dof, 0.5 * x); }

} // namespace

TEST_CASE("zero horizon gives an empty realization") {
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    const auto sim = simulate(m, 0.0, SeedSpec{1, 0});
    CHECK(sim.realization.times.empty());
}

TEST_CASE("identical seeds give identical realizations") {
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    const auto a = simulate(m, 200.0, SeedSpec{42, 7});
    const auto b = simulate(m, 200.0, SeedSpec{42, 7});
    REQUIRE(a.realization.times.size() == b.realization.times.size());
    for (std::size_t i = 0; i < a.realization.times.size(); ++i) {
        CHECK(a.realization.times[i] == b.realization.times[i]);
    }
    const auto c = simulate(m, 200.0, SeedSpec{42, 8});
    REQUIRE(!c.realization.times.empty());
    CHECK(a.realization.times[0] != c.realization.times[0]);
}

TEST_CASE("unstable models are rejected unless overridden") {
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 3.0, 2.0});
    CHECK_THROWS_AS(simulate(m, 10.0, SeedSpec{1, 0}), InvalidInput);
    SimOptions opt;
    opt.allow_unstable = true;
    opt.max_events = 2000;
    CHECK_THROWS_AS(simulate(m, 1e5, SeedSpec{1, 0}, opt), SimulationBlowup);
}

TEST_CASE("periodic poisson mean count matches its compensator") {
    const auto m = make_model(ModelKind::PeriodicPoisson, {1.25, 1.0, 0.2, 1e-9});
    const double T = 5000.0;
    const double expected = 1.25 * T + 5.0 * (1.0 - std::cos(0.2 * T));
    const int reps = 200;
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto n = static_cast<double>(
            simulate(m, T, SeedSpec{100, static_cast<std::uint32_t>(r)}).realization.size());
        sum += n;
        sum_sq += n * n;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt((sum_sq - reps * mean * mean) / (reps - 1));
    const double se = sd / std::sqrt(static_cast<double>(reps));
    CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("exp hawkes mean count matches the stationary rate") {
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    const double T = 5000.0;
    const double expected = T * 0.5 / (1.0 - 0.5);
    const int reps = 200;
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto n = static_cast<double>(
            simulate(m, T, SeedSpec{101, static_cast<std::uint32_t>(r)}).realization.size());
        sum += n;
        sum_sq += n * n;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt((sum_sq - reps * mean * mean) / (reps - 1));
    const double se = sd / std::sqrt(static_cast<double>(reps));
    CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("shot noise keeps its driver in the side channel") {
    const auto m = make_model(ModelKind::ShotNoise, {1.0, 2.0, 2.0});
    const auto sim = simulate(m, 500.0, SeedSpec{5, 0});
    CHECK(!sim.shots.empty());
    CHECK(!sim.realization.times.empty());
    // Mean event rate is mu alpha / beta = 1; allow a broad band.
    const double rate = static_cast<double>(sim.realization.size()) / 500.0;
    CHECK(rate > 0.6);
    CHECK(rate < 1.5);
    for (std::size_t i = 1; i < sim.shots.size(); ++i) {
        CHECK(sim.shots[i] > sim.shots[i - 1]);
    }
}

TEST_CASE("recursive simulation caches its event intensities") {
    const auto m = make_model(ModelKind::Recursive, {0.5, 0.8, 1.0, 0.4});
    const auto sim = simulate(m, 300.0, SeedSpec{6, 0});
    REQUIRE(sim.event_intensities.size() == sim.realization.size());
    const auto replay = recursive_event_intensities(m, sim.realization);
    for (std::size_t i = 0; i < replay.size(); ++i) {
        CHECK(replay[i] == doctest::Approx(sim.event_intensities[i]).epsilon(1e-9));
    }
}

TEST_CASE("self correcting stays near its equilibrium rate") {
    // With beta = log 2 and alpha = 1/2 the process self-stabilizes around
    // one event per unit time.
    const auto m = make_model(ModelKind::SelfCorrecting, {1.0, 0.5, std::log(2.0)});
    const auto sim = simulate(m, 2000.0, SeedSpec{7, 0});
    const double rate = static_cast<double>(sim.realization.size()) / 2000.0;
    CHECK(rate > 0.9);
    CHECK(rate < 1.1);
}

TEST_CASE("thinning correctness: periodic counts are Poisson") {
    // Chi-square goodness of fit of simulated counts on [0, 10] against
    // Poisson(Lambda(10)) over many replications.
    const auto m = make_model(ModelKind::PeriodicPoisson, {1.25, 1.0, 0.2, 1e-9});
    const double T = 10.0;
    const double lambda = 1.25 * T + 5.0 * (1.0 - std::cos(2.0));
    const int reps = 50000;
    std::vector<int> histogram(80, 0);
    for (int r = 0; r < reps; ++r) {
        const auto n = simulate(m, T, SeedSpec{102, static_cast<std::uint32_t>(r)}).realization.size();
        histogram[std::min(histogram.size() - 1, n)] += 1;
    }
    // Expected Poisson bin masses; pool tails so every cell expects >= 5.
    std::vector<double> expected(histogram.size(), 0.0);
    double pmf = std::exp(-lambda);
    expected[0] = pmf * reps;
    for (std::size_t k = 1; k < expected.size(); ++k) {
        pmf *= lambda / static_cast<double>(k);
        expected[k] = pmf * reps;
    }
    double chi2 = 0.0;
    int cells = 0;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    for (std::size_t k = 0; k < histogram.size(); ++k) {
        pooled_obs += histogram[k];
        pooled_exp += expected[k];
        if (pooled_exp >= 5.0) {
            chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
            ++cells;
            pooled_obs = 0.0;
            pooled_exp = 0.0;
        }
    }
    if (pooled_exp > 0.0) {
        chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++cells;
    }
    const double p = 1.0 - chi_square_cdf(chi2, cells - 1);
    CHECK(p > 0.01);
}

TEST_CASE("time rescaling: homogeneous case is linear") {
    const auto m = make_model(ModelKind::ExpHawkes, {2.0, 1e-12, 1.0});
    Realization r;
    r.times = {0.5, 1.25, 3.0};
    r.horizon = 4.0;
    const auto transformed = time_rescale(r, m);
    REQUIRE(transformed.size() == 3);
    CHECK(transformed[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(transformed[1] == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(transformed[2] == doctest::Approx(6.0).epsilon(1e-9));

    Realization empty;
    empty.horizon = 4.0;
    CHECK(time_rescale(empty, m).empty());
}

TEST_CASE("time rescaling under the true parameter gives Exp(1) interarrivals") {
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    const double T = 5000.0;
    int pass = 0;
    const int reps = 100;
    double pooled_sum = 0.0;
    std::size_t pooled_n = 0;
    for (int r = 0; r < reps; ++r) {
        const auto sim = simulate(m, T, SeedSpec{103, static_cast<std::uint32_t>(r)});
        const auto transformed = time_rescale(sim.realization, m);
        std::vector<double> gaps;
        gaps.reserve(transformed.size());
        double prev = 0.0;
        for (double v : transformed) {
            gaps.push_back(v - prev);
            prev = v;
        }
        for (std::size_t i = 1; i < transformed.size(); ++i) {
            REQUIRE(transformed[i] > transformed[i - 1]);
        }
        pooled_sum += std::accumulate(gaps.begin(), gaps.end(), 0.0);
        pooled_n += gaps.size();
        if (ks_test(gaps, {NullKind::StdExponential}).p_value > 0.05) ++pass;
    }
    CHECK(pass >= 93);
    // Pooled interarrival mean within 3/sqrt(N) of 1.
    const double mean = pooled_sum / static_cast<double>(pooled_n);
    CHECK(std::abs(mean - 1.0) < 3.0 / std::sqrt(static_cast<double>(pooled_n)));
}

TEST_CASE("etas simulation produces marked events") {
    // Subcritical within the window: K E[e^{beta(m-M)}] log(T/c) < 1.
    auto m = make_model(ModelKind::EtasTemporal, {0.2, 0.03, 0.05, 1.0});
    m.mark_cutoff = 6.0;
    const auto sim = simulate(m, 500.0, SeedSpec{9, 0});
    REQUIRE(!sim.realization.times.empty());
    REQUIRE(sim.realization.marks.size() == sim.realization.times.size());
    for (double mk : sim.realization.marks) CHECK(mk >= 6.0);
}
