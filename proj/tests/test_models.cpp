#include <doctest.h>

#include "ppgof/errors.hpp"
#include "ppgof/models.hpp"
#include "ppgof/rng.hpp"

#include <cmath>
#include <functional>
#include <vector>

using namespace ppgof;

namespace {

Realization make_realization(std::vector<double> times, double horizon,
                             std::vector<double> marks = {}) {
    Realization r;
    r.times = std::move(times);
    r.marks = std::move(marks);
    r.horizon = horizon;
    r.validate();
    return r;
}

// Independent oracle: Richardson-extrapolated trapezoid of the intensity,
// integrating each inter-event segment separately.
double trapezoid_compensator(const ModelSpec& model, double t, const Realization& r,
                             std::span<const double> aux = {}) {
    std::vector<double> cuts{0.0};
    for (double e : r.times) {
        if (e > 0.0 && e < t) cuts.push_back(e);
    }
    cuts.push_back(t);
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s] + 1e-13;
        const double b = cuts[s + 1];
        if (b <= a) continue;
        auto f = [&](double x) {
            return intensity(model, x, history_before(r, x, aux))[0];
        };
        const int n = 4096;
        double acc = 0.5 * (f(a) + f(b));
        for (int i = 1; i < n; ++i) {
            acc += f(a + (b - a) * i / n);
        }
        const double coarse_n = n / 2;
        double acc2 = 0.5 * (f(a) + f(b));
        for (int i = 1; i < coarse_n; ++i) {
            acc2 += f(a + (b - a) * i / coarse_n);
        }
        const double fine = acc * (b - a) / n;
        const double coarse = acc2 * (b - a) / coarse_n;
        total += fine + (fine - coarse) / 3.0;
    }
    return total;
}

} // namespace

TEST_CASE("exp hawkes intensity matches hand calculations") {
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    const auto empty = make_realization({}, 10.0);
    CHECK(intensity(m, 1.0, history_before(empty, 1.0))[0] == doctest::Approx(0.5));

    const auto one = make_realization({0.0}, 10.0);
    const double t = std::log(2.0) / 2.0;
    CHECK(intensity(m, t, history_before(one, t))[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("self correcting intensity matches hand calculation") {
    const auto m = make_model(ModelKind::SelfCorrecting, {1.0, 0.5, std::log(2.0)});
    const auto r = make_realization({0.3, 0.7}, 10.0);
    CHECK(intensity(m, 1.0, history_before(r, 1.0))[0] ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("periodic intensity at the phase origin") {
    const auto m = make_model(ModelKind::PeriodicPoisson, {1.25, 1.0, 0.2, 1e-8});
    const auto empty = make_realization({}, 10.0);
    CHECK(intensity(m, 0.0, history_before(empty, 0.0))[0] ==
          doctest::Approx(1.25).epsilon(1e-6));
}

TEST_CASE("compensator is zero at t = 0 for every family") {
    const auto empty = make_realization({}, 10.0);
    for (auto kind : {ModelKind::ExpHawkes, ModelKind::PowerLawHawkes, ModelKind::ShotNoise,
                      ModelKind::PeriodicPoisson, ModelKind::SelfCorrecting}) {
        std::vector<double> params(static_cast<std::size_t>(param_count(kind)), 0.5);
        params[0] = 0.5;
        const auto m = make_model(kind, params);
        CHECK(compensator(m, 0.0, history_before(empty, 0.0))[0] == doctest::Approx(0.0));
    }
}

TEST_CASE("exp hawkes compensator closed form") {
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    const auto r = make_realization({0.0}, 10.0);
    const double expected = 0.5 + 0.5 * (1.0 - std::exp(-2.0));
    CHECK(compensator(m, 1.0, history_before(r, 1.0))[0] ==
          doctest::Approx(expected).epsilon(1e-10));
    CHECK(expected == doctest::Approx(0.932332).epsilon(1e-6));
}

TEST_CASE("periodic compensator closed form over five periods") {
    const auto m = make_model(ModelKind::PeriodicPoisson, {1.25, 1.0, 0.2, 1e-9});
    const auto empty = make_realization({}, 1000.0);
    const double t = 10.0 * 3.14159265358979323846;
    CHECK(compensator(m, t, history_before(empty, t))[0] ==
          doctest::Approx(12.5 * 3.14159265358979323846).epsilon(1e-9));
}

TEST_CASE("stability checks per family") {
    CHECK(stability_check(make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0})).stable);
    CHECK_FALSE(stability_check(make_model(ModelKind::ExpHawkes, {0.5, 3.0, 2.0})).stable);
    // Kernel mass exactly 1 sits on the boundary and is rejected.
    CHECK_FALSE(stability_check(make_model(ModelKind::PowerLawHawkes, {0.5, 1.0, 2.0})).stable);
    CHECK(stability_check(make_model(ModelKind::PowerLawHawkes, {0.5, 0.9, 2.0})).stable);
    CHECK(stability_check(make_model(ModelKind::ShotNoise, {1.0, 2.0, 2.0})).stable);
    CHECK(stability_check(make_model(ModelKind::SelfCorrecting, {1.0, 0.5, 0.7})).stable);
    CHECK_FALSE(stability_check(make_model(ModelKind::PeriodicPoisson, {1.0, 1.25, 0.2, 0.1})).stable);
    CHECK(stability_check(make_model(ModelKind::EtasTemporal, {0.005, 0.017, 0.02, 1.6})).stable);
    CHECK_FALSE(stability_check(make_model(ModelKind::ExpHawkes, {0.5, 3.0, 2.0})).note.empty());
}

TEST_CASE("etas without marks is rejected") {
    const auto m = make_model(ModelKind::EtasTemporal, {0.005, 0.017, 0.02, 1.6});
    const auto r = make_realization({1.0, 2.0}, 10.0);
    CHECK_THROWS_AS(intensity(m, 3.0, history_before(r, 3.0)), InvalidInput);
}

TEST_CASE("recursive model requires its event cache") {
    const auto m = make_model(ModelKind::Recursive, {0.5, 0.8, 1.0, 0.4});
    const auto r = make_realization({1.0, 2.0}, 10.0);
    CHECK_THROWS_AS(intensity(m, 3.0, history_before(r, 3.0)), InvalidState);

    const auto cache = recursive_event_intensities(m, r);
    REQUIRE(cache.size() == 2);
    CHECK(cache[0] == doctest::Approx(0.5)); // empty history: baseline only
    const double w0 = 0.8 / std::pow(0.5, 0.4);
    CHECK(cache[1] == doctest::Approx(0.5 + 1.0 * w0 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(intensity(m, 3.0, history_before(r, 3.0, cache))[0] > 0.5);
}

TEST_CASE("negative query times are rejected") {
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    const auto r = make_realization({}, 10.0);
    CHECK_THROWS_AS(compensator(m, -1.0, history_before(r, 0.0)), InvalidInput);
}

TEST_CASE("closed-form compensators match quadrature on random inputs") {
    Rng rng(SeedSpec{2024, 0}, stream_tag::kOracle);
    for (int rep = 0; rep < 12; ++rep) {
        // Random small history.
        const std::size_t n_events = 1 + rng.next_u64() % 6;
        std::vector<double> times;
        double t_cursor = 0.0;
        for (std::size_t i = 0; i < n_events; ++i) {
            t_cursor += 0.2 + rng.uniform01();
            times.push_back(t_cursor);
        }
        const double t = t_cursor + 0.5 + rng.uniform01();
        std::vector<double> marks(times.size());
        for (auto& mk : marks) mk = 6.0 + rng.exponential(2.3);
        const auto r = make_realization(times, t + 1.0, marks);

        const std::vector<ModelSpec> models = {
            make_model(ModelKind::ExpHawkes, {0.5 + rng.uniform01(), 1.0, 1.5 + rng.uniform01()}),
            make_model(ModelKind::PowerLawHawkes, {0.5, 0.9, 1.8 + rng.uniform01()}),
            make_model(ModelKind::ShotNoise, {1.0, 2.0, 1.5 + rng.uniform01()}),
            make_model(ModelKind::PeriodicPoisson, {1.25, 1.0, 0.2 + rng.uniform01(), 0.3}),
            make_model(ModelKind::SelfCorrecting, {1.0, 0.5, 0.4 + 0.3 * rng.uniform01()}),
            make_model(ModelKind::EtasTemporal, {0.5, 0.3, 0.5, 1.2}),
            make_model(ModelKind::Recursive, {0.5, 0.8, 1.0, 0.4}),
        };
        for (const auto& m : models) {
            std::vector<double> aux;
            if (m.kind == ModelKind::Recursive) aux = recursive_event_intensities(m, r);
            const auto h = history_before(r, t, aux);
            const double closed = compensator(m, t, h)[0];
            const double quad = compensator_by_quadrature(m, t, h, 1e-11)[0];
            CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
        }
    }
}

TEST_CASE("library quadrature agrees with an independent trapezoid oracle") {
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    const auto r = make_realization({0.4, 1.1, 2.2}, 10.0);
    const double t = 3.7;
    const auto h = history_before(r, t);
    const double closed = compensator(m, t, h)[0];
    const double oracle = trapezoid_compensator(m, t, r);
    CHECK(closed == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("compensator is nondecreasing and continuous on random grids") {
    Rng rng(SeedSpec{7, 0}, stream_tag::kOracle);
    std::vector<double> times;
    double cursor = 0.0;
    for (int i = 0; i < 40; ++i) {
        cursor += 0.1 + rng.uniform01();
        times.push_back(cursor);
    }
    std::vector<double> marks(times.size(), 6.3);
    const double horizon = cursor + 2.0;
    const auto r = make_realization(times, horizon, marks);

    const std::vector<ModelSpec> models = {
        make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0}),
        make_model(ModelKind::PowerLawHawkes, {0.5, 0.9, 2.0}),
        make_model(ModelKind::ShotNoise, {1.0, 2.0, 2.0}),
        make_model(ModelKind::PeriodicPoisson, {1.25, 1.0, 0.2, 0.3}),
        make_model(ModelKind::SelfCorrecting, {1.0, 0.5, 0.3}),
        make_model(ModelKind::EtasTemporal, {0.5, 0.3, 0.5, 1.2}),
        make_model(ModelKind::Recursive, {0.5, 0.8, 1.0, 0.4}),
    };
    std::vector<double> grid;
    for (int j = 0; j <= 400; ++j) grid.push_back(horizon * j / 400.0);

    for (const auto& m : models) {
        std::vector<double> aux;
        if (m.kind == ModelKind::Recursive) aux = recursive_event_intensities(m, r);
        const auto values = compensator_grid(m, r, grid, aux);
        for (std::size_t j = 1; j < grid.size(); ++j) {
            CHECK(values[j][0] >= values[j - 1][0] - 1e-12);
            // Continuity: small grid steps produce small increments.
            CHECK(values[j][0] - values[j - 1][0] < 50.0);
        }
        // The grid evaluation agrees with the one-off closed form.
        const double t_probe = grid[317];
        const auto h = history_before(r, t_probe, aux);
        CHECK(values[317][0] == doctest::Approx(compensator(m, t_probe, h)[0]).epsilon(1e-10));
    }
}

TEST_CASE("intensity stays nonnegative inside the stability region") {
    Rng rng(SeedSpec{11, 0}, stream_tag::kOracle);
    std::vector<double> times;
    double cursor = 0.0;
    for (int i = 0; i < 25; ++i) {
        cursor += 0.1 + rng.uniform01();
        times.push_back(cursor);
    }
    const auto r = make_realization(times, cursor + 1.0);
    for (int rep = 0; rep < 30; ++rep) {
        const double mu = 0.1 + 2.0 * rng.uniform01();
        const double alpha = 0.1 + 0.8 * rng.uniform01();
        const double beta = alpha + 0.2 + rng.uniform01();
        for (const auto& m : {make_model(ModelKind::ExpHawkes, {mu, alpha, beta}),
                              make_model(ModelKind::PeriodicPoisson, {mu + alpha, alpha, beta, 0.3})}) {
            REQUIRE(stability_check(m).stable);
            const double t = rng.uniform01() * cursor;
            CHECK(intensity(m, t, history_before(r, t))[0] >= 0.0);
        }
    }
}

TEST_CASE("exp hawkes O(1) recursion agrees with the direct sum") {
    // Build a 1000-event history, then compare the recursive per-event
    // update against intensity()'s direct summation.
    Rng rng(SeedSpec{3, 0}, stream_tag::kOracle);
    std::vector<double> times;
    double cursor = 0.0;
    for (int i = 0; i < 1000; ++i) {
        cursor += rng.exponential(1.0);
        times.push_back(cursor);
    }
    const auto r = make_realization(times, cursor + 1.0);
    const auto m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    const double mu = 0.5, alpha = 1.0, beta = 2.0;

    double decayed = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        decayed = i == 0 ? 0.0 : (decayed + 1.0) * std::exp(-beta * (times[i] - prev));
        prev = times[i];
        const double lam_recursive = mu + alpha * decayed;
        if (i % 97 == 0 || i + 1 == times.size()) {
            const double lam_direct = intensity(m, times[i], history_before(r, times[i]))[0];
            CHECK(lam_recursive == doctest::Approx(lam_direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("power-law kernel uses the log branch at beta = 1") {
    const auto m = make_model(ModelKind::PowerLawHawkes, {0.5, 0.9, 1.0});
    const auto r = make_realization({0.0}, 10.0);
    const double t = 3.0;
    // mu t + alpha log(1 + t)
    CHECK(compensator(m, t, history_before(r, t))[0] ==
          doctest::Approx(0.5 * 3.0 + 0.9 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("model spec validation") {
    CHECK_THROWS_AS(make_model(ModelKind::ExpHawkes, {0.5, 1.0}), InvalidInput);
    ModelSpec m = make_model(ModelKind::ExpHawkes, {0.5, 1.0, 2.0});
    m.bounds = default_bounds(ModelKind::ExpHawkes);
    CHECK_NOTHROW(m.validate());
    m.params[0] = 1e-5; // below lo
    CHECK_THROWS_AS(m.validate(), InvalidInput);
}
