#include <doctest.h>

#include <cmath>

#include "sirw/blp.hpp"
#include "sirw/diffusion.hpp"
#include "sirw/replicate.hpp"
#include "sirw/stats.hpp"

using namespace sirw;

// Survival of zeta from 0 decays no faster than n^(-gamma-0.2), with a
// generous constant; calibration-grade guard against gross sampler errors.
TEST_CASE("zeta survival decays no faster than the coarse exponent") {
    struct Case {
        WeightFn w;
        double gamma;
    };
    const Case cases[] = {{WeightFn::constant(1.0), 0.0}, {WeightFn::pq_style(2.0), 0.5}};
    for (const auto& cs : cases) {
        for (std::uint64_t n : {100ULL, 1000ULL, 10000ULL}) {
            auto batch = replicate<double>(3000, 11 + n, 1, 0, [&](std::size_t, Rng& rng) {
                std::uint64_t v = 0;
                for (std::uint64_t k = 0; k < n; ++k) {
                    v = blp_step(BlpKind::Zeta, cs.w, v, rng);
                    if (v == 0) return 0.0;  // hit zero before n generations
                }
                return 1.0;
            });
            double survive = 0;
            for (std::size_t i = 0; i < batch.size(); ++i) survive += batch.records[i];
            const double p = survive / static_cast<double>(batch.size());
            const double floor =
                0.3 * std::pow(static_cast<double>(n), -(cs.gamma + 0.2));
            CHECK(p >= floor);
        }
    }
}

// For gamma < 0 (self-attracting weights) the chain started at 4n escapes
// below-n returns with probability bounded away from zero.
TEST_CASE("negative-gamma chains escape upward") {
    const auto w = WeightFn::asymptotically_free(1.0, 0.75, 1.0, {{0, 0.4}});
    for (std::uint64_t n : {4ULL, 8ULL, 16ULL}) {
        auto batch = replicate<double>(300, 7 + n, 2, 0, [&](std::size_t, Rng& rng) {
            std::uint64_t v = 4 * n;
            for (std::uint64_t gen = 0; gen < 1000000; ++gen) {
                if (v <= n) return 0.0;           // returned
                if (v >= 200 * n) return 1.0;     // escaped for good, to the chosen proxy height
                v = blp_step(BlpKind::Zeta, w, v, rng);
            }
            return 1.0;  // wandered without returning for the generation budget
        });
        double escaped = 0;
        for (std::size_t i = 0; i < batch.size(); ++i) escaped += batch.records[i];
        CHECK(escaped / static_cast<double>(batch.size()) >= 0.05);
    }
}

// Scaled zeta drifts like the squared-Bessel limit: from floor(yn) the mean
// after n generations moves by about (1 - gamma) (dimension 2 - 2 gamma,
// drift (2-2gamma)/2 per unit of scaled time).
TEST_CASE("scaled zeta mean drift matches the limit dimension") {
    const auto one = WeightFn::constant(1.0);  // gamma = 0, drift 1 per unit time
    const std::uint64_t n = 300;
    const double y = 1.5;
    auto batch = replicate<double>(3000, 515, 3, 0, [&](std::size_t, Rng& rng) {
        std::uint64_t v = static_cast<std::uint64_t>(y * static_cast<double>(n));
        for (std::uint64_t k = 0; k < n; ++k) v = blp_step(BlpKind::Zeta, one, v, rng);
        return static_cast<double>(v) / static_cast<double>(n);
    });
    const auto m = moments(collect(batch, [](double v) { return v; }));
    CHECK(m.mean == doctest::Approx(y + 1.0).epsilon(0.05));
}

// Scaled zeta-tilde absorption frequency agrees with the dimension-2gamma
// squared Bessel absorbed at 0; at gamma = 0 that reference is itself
// sampled from the diffusion module.
TEST_CASE("scaled zeta-tilde absorption matches the diffusion reference") {
    const auto one = WeightFn::constant(1.0);
    const std::uint64_t n = 250;
    const double y = 0.5;
    auto walk_batch = replicate<double>(4000, 616, 4, 0, [&](std::size_t, Rng& rng) {
        std::uint64_t v = static_cast<std::uint64_t>(y * static_cast<double>(n));
        for (std::uint64_t k = 0; k < n; ++k) {
            v = blp_step(BlpKind::ZetaTilde, one, v, rng);
            if (v == 0) return 1.0;  // absorbed before scaled time 1
        }
        return 0.0;
    });
    auto diff_batch = replicate<double>(4000, 617, 5, 0, [&](std::size_t, Rng& rng) {
        BesqParams p;
        p.alpha = 0.0;
        p.delta = 0.0;  // dimension 2 gamma = 0
        p.start = y;
        p.step = 1e-3;
        p.horizon = 1.0;
        const auto path = sample_besq(p, rng);
        return path.absorbed_at ? 1.0 : 0.0;
    });
    const auto mw = moments(collect(walk_batch, [](double v) { return v; }));
    const auto md = moments(collect(diff_batch, [](double v) { return v; }));
    CHECK(std::abs(mw.mean - md.mean) <=
          4.0 * std::sqrt(mw.se_mean * mw.se_mean + md.se_mean * md.se_mean) + 0.03);
}
