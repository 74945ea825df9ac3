#include <doctest.h>

#include <cmath>
#include <vector>

#include "sirw/replicate.hpp"
#include "sirw/stats.hpp"
#include "sirw/urn.hpp"
#include "sirw/walk.hpp"
#include "sirw/window_walk.hpp"

using namespace sirw;

// The bounce collapse must leave in-window laws unchanged. Compare the
// full-lattice walk with the windowed kernel on profile functionals at an
// upcrossing stopping time small enough for the plain walk to be affordable.
TEST_CASE("windowed and plain walks share profile laws at the stopping time") {
    const auto poly = WeightFn::polynomial(1.0);
    const std::uint64_t ell = 30;
    const std::int64_t top = 40;
    const std::size_t R = 6000;

    struct Rec {
        double e_mid, e_far, occ;
    };
    auto windowed = replicate<Rec>(R, 1000, 1, 0, [&](std::size_t, Rng& rng) {
        WindowSirw walk(poly, 0, top, rng);
        std::uint64_t occ = 0;
        while (walk.upcrossings(0) <= ell) {
            if (walk.position() <= 10) ++occ;
            walk.step();
        }
        return Rec{static_cast<double>(walk.upcrossings(5)),
                   static_cast<double>(walk.upcrossings(20)), static_cast<double>(occ)};
    });
    auto plain = replicate<Rec>(R, 2000, 2, 0, [&](std::size_t, Rng& rng) {
        Walk walk(poly, rng);
        std::uint64_t occ = 0;
        while (walk.upcrossings(0) <= ell) {
            if (walk.position() >= 0 && walk.position() <= 10) ++occ;
            walk.step();
        }
        return Rec{static_cast<double>(walk.upcrossings(5)),
                   static_cast<double>(walk.upcrossings(20)), static_cast<double>(occ)};
    });

    auto wm = collect(windowed, [](const Rec& r) { return r.e_mid; });
    auto pm = collect(plain, [](const Rec& r) { return r.e_mid; });
    CHECK(ks_distance(wm, pm) < 0.035);
    auto wf = collect(windowed, [](const Rec& r) { return r.e_far; });
    auto pf = collect(plain, [](const Rec& r) { return r.e_far; });
    CHECK(ks_distance(wf, pf) < 0.035);
    auto wo = collect(windowed, [](const Rec& r) { return r.occ; });
    auto po = collect(plain, [](const Rec& r) { return r.occ; });
    CHECK(ks_distance(wo, po) < 0.035);
}

// Conditional transition law of the upcrossing profile at a bond away from
// the origin, against the exact urn oracle.
TEST_CASE("windowed profile transitions follow the urn law bond by bond") {
    const auto poly = WeightFn::polynomial(1.0);
    const std::uint64_t ell = 10, cap = 150;
    const std::size_t R = 60000;
    std::vector<std::vector<std::int64_t>> samples(13);
    Rng rng(31415);
    for (std::size_t i = 0; i < R; ++i) {
        WindowSirw walk(poly, 0, 30, rng);
        while (walk.upcrossings(0) <= ell) walk.step();
        const auto e2 = walk.upcrossings(2);
        const auto e3 = walk.upcrossings(3);
        if (e2 >= 1 && e2 <= 12)
            samples[e2].push_back(static_cast<std::int64_t>(e3) -
                                  static_cast<std::int64_t>(e2));
    }
    int tested = 0;
    for (std::uint64_t i = 1; i <= 12; ++i) {
        if (samples[i].size() < 3000) continue;
        const auto law = exact_law(UrnVariant::Plus, poly, i, cap);
        const auto [emp, tail] = empirical_law(samples[i], i, cap);
        CHECK(total_variation(emp, law.probabilities) + std::abs(tail - law.tail_mass) < 0.03);
        ++tested;
    }
    CHECK(tested >= 3);
}

// The perturbed kernel's occupation clock agrees with the plain perturbed
// walk (no window) on the time spent near the origin up to a fixed horizon.
TEST_CASE("perturbed kernel matches the free perturbed walk near the origin") {
    const double theta = 0.5;
    const std::uint64_t steps = 20000;
    const std::int64_t band = 10;
    const std::size_t R = 4000;
    auto windowed = replicate<double>(R, 51, 3, 0, [&](std::size_t, Rng& rng) {
        WindowPq pq(theta, 40, rng);
        std::uint64_t occ = 0;
        std::uint64_t k = 0;
        // count in-window time only against the free walk's in-band time;
        // the windowed kernel must consume the same in-band occupancy
        while (k < steps) {
            if (pq.position() <= band) ++occ;
            pq.step();
            ++k;
        }
        return static_cast<double>(occ);
    });
    auto free_walk = replicate<double>(R, 52, 4, 0, [&](std::size_t, Rng& rng) {
        // plain perturbed walk over the same number of *in-[0,40]* indices
        const double p_max = 1.0 / (2.0 - theta), p_min = 1.0 - p_max;
        std::int64_t y = 0, smax = 0, imin = 0;
        std::uint64_t occ = 0, in_window = 0, k = 0;
        while (in_window < steps && k < 100000000ULL) {
            if (y >= 0 && y <= 40) {
                ++in_window;
                if (y <= band) ++occ;
            }
            double p = 0.5;
            if (k > 0) {
                if (y == smax) p = p_max;
                else if (y == imin) p = p_min;
            }
            y += rng.bernoulli(p) ? 1 : -1;
            if (y > smax) smax = y;
            if (y < imin) imin = y;
            ++k;
        }
        return static_cast<double>(occ);
    });
    auto a = collect(windowed, [](double v) { return v; });
    auto b = collect(free_walk, [](double v) { return v; });
    CHECK(ks_distance(a, b) < 0.04);
}
