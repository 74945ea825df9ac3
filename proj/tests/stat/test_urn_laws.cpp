#include <doctest.h>

#include <cmath>
#include <vector>

#include "sirw/replicate.hpp"
#include "sirw/urn.hpp"

using namespace sirw;

// Tail decay of the stopped discrepancy: P(|D| >= 4 sqrt(n)) stays small and
// P(|D| >= m) decreases in m.
TEST_CASE("stopped discrepancy has sub-diffusive tails") {
    const auto poly = WeightFn::polynomial(1.0);
    for (std::uint64_t n : {1000ULL, 10000ULL}) {
        auto batch = replicate<double>(20000, 314, n, 0, [&](std::size_t, Rng& rng) {
            UrnProcess urn(UrnVariant::Plus, poly);
            return static_cast<double>(run_to_blue_count(urn, n, rng).discrepancy_at_tau);
        });
        const double root = std::sqrt(static_cast<double>(n));
        double prev = 1.0;
        for (double mult : {1.0, 2.0, 3.0, 4.0}) {
            std::size_t hits = 0;
            for (std::size_t i = 0; i < batch.size(); ++i)
                if (std::abs(batch.records[i]) >= mult * root) ++hits;
            const double p = static_cast<double>(hits) / static_cast<double>(batch.size());
            CHECK(p <= prev + 1e-12);
            prev = p;
            if (mult == 4.0) CHECK(p < 0.05);
        }
    }
}

// Oscillation between consecutive blue stopping levels: the exceedance
// probability of y sqrt(n) decays in y.
TEST_CASE("excursion oscillation decays in the threshold") {
    const auto poly = WeightFn::polynomial(1.0);
    const std::uint64_t n = 2000, M = 6;
    auto batch = replicate<double>(8000, 99, 5, 0, [&](std::size_t, Rng& rng) {
        UrnProcess urn(UrnVariant::Plus, poly);
        run_to_blue_count(urn, M * n, rng);
        const auto base = urn.discrepancy();
        std::int64_t peak = 0;
        while (urn.blue_count() < (M + 1) * n) {
            urn.step(rng);
            peak = std::max(peak, std::abs(urn.discrepancy() - base));
        }
        return static_cast<double>(peak) / std::sqrt(static_cast<double>(n));
    });
    std::vector<double> freq;
    for (double y : {0.5, 1.0, 2.0, 3.0}) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < batch.size(); ++i)
            if (batch.records[i] >= y) ++hits;
        freq.push_back(static_cast<double>(hits) / static_cast<double>(batch.size()));
    }
    for (std::size_t k = 1; k < freq.size(); ++k) CHECK(freq[k] <= freq[k - 1] + 1e-12);
    CHECK(freq.back() < 0.1);
    CHECK(freq.front() > freq.back());
}

// Variance of the paired increment D_{tau_2n} - D_{tau_n} is close to 2n.
TEST_CASE("paired increment variance tracks 2(m-n)") {
    const auto poly = WeightFn::polynomial(1.0);
    const std::uint64_t n = 2000;
    const auto rep =
        moment_scan(UrnVariant::Plus, poly, {n}, 20000, 27182, UrnSampler::Direct, 0, true);
    const auto& row = rep.find("var_D_increment", static_cast<double>(n));
    CHECK(row.estimate == doctest::Approx(2.0 * static_cast<double>(n)).epsilon(0.10));
}

// The mark-race sampler agrees with the direct chain in law at a larger n
// than the exact oracle can reach.
TEST_CASE("mark-race and direct samplers agree at n = 64") {
    const auto poly = WeightFn::polynomial(0.5);
    const std::uint64_t n = 64;
    std::vector<double> direct, race;
    Rng rng(8);
    for (int i = 0; i < 40000; ++i) {
        UrnProcess urn(UrnVariant::Minus, poly);
        direct.push_back(
            static_cast<double>(run_to_blue_count(urn, n, rng).discrepancy_at_tau));
        race.push_back(
            static_cast<double>(rubin_sample(UrnVariant::Minus, poly, n, rng).discrepancy_at_tau));
    }
    CHECK(ks_distance(direct, race) < 0.015);
}
