#pragma once
// Branching-like processes. One step of zeta from i is the red count of a
// Minus urn stopped at its (i+1)-th blue draw; one step of zeta-tilde from i
// is the red count of a Plus urn stopped at its i-th blue draw, which makes
// 0 absorbing for zeta-tilde. With constant weights these reduce to
// Galton-Watson processes with Geometric(1/2) offspring (zeta with one
// immigrant before reproduction).

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sirw/replicate.hpp"
#include "sirw/report.hpp"
#include "sirw/rng.hpp"
#include "sirw/stats.hpp"
#include "sirw/urn.hpp"
#include "sirw/weights.hpp"
#include "sirw/window_walk.hpp"

namespace sirw {

enum class BlpKind { Zeta, ZetaTilde };

inline std::uint64_t blp_step(BlpKind kind, const WeightFn& w, std::uint64_t value, Rng& rng) {
    if (kind == BlpKind::Zeta) {
        UrnProcess urn(UrnVariant::Minus, w);
        auto stop = run_to_blue_count(urn, value + 1, rng);
        return urn.red_count();
    }
    if (value == 0) return 0;  // tau_0 = 0: no draws, no reds
    UrnProcess urn(UrnVariant::Plus, w);
    run_to_blue_count(urn, value, rng);
    return urn.red_count();
}

struct BlpPath {
    std::vector<std::uint64_t> values;
    std::optional<std::uint64_t> first_hit_zero;  // sigma_0 in generations
};

inline BlpPath blp_run(BlpKind kind, const WeightFn& w, std::uint64_t init,
                       std::uint64_t max_generations, Rng& rng) {
    if (max_generations < 1) throw std::invalid_argument("blp_run: need max_generations >= 1");
    BlpPath path;
    path.values.reserve(max_generations + 1);
    std::uint64_t v = init;
    path.values.push_back(v);
    if (v == 0) path.first_hit_zero = 0;
    for (std::uint64_t k = 0; k < max_generations; ++k) {
        if (kind == BlpKind::ZetaTilde && v == 0) break;  // absorbed
        v = blp_step(kind, w, v, rng);
        path.values.push_back(v);
        if (!path.first_hit_zero && v == 0) path.first_hit_zero = k + 1;
    }
    return path;
}

// ---------------------------------------------------------------------------
// Consistency of the chains with the walk's edge-local-time profile at the
// m-th visit to site z. Conditional on E(x-1) = i, the profile value E(x)
// is one zeta step from i when z < x < 0 and one zeta-tilde step from i when
// x > max(z,0). The check samples walks to the stopping time, pools the
// observed (i -> j) transitions per branch, and compares each conditional law
// with fresh one-step samples of the matching chain via two-sample KS.
// ---------------------------------------------------------------------------
struct BlpWalkCheck {
    Report report;
    double max_ks = 0.0;  // over covered i values
};

inline BlpWalkCheck blp_vs_walk_check(const WeightFn& w, std::int64_t z, std::uint64_t m,
                                      std::size_t samples, std::uint64_t seed, int workers = 0,
                                      std::size_t min_conditional = 200,
                                      double ks_threshold = 0.05,
                                      std::uint64_t max_conditioning_value = 8,
                                      std::int64_t bounce_margin = 64) {
    if (m < 1) throw std::invalid_argument("blp_vs_walk_check: m must be >= 1");
    if (workers <= 0) workers = default_workers();
    const std::int64_t lo = std::min<std::int64_t>(z, 0);
    const std::int64_t hi = std::max<std::int64_t>(z, 0) + bounce_margin;

    struct Rec {
        // (i, j) transition pairs seen on this walk, per branch
        std::vector<std::pair<std::uint64_t, std::uint64_t>> zeta_pairs;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> tilde_pairs;
    };
    auto batch = replicate<Rec>(samples, seed, 0x52B10, workers, [&](std::size_t, Rng& rng) {
        WindowSirw walk(w, lo, hi, rng);
        std::uint64_t visits = (z == 0) ? 1 : 0;  // time 0 counts as a visit
        while (visits < m) {
            if (walk.in_window_steps() >= 100'000'000ULL) throw ReplicaError("step budget");
            walk.step();
            if (walk.position() == z) ++visits;
        }
        Rec rec;
        for (std::int64_t x = z + 1; x < 0; ++x)
            rec.zeta_pairs.emplace_back(walk.upcrossings(x - 1), walk.upcrossings(x));
        for (std::int64_t x = std::max<std::int64_t>(z, 0) + 1; x < hi; ++x) {
            const auto i = walk.upcrossings(x - 1);
            const auto j = walk.upcrossings(x);
            rec.tilde_pairs.emplace_back(i, j);
            if (i == 0 && j == 0) break;  // profile is dead beyond this point
        }
        return rec;
    });
    require_failure_rate(batch.failures, samples, 0.05, "blp_vs_walk_check");

    BlpWalkCheck out;
    Report& report = out.report;
    report.echo("experiment: blp-vs-walk");
    report.echo("weight: " + w.describe() + ", z: " + std::to_string(z) +
                ", m: " + std::to_string(m) + ", seed: " + std::to_string(seed));
    report.replicas = samples;
    report.failures = batch.failures;
    report.wall_seconds = batch.wall_seconds;

    for (int branch = 0; branch < 2; ++branch) {
        const BlpKind kind = branch == 0 ? BlpKind::Zeta : BlpKind::ZetaTilde;
        std::map<std::uint64_t, std::vector<double>> conditional;
        for (std::size_t r = 0; r < batch.size(); ++r) {
            if (!batch.ok[r]) continue;
            const auto& pairs =
                branch == 0 ? batch.records[r].zeta_pairs : batch.records[r].tilde_pairs;
            for (const auto& [i, j] : pairs)
                if (i <= max_conditioning_value)
                    conditional[i].push_back(static_cast<double>(j));
        }
        const std::string stat =
            branch == 0 ? "zeta_conditional_ks" : "tilde_conditional_ks";
        Rng chain_rng = Rng::stream(seed, 0x52B11 + static_cast<std::uint64_t>(branch), 0);
        for (auto& [i, walk_side] : conditional) {
            if (walk_side.size() < min_conditional) {
                report.rows.push_back({stat, static_cast<double>(i), 0.0, std::nullopt,
                                       ks_threshold, std::nullopt, "uncovered"});
                continue;
            }
            std::vector<double> chain_side;
            chain_side.reserve(walk_side.size());
            for (std::size_t s = 0; s < walk_side.size(); ++s)
                chain_side.push_back(static_cast<double>(blp_step(kind, w, i, chain_rng)));
            const double ks = ks_distance(walk_side, chain_side);
            out.max_ks = std::max(out.max_ks, ks);
            report.rows.push_back({stat, static_cast<double>(i), ks,
                                   std::nullopt, ks_threshold, std::nullopt,
                                   ks <= ks_threshold ? "pass" : "fail"});
        }
    }
    return out;
}

}  // namespace sirw
