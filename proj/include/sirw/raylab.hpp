#pragma once
// Experiment harness: Ray-Knight edge-local-time profiles at inverse
// local times, local-time increment laws, the occupation functional
// G_{delta,M}, the walk-vs-diffusion second-moment gap, and the diffusive
// functional-limit check for asymptotically free weights.
//
// Walk-side experiments run on the windowed kernels (window_walk.hpp): every
// statistic here is a functional of in-window occupation and edge counts, so
// boundary excursions collapse exactly. Inside the simulation window the
// index count equals the occupation of [0,1] in diffusive units, and the
// occupation clocks fire on integer counter thresholds; ties between a
// clock event (during the occupancy of an index) and an edge event (at the
// jump ending that index) are ordered occupancy-first.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sirw/diffusion.hpp"
#include "sirw/replicate.hpp"
#include "sirw/report.hpp"
#include "sirw/stats.hpp"
#include "sirw/walk.hpp"
#include "sirw/weights.hpp"
#include "sirw/window_walk.hpp"

namespace sirw {

inline std::vector<double> unit_grid(std::size_t points = 21) {
    if (points < 2) throw std::invalid_argument("grid needs >= 2 points");
    std::vector<double> xs(points);
    for (std::size_t i = 0; i < points; ++i)
        xs[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return xs;
}

// Moments of Z^(alpha,delta) started at s: mean s + delta x / (2(2a+1)),
// variance 2 s x/(2a+1) + delta x^2 / (2 (2a+1)^2).
inline double besq_mean(double alpha, double delta, double s, double x) {
    return s + delta * x / (2.0 * (2.0 * alpha + 1.0));
}

inline double besq_variance(double alpha, double delta, double s, double x) {
    const double a = 2.0 * alpha + 1.0;
    return 2.0 * s * x / a + delta * x * x / (2.0 * a * a);
}

inline constexpr std::uint64_t kWindowStepBudget = 400'000'000ULL;

// Strict-exceedance integer threshold: the counter passes `level` once it
// reaches floor(level)+1.
inline std::uint64_t strict_threshold(double level) {
    return static_cast<std::uint64_t>(std::floor(level)) + 1;
}

// ---------------------------------------------------------------------------
// Ray-Knight profile: edge-local-time profile E(.)/N at the stopping time
// where E(0) first exceeds floor(N M), against Z^(alpha,1) moments from M.
// ---------------------------------------------------------------------------
inline Report rk_profile(const WeightFn& w, double M, std::uint64_t N, std::size_t replicas,
                         std::uint64_t seed, int workers = 0, std::size_t grid_points = 21,
                         std::uint64_t budget = kWindowStepBudget) {
    if (N < 50 || !(M > 0)) throw std::invalid_argument("rk_profile: need N >= 50, M > 0");
    if (workers <= 0) workers = default_workers();
    const auto ell = static_cast<std::uint64_t>(std::floor(static_cast<double>(N) * M));
    const auto grid = unit_grid(grid_points);
    const double alpha = w.alpha_or_zero();

    struct Rec {
        std::vector<double> profile;
    };
    auto batch = replicate<Rec>(replicas, seed, 0x52B01, workers, [&](std::size_t, Rng& rng) {
        WindowSirw walk(w, 0, static_cast<std::int64_t>(N), rng);
        while (walk.upcrossings(0) <= ell) {
            if (walk.in_window_steps() >= budget) throw ReplicaError("step budget");
            walk.step();
        }
        Rec rec;
        rec.profile.reserve(grid.size());
        for (double x : grid) {
            const auto site = static_cast<std::int64_t>(std::floor(static_cast<double>(N) * x));
            rec.profile.push_back(static_cast<double>(walk.upcrossings(site)) /
                                  static_cast<double>(N));
        }
        return rec;
    });
    require_failure_rate(batch.failures, replicas, 0.05, "rk_profile");

    Report report;
    report.echo("experiment: rk-profile");
    report.echo("weight: " + w.describe() + ", M: " + std::to_string(M) +
                ", N: " + std::to_string(N) + ", seed: " + std::to_string(seed));
    report.replicas = replicas;
    report.failures = batch.failures;
    report.wall_seconds = batch.wall_seconds;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto vals = collect(batch, [&](const Rec& r) { return r.profile[j]; });
        const auto m = moments(vals);
        const double tm = besq_mean(alpha, 1.0, M, grid[j]);
        const double tv = besq_variance(alpha, 1.0, M, grid[j]);
        report.rows.push_back({"profile_mean", grid[j], m.mean, m.se_mean, tm, std::nullopt,
                               std::abs(m.mean - tm) <= 0.05 * tm + 3 * m.se_mean ? "pass"
                                                                                  : "fail"});
        report.rows.push_back({"profile_var", grid[j], m.var, m.se_var, tv, std::nullopt,
                               (tv == 0.0 ? m.var <= 1e-12 : std::abs(m.var - tv) <=
                                    0.10 * tv + 3 * m.se_var)
                                   ? "pass"
                                   : "fail"});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Increment experiment: profile increments between the E(0)-clock levels
// floor(N(M+c)) and floor(N(M+1-c)). The mean should be flat at 1-2c; the
// variance at each x is compared against both diffusion candidates,
// 2(1-2c)x (dimension-0 limit with no self-repulsion scaling) and
// 2(1-2c)x/(2 alpha + 1) (the naive scaled candidate).
// ---------------------------------------------------------------------------
struct IncrementResult {
    Report report;
    double var_at_1 = 0.0;
    double se_var_at_1 = 0.0;
};

inline IncrementResult increment_experiment(const WeightFn& w, double M, double c,
                                            std::uint64_t N, std::size_t replicas,
                                            std::uint64_t seed, int workers = 0,
                                            std::size_t grid_points = 21,
                                            std::uint64_t budget = kWindowStepBudget) {
    if (N < 50) throw std::invalid_argument("increment_experiment: need N >= 50");
    if (!(c >= 0.0 && c < 0.5)) throw std::invalid_argument("increment_experiment: c in [0,1/2)");
    if (workers <= 0) workers = default_workers();
    const auto ell_lo =
        static_cast<std::uint64_t>(std::floor(static_cast<double>(N) * (M + c)));
    const auto ell_hi =
        static_cast<std::uint64_t>(std::floor(static_cast<double>(N) * (M + 1.0 - c)));
    const auto grid = unit_grid(grid_points);
    const double alpha = w.alpha_or_zero();
    std::vector<std::int64_t> sites(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        sites[j] = static_cast<std::int64_t>(std::floor(static_cast<double>(N) * grid[j]));

    struct Rec {
        std::vector<double> increment;
    };
    auto batch = replicate<Rec>(replicas, seed, 0x52B02, workers, [&](std::size_t, Rng& rng) {
        WindowSirw walk(w, 0, static_cast<std::int64_t>(N), rng);
        std::vector<std::uint64_t> snap_lo;
        while (walk.upcrossings(0) <= ell_hi) {
            if (walk.in_window_steps() >= budget) throw ReplicaError("step budget");
            walk.step();
            if (snap_lo.empty() && walk.upcrossings(0) > ell_lo) {
                snap_lo.resize(sites.size());
                for (std::size_t j = 0; j < sites.size(); ++j)
                    snap_lo[j] = walk.upcrossings(sites[j]);
            }
        }
        Rec rec;
        rec.increment.reserve(sites.size());
        for (std::size_t j = 0; j < sites.size(); ++j)
            rec.increment.push_back(
                static_cast<double>(walk.upcrossings(sites[j]) - snap_lo[j]) /
                static_cast<double>(N));
        return rec;
    });
    require_failure_rate(batch.failures, replicas, 0.05, "increment_experiment");

    IncrementResult out;
    Report& report = out.report;
    report.echo("experiment: increment-test");
    report.echo("weight: " + w.describe() + ", M: " + std::to_string(M) +
                ", c: " + std::to_string(c) + ", N: " + std::to_string(N) +
                ", seed: " + std::to_string(seed));
    report.replicas = replicas;
    report.failures = batch.failures;
    report.wall_seconds = batch.wall_seconds;

    const double start = 1.0 - 2.0 * c;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto vals = collect(batch, [&](const Rec& r) { return r.increment[j]; });
        const auto m = moments(vals);
        report.rows.push_back({"increment_mean", grid[j], m.mean, m.se_mean, start, std::nullopt,
                               std::abs(m.mean - start) <= 3 * m.se_mean + 0.01 ? "pass"
                                                                                : "fail"});
        const double var_a = 2.0 * start * grid[j];                        // dimension-0 limit
        const double var_b = var_a / (2.0 * alpha + 1.0);                  // scaled candidate
        std::string verdict = "info";
        if (grid[j] == 1.0) {
            out.var_at_1 = m.var;
            out.se_var_at_1 = m.se_var;
            if (std::abs(var_a - var_b) < 1e-12) {
                verdict = "indistinguishable";
            } else if (std::abs(m.var - var_a) <= 3 * m.se_var &&
                       std::abs(m.var - var_b) >= 5 * m.se_var) {
                verdict = "matches_a";
            } else if (std::abs(m.var - var_b) <= 3 * m.se_var &&
                       std::abs(m.var - var_a) >= 5 * m.se_var) {
                verdict = "matches_b";
            } else {
                verdict = "inconclusive";
            }
        }
        report.rows.push_back(
            {"increment_var", grid[j], m.var, m.se_var, var_a, var_b, verdict});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Extremum-perturbed Brownian motion via its perturbed-walk sampler.
//
// W_a = sqrt(2a+1) W^{1/2,1/2} is simulated as the diffusively rescaled
// perturbed walk with theta = 1/2 at scale n_w = (2a+1) q^2, so the scaled
// path value y/q covers [0,1] for y in [0,q]. Occupation windows of width
// eps correspond to eps*q consecutive sites; the half-local-time clock at 0
// is the (1/(2 eps))-scaled occupation of [0, eps).
// ---------------------------------------------------------------------------
struct PqScale {
    double theta = 0.5;
    std::uint64_t q = 300;          // sites per unit of scaled space
    double eps = 0.05;              // occupation window width (eps * q sites)
    double n_w(double alpha) const {
        return (2.0 * alpha + 1.0) * static_cast<double>(q) * static_cast<double>(q);
    }
};

// Local-time increment profile of W_a between inverse half-local-times M and
// M+1 at 0, measured through eps-window occupation averages on the grid
// x = 0, eps, 2 eps, ..., 1. Targets: mean 1, variance 2x/(2a+1).
inline Report bmpe_increment_experiment(double alpha, double M, std::size_t replicas,
                                        std::uint64_t seed, int workers = 0,
                                        PqScale scale = {},
                                        std::uint64_t budget = kWindowStepBudget) {
    if (!(M >= 1.0)) throw std::invalid_argument("bmpe_increment: need M >= 1");
    if (workers <= 0) workers = default_workers();
    const auto win = static_cast<std::uint64_t>(std::llround(scale.eps * static_cast<double>(scale.q)));
    if (win < 5) throw std::invalid_argument("bmpe_increment: eps window under 5 sites");
    const std::size_t windows = static_cast<std::size_t>(scale.q / win) + 1;  // covers [0, 1+eps)
    const std::int64_t hi = static_cast<std::int64_t>(windows * win - 1);
    const double n_w = scale.n_w(alpha);
    const std::uint64_t fire_lo = strict_threshold(2.0 * scale.eps * M * n_w);
    const std::uint64_t fire_hi = strict_threshold(2.0 * scale.eps * (M + 1.0) * n_w);

    struct Rec {
        std::vector<double> increment;
    };
    auto batch = replicate<Rec>(replicas, seed, 0x52B03, workers, [&](std::size_t, Rng& rng) {
        WindowPq pq(scale.theta, hi, rng);
        std::vector<std::uint64_t> cnt(windows, 0);
        std::vector<std::uint64_t> snap_lo;
        std::uint64_t clock = 0;
        for (;;) {
            if (pq.in_window_steps() >= budget) throw ReplicaError("horizon");
            const auto y = static_cast<std::uint64_t>(pq.position());
            const std::size_t wdx = static_cast<std::size_t>(y / win);
            ++cnt[wdx];
            if (wdx == 0) {
                ++clock;
                if (clock == fire_lo) snap_lo = cnt;
                if (clock == fire_hi) break;
            }
            pq.step();
        }
        Rec rec;
        rec.increment.reserve(windows);
        for (std::size_t j = 0; j < windows; ++j)
            rec.increment.push_back(static_cast<double>(cnt[j] - snap_lo[j]) /
                                    (2.0 * scale.eps * n_w));
        return rec;
    });
    if (replicas > 0 &&
        static_cast<double>(batch.failures) > 0.01 * static_cast<double>(replicas))
        throw std::runtime_error("bmpe_increment: more than 1% of replicas hit the horizon");

    Report report;
    report.echo("experiment: bmpe-increment");
    report.echo("alpha: " + std::to_string(alpha) + ", M: " + std::to_string(M) +
                ", q: " + std::to_string(scale.q) + ", eps: " + std::to_string(scale.eps) +
                ", seed: " + std::to_string(seed));
    report.replicas = replicas;
    report.failures = batch.failures;
    report.wall_seconds = batch.wall_seconds;
    for (std::size_t j = 0; j < windows; ++j) {
        const double x = static_cast<double>(j) * scale.eps;
        const auto vals = collect(batch, [&](const Rec& r) { return r.increment[j]; });
        const auto m = moments(vals);
        const double tv = 2.0 * x / (2.0 * alpha + 1.0);
        report.rows.push_back({"bmpe_increment_mean", x, m.mean, m.se_mean, 1.0, std::nullopt,
                               std::abs(m.mean - 1.0) <= 3 * m.se_mean + 0.02 ? "pass" : "fail"});
        report.rows.push_back({"bmpe_increment_var", x, m.var, m.se_var, tv, std::nullopt,
                               (tv == 0.0 ? m.var <= 0.01
                                          : std::abs(m.var - tv) <= 0.15 * tv + 3 * m.se_var)
                                   ? "pass"
                                   : "fail"});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Occupation-functional gap. Walk side: polynomially self-repelling walk at
// n = N^2, G from the delta-window occupation clocks (path form) and from
// the E(0)-clock window (count form, a lower bound through the sandwich
// event J_n). Diffusion side: the same functional of W_a through the
// perturbed-walk sampler. Reported: both E[G^2 ^ K] estimates, their gap,
// and the J_n frequency.
// ---------------------------------------------------------------------------
struct NonconvResult {
    Report report;
    double gap = 0.0;
    double gap_se = 0.0;
    double j_freq = 0.0;
};

inline NonconvResult nonconvergence_test(double alpha, const std::vector<std::uint64_t>& N_values,
                                         double delta, double M, double c, double cap,
                                         std::size_t replicas, std::uint64_t seed,
                                         int workers = 0,
                                         std::uint64_t budget = kWindowStepBudget) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("nonconvergence_test: alpha must be >= 0");
    if (!(delta > 0.0 && delta <= 0.5))
        throw std::invalid_argument("nonconvergence_test: delta in (0, 1/2]");
    if (!(c >= 0.0 && c < 0.5)) throw std::invalid_argument("nonconvergence_test: c in [0,1/2)");
    if (!(cap > 0.0)) throw std::invalid_argument("nonconvergence_test: cap must be > 0");
    if (workers <= 0) workers = default_workers();
    // alpha = 0 degenerates to the constant weight; kept for the no-gap
    // consistency check.
    const WeightFn w = alpha > 0.0 ? WeightFn::polynomial(alpha) : WeightFn::constant(1.0);

    NonconvResult out;
    Report& report = out.report;
    report.echo("experiment: nonconv");
    report.echo("alpha: " + std::to_string(alpha) + ", delta: " + std::to_string(delta) +
                ", M: " + std::to_string(M) + ", c: " + std::to_string(c) +
                ", K: " + std::to_string(cap) + ", seed: " + std::to_string(seed));

    for (std::size_t iN = 0; iN < N_values.size(); ++iN) {
        const std::uint64_t N = N_values[iN];
        const double n = static_cast<double>(N) * static_cast<double>(N);
        const auto delta_sites = static_cast<std::uint64_t>(std::llround(delta * static_cast<double>(N)));
        if (delta_sites < 5)
            throw std::invalid_argument("nonconvergence_test: delta window under 5 sites");
        const std::uint64_t fire_dM = strict_threshold(2.0 * delta * M * n);
        const std::uint64_t fire_dM1 = strict_threshold(2.0 * delta * (M + 1.0) * n);
        const std::uint64_t fire_eLo = strict_threshold((M + c) * static_cast<double>(N));
        const std::uint64_t fire_eHi = strict_threshold((M + 1.0 - c) * static_cast<double>(N));

        struct WalkRec {
            double g_path = 0.0, g_count = 0.0;
            bool j1 = false, j2 = false;
        };
        auto wbatch = replicate<WalkRec>(
            replicas, seed, 0x52B04 + iN, workers, [&](std::size_t, Rng& rng) {
                WindowSirw walk(w, 0, static_cast<std::int64_t>(N), rng);
                std::uint64_t occ_delta = 0;
                // in-window index count doubles as the [0,1]-occupation count
                std::uint64_t sub_dM = 0, sub_dM1 = 0, sub_eLo = 0, sub_eHi = 0;
                std::uint64_t idx_dM = 0, idx_dM1 = 0, idx_eLo = 0, idx_eHi = 0;
                for (;;) {
                    const std::uint64_t k = walk.in_window_steps();
                    if (k >= budget) throw ReplicaError("step budget");
                    const std::int64_t x = walk.position();
                    if (static_cast<std::uint64_t>(x) < delta_sites) {
                        ++occ_delta;
                        if (occ_delta == fire_dM) sub_dM = 2 * k, idx_dM = k + 1;
                        if (occ_delta == fire_dM1) sub_dM1 = 2 * k, idx_dM1 = k + 1;
                    }
                    walk.step();
                    if (x == 0 && walk.position() == 1) {
                        const std::uint64_t e0 = walk.upcrossings(0);
                        if (e0 == fire_eLo) sub_eLo = 2 * k + 1, idx_eLo = k + 1;
                        if (e0 == fire_eHi) sub_eHi = 2 * k + 1, idx_eHi = k + 1;
                    }
                    if (sub_dM1 && sub_eHi) break;
                }
                WalkRec rec;
                rec.g_path = static_cast<double>(idx_dM1 - idx_dM) / (2.0 * n);
                rec.g_count = static_cast<double>(idx_eHi - idx_eLo) / (2.0 * n);
                rec.j1 = sub_dM < sub_eLo;
                rec.j2 = sub_eHi < sub_dM1;
                return rec;
            });
        require_failure_rate(wbatch.failures, replicas, 0.05, "nonconvergence_test walk side");

        PqScale scale;
        scale.q = N;
        scale.eps = delta;
        const double n_w = scale.n_w(alpha);
        const std::uint64_t pq_fire_lo = strict_threshold(2.0 * delta * M * n_w);
        const std::uint64_t pq_fire_hi = strict_threshold(2.0 * delta * (M + 1.0) * n_w);
        struct PqRec {
            double g = 0.0;
        };
        auto pbatch = replicate<PqRec>(
            replicas, seed, 0x52B05 + iN, workers, [&](std::size_t, Rng& rng) {
                WindowPq pq(scale.theta, static_cast<std::int64_t>(N), rng);
                std::uint64_t occ_delta = 0;
                std::uint64_t idx_lo = 0, idx_hi = 0;
                for (;;) {
                    const std::uint64_t k = pq.in_window_steps();
                    if (k >= budget) throw ReplicaError("horizon");
                    if (static_cast<std::uint64_t>(pq.position()) < delta_sites) {
                        ++occ_delta;
                        if (occ_delta == pq_fire_lo) idx_lo = k + 1;
                        if (occ_delta == pq_fire_hi) {
                            idx_hi = k + 1;
                            break;
                        }
                    }
                    pq.step();
                }
                PqRec rec;
                rec.g = static_cast<double>(idx_hi - idx_lo) / (2.0 * n_w);
                return rec;
            });
        require_failure_rate(pbatch.failures, replicas, 0.05, "nonconvergence_test bmpe side");

        report.replicas += 2 * replicas;
        report.failures += wbatch.failures + pbatch.failures;
        report.wall_seconds += wbatch.wall_seconds + pbatch.wall_seconds;

        auto g2cap = [cap](double g) { return std::min(g * g, cap); };
        const auto walk_g2 =
            collect(wbatch, [&](const WalkRec& r) { return g2cap(r.g_path); });
        const auto walk_g2_count =
            collect(wbatch, [&](const WalkRec& r) { return g2cap(r.g_count); });
        const auto pq_g2 = collect(pbatch, [&](const PqRec& r) { return g2cap(r.g); });
        const auto j_flags = collect(wbatch, [](const WalkRec& r) { return r.j1 && r.j2 ? 1.0 : 0.0; });
        const auto mw = moments(walk_g2);
        const auto mwc = moments(walk_g2_count);
        const auto mp = moments(pq_g2);
        const auto mj = moments(j_flags);
        const double capped_frac_walk =
            static_cast<double>(std::count_if(walk_g2.begin(), walk_g2.end(),
                                              [&](double v) { return v >= cap; })) /
            static_cast<double>(walk_g2.size());

        const double walk_target = 5.0 / 3.0;                                // dim-0 second moment
        const double bmpe_target = 1.0 + 2.0 / (3.0 * (2.0 * alpha + 1.0));  // scaled limit
        const double NN = static_cast<double>(N);
        report.rows.push_back({"walk_G2_capped", NN, mw.mean, mw.se_mean, walk_target,
                               std::nullopt, "info"});
        report.rows.push_back({"walk_G2_capped_countform", NN, mwc.mean, mwc.se_mean,
                               std::nullopt, std::nullopt, "info"});
        report.rows.push_back({"bmpe_G2_capped", NN, mp.mean, mp.se_mean, bmpe_target,
                               std::nullopt, "info"});
        report.rows.push_back({"walk_capped_fraction", NN, capped_frac_walk, std::nullopt,
                               std::nullopt, std::nullopt, "info"});

        out.gap = mw.mean - mp.mean;
        out.gap_se = std::sqrt(mw.se_mean * mw.se_mean + mp.se_mean * mp.se_mean);
        out.j_freq = mj.mean;
        report.rows.push_back({"gap", NN, out.gap, out.gap_se, std::nullopt, std::nullopt,
                               out.gap - 1.96 * out.gap_se > 0.0 ? "pass" : "fail"});
        report.rows.push_back({"J_frequency", NN, out.j_freq, mj.se_mean, 0.9, std::nullopt,
                               out.j_freq >= 0.9 ? "pass" : "warn_insufficient_J"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Functional-limit check for asymptotically free weights: two-sample KS at
// each grid time between the rescaled walk marginal and the
// extremum-perturbed Brownian motion with both parameters gamma.
// ---------------------------------------------------------------------------
inline Report afc_limit_test(const WeightFn& w, std::uint64_t n, std::vector<double> t_grid,
                             std::size_t replicas, std::uint64_t seed, int workers = 0,
                             double ks_threshold = 0.03, double bmpe_step = 1e-5) {
    if (w.kind() == WeightKind::Polynomial)
        throw std::invalid_argument("afc_limit_test: polynomial weights have no such limit");
    if (workers <= 0) workers = default_workers();
    double gamma = 0.0;
    if (w.kind() == WeightKind::Constant) gamma = 0.0;
    else gamma = gamma_limit(w, 1 << 16, 1e-3).value;
    std::sort(t_grid.begin(), t_grid.end());
    if (t_grid.empty() || !(t_grid.front() > 0.0) || !(t_grid.back() <= 1.0))
        throw std::invalid_argument("afc_limit_test: t grid must lie in (0,1]");

    struct WalkRec {
        std::vector<double> values;
    };
    auto walk_batch = replicate<WalkRec>(
        replicas, seed, 0x52B06, workers, [&](std::size_t, Rng& rng) {
            Walk walk(w, rng);
            WalkRec rec;
            const double scale = 1.0 / std::sqrt(static_cast<double>(n));
            for (double t : t_grid) {
                const auto target = static_cast<std::uint64_t>(
                    std::floor(static_cast<double>(n) * t));
                while (walk.steps() < target) walk.step();
                rec.values.push_back(static_cast<double>(walk.position()) * scale);
            }
            return rec;
        });

    struct BmpeRec {
        std::vector<double> values;
    };
    BmpeParams bp;
    bp.theta_plus = bp.theta_minus = gamma;
    bp.step = bmpe_step;
    bp.horizon = t_grid.back();
    auto bmpe_batch = replicate<BmpeRec>(
        replicas, seed, 0x52B07, workers, [&](std::size_t, Rng& rng) {
            const auto path = sample_bmpe(bp, rng);
            BmpeRec rec;
            for (double t : t_grid) rec.values.push_back(path.at_time(t));
            return rec;
        });

    Report report;
    report.echo("experiment: afc-test");
    report.echo("weight: " + w.describe() + ", n: " + std::to_string(n) +
                ", gamma: " + std::to_string(gamma) + ", seed: " + std::to_string(seed));
    report.replicas = 2 * replicas;
    report.wall_seconds = walk_batch.wall_seconds + bmpe_batch.wall_seconds;
    double max_ks = 0.0;
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        auto xs = collect(walk_batch, [&](const WalkRec& r) { return r.values[j]; });
        auto ys = collect(bmpe_batch, [&](const BmpeRec& r) { return r.values[j]; });
        const double ks = ks_distance(xs, ys);
        max_ks = std::max(max_ks, ks);
        report.rows.push_back({"ks_walk_vs_bmpe", t_grid[j], ks, std::nullopt, ks_threshold,
                               std::nullopt, ks <= ks_threshold ? "pass" : "fail"});
        if (w.kind() == WeightKind::Constant && std::abs(gamma) < 1e-15) {
            const double t = t_grid[j];
            const double ks_n = ks_distance_cdf(
                xs, [t](double v) { return normal_cdf(v / std::sqrt(t)); });
            report.rows.push_back({"ks_walk_vs_normal", t_grid[j], ks_n, std::nullopt,
                                   ks_threshold, std::nullopt,
                                   ks_n <= ks_threshold ? "pass" : "fail"});
        }
    }
    report.rows.push_back(
        {"max_ks", t_grid.back(), max_ks, std::nullopt, ks_threshold, std::nullopt,
         max_ks <= ks_threshold ? "pass" : "fail"});
    return report;
}

}  // namespace sirw
