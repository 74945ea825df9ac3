#pragma once
// Generalized Polya urns. A draw adds a blue ball with probability
// b(B)/(b(B)+r(R)) where B, R are the blue/red counts so far. The three
// variants encode the left/right step sequences of the walk at sites left of,
// right of, and at the origin:
//   Minus: b(i) = w(2i),   r(j) = w(2j+1)
//   Plus:  b(i) = w(2i+1), r(j) = w(2j)
//   Zero:  b(i) = w(2i),   r(j) = w(2j)
// The discrepancy D_n = R_n - B_n satisfies D at the n-th blue stop
// tau_n^B equal to tau_n^B - 2n.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sirw/replicate.hpp"
#include "sirw/report.hpp"
#include "sirw/rng.hpp"
#include "sirw/stats.hpp"
#include "sirw/weights.hpp"

namespace sirw {

enum class UrnVariant { Minus, Plus, Zero };

inline std::string to_string(UrnVariant v) {
    switch (v) {
        case UrnVariant::Minus: return "minus";
        case UrnVariant::Plus: return "plus";
        case UrnVariant::Zero: return "zero";
    }
    return "?";
}

enum class Draw : std::uint8_t { Blue, Red };

inline constexpr std::uint64_t kUrnRunawayCap = 1'000'000'000ULL;

class UrnProcess {
  public:
    UrnProcess(UrnVariant variant, const WeightFn& w) : variant_(variant), w_(&w) {}

    std::uint64_t blue_count() const { return blue_; }
    std::uint64_t red_count() const { return red_; }
    std::uint64_t draw_index() const { return blue_ + red_; }
    std::int64_t discrepancy() const {
        return static_cast<std::int64_t>(red_) - static_cast<std::int64_t>(blue_);
    }

    double blue_rate() const { return blue_rate(blue_); }
    double red_rate() const { return red_rate(red_); }

    double blue_rate(std::uint64_t i) const {
        switch (variant_) {
            case UrnVariant::Minus: return (*w_)(2 * i);
            case UrnVariant::Plus: return (*w_)(2 * i + 1);
            case UrnVariant::Zero: return (*w_)(2 * i);
        }
        return 0.0;
    }

    double red_rate(std::uint64_t j) const {
        switch (variant_) {
            case UrnVariant::Minus: return (*w_)(2 * j + 1);
            case UrnVariant::Plus: return (*w_)(2 * j);
            case UrnVariant::Zero: return (*w_)(2 * j);
        }
        return 0.0;
    }

    double blue_probability() const {
        const double b = blue_rate(), r = red_rate();
        return b / (b + r);
    }

    // Conditional one-draw drift of the discrepancy, P(red) - P(blue).
    double discrepancy_drift() const {
        const double b = blue_rate(), r = red_rate();
        return (r - b) / (b + r);
    }

    Draw step(Rng& rng) {
        if (rng.bernoulli(blue_probability())) {
            ++blue_;
            return Draw::Blue;
        }
        ++red_;
        return Draw::Red;
    }

  private:
    UrnVariant variant_;
    const WeightFn* w_;
    std::uint64_t blue_ = 0;
    std::uint64_t red_ = 0;
};

struct UrnStopRecord {
    std::uint64_t tau = 0;                 // draw count at the n-th blue
    std::int64_t discrepancy_at_tau = 0;   // R - B = tau - 2n
    double drift_acc = 0.0;                // sum of conditional drifts before each draw
    std::optional<std::vector<Draw>> trace;
};

// Advance until the blue count reaches n. The drift accumulator makes the
// stopped-martingale identity E[D_tau] = E[drift_acc] available as a
// low-variance estimator of the mean discrepancy.
inline UrnStopRecord run_to_blue_count(UrnProcess& urn, std::uint64_t n, Rng& rng,
                                       bool keep_trace = false,
                                       std::uint64_t runaway_cap = kUrnRunawayCap) {
    if (urn.blue_count() > n)
        throw std::invalid_argument("run_to_blue_count: blue count already past n");
    UrnStopRecord rec;
    if (keep_trace) rec.trace.emplace();
    while (urn.blue_count() < n) {
        if (urn.draw_index() >= runaway_cap)
            throw ReplicaError("urn runaway: draw cap exceeded");
        rec.drift_acc += urn.discrepancy_drift();
        const Draw d = urn.step(rng);
        if (rec.trace) rec.trace->push_back(d);
    }
    rec.tau = urn.draw_index();
    rec.discrepancy_at_tau = urn.discrepancy();
    return rec;
}

// Rubin's construction: race two mark sequences on (0, inf), blue marks with
// independent Exp(b(i-1)) gaps and red marks with Exp(r(j-1)) gaps, and read
// draws off in mark order. Marks are generated lazily as each is consumed.
inline UrnStopRecord rubin_sample(UrnVariant variant, const WeightFn& w, std::uint64_t n,
                                  Rng& rng, std::uint64_t runaway_cap = kUrnRunawayCap) {
    if (n < 1) throw std::invalid_argument("rubin_sample: n must be >= 1");
    UrnProcess rates(variant, w);
    std::uint64_t blue = 0, red = 0;
    double next_blue = rng.exponential(rates.blue_rate(0));
    double next_red = rng.exponential(rates.red_rate(0));
    while (blue < n) {
        if (red >= runaway_cap) throw ReplicaError("urn runaway: red mark cap exceeded");
        if (next_blue < next_red) {
            ++blue;
            if (blue < n) next_blue += rng.exponential(rates.blue_rate(blue));
        } else {
            ++red;
            next_red += rng.exponential(rates.red_rate(red));
        }
    }
    UrnStopRecord rec;
    rec.tau = blue + red;
    rec.discrepancy_at_tau = static_cast<std::int64_t>(red) - static_cast<std::int64_t>(blue);
    return rec;
}

// Exact law of the discrepancy at the n-th blue draw, by dynamic programming
// over (blue, red) states with red truncated at red_cap. probabilities[j] is
// P(D = j - n); tail_mass is the probability that red exceeded red_cap.
struct ExactLaw {
    std::uint64_t n = 0;
    std::uint64_t red_cap = 0;
    std::vector<double> probabilities;  // indexed by red count j = 0..red_cap
    double tail_mass = 0.0;

    double prob_discrepancy(std::int64_t d) const {
        const std::int64_t j = d + static_cast<std::int64_t>(n);
        if (j < 0 || j > static_cast<std::int64_t>(red_cap)) return 0.0;
        return probabilities[static_cast<std::size_t>(j)];
    }
};

inline ExactLaw exact_law(UrnVariant variant, const WeightFn& w, std::uint64_t n,
                          std::uint64_t red_cap) {
    if (n < 1 || n > 12) throw std::invalid_argument("exact_law: need 1 <= n <= 12");
    const auto min_cap = static_cast<std::uint64_t>(
        static_cast<double>(n) + 10.0 * std::sqrt(static_cast<double>(n)));
    if (red_cap < min_cap)
        throw std::invalid_argument("exact_law: red_cap below n + 10 sqrt(n)");

    UrnProcess rates(variant, w);
    // mass[i][j]: probability of passing through state (blue=i, red=j).
    std::vector<std::vector<double>> mass(n, std::vector<double>(red_cap + 1, 0.0));
    mass[0][0] = 1.0;
    ExactLaw law;
    law.n = n;
    law.red_cap = red_cap;
    law.probabilities.assign(red_cap + 1, 0.0);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double b = rates.blue_rate(i);
        for (std::uint64_t j = 0; j <= red_cap; ++j) {
            const double m = mass[i][j];
            if (m == 0.0) continue;
            const double r = rates.red_rate(j);
            const double p_blue = b / (b + r);
            if (i + 1 == n) law.probabilities[j] += m * p_blue;
            else mass[i + 1][j] += m * p_blue;
            if (j + 1 <= red_cap) mass[i][j + 1] += m * (1.0 - p_blue);
            else law.tail_mass += m * (1.0 - p_blue);
        }
    }
    return law;
}

// Empirical law of D at tau_n^B over the same support as an ExactLaw,
// with out-of-range samples folded into the tail bucket.
inline std::pair<std::vector<double>, double> empirical_law(
    const std::vector<std::int64_t>& discrepancies, std::uint64_t n, std::uint64_t red_cap) {
    std::vector<double> p(red_cap + 1, 0.0);
    double tail = 0.0;
    const double unit = 1.0 / static_cast<double>(discrepancies.size());
    for (std::int64_t d : discrepancies) {
        const std::int64_t j = d + static_cast<std::int64_t>(n);
        if (j >= 0 && j <= static_cast<std::int64_t>(red_cap))
            p[static_cast<std::size_t>(j)] += unit;
        else
            tail += unit;
    }
    return {std::move(p), tail};
}

enum class UrnSampler { Direct, Rubin };

struct MomentScanTargets {
    double mean = 0.0;       // 1/(2(2 alpha + 1))
    double var_over_2n = 0.0;  // 1/(2 alpha + 1)
};

inline MomentScanTargets polynomial_urn_targets(double alpha) {
    return {1.0 / (2.0 * (2.0 * alpha + 1.0)), 1.0 / (2.0 * alpha + 1.0)};
}

// Monte Carlo moments of the stopped discrepancy. For each n we estimate
// E[D_{tau_n}] (via the stopped-martingale drift accumulator; the raw sample
// mean is also reported), Var(D_{tau_n}), and for m = 2n the variance of the
// increment D_{tau_m} - D_{tau_n}. Targets are the polynomial-weight limits
// with alpha = 0 used for the asymptotically free kinds.
inline Report moment_scan(UrnVariant variant, const WeightFn& w,
                          const std::vector<std::uint64_t>& n_values, std::size_t replicas,
                          std::uint64_t seed, UrnSampler sampler = UrnSampler::Direct,
                          int workers = 0, bool with_increment = false) {
    if (replicas < 100) throw std::invalid_argument("moment_scan: need replicas >= 100");
    if (workers <= 0) workers = default_workers();
    Report report;
    report.echo("experiment: urn-stats");
    report.echo("variant: " + to_string(variant) + ", weight: " + w.describe() +
                ", sampler: " + std::string(sampler == UrnSampler::Direct ? "direct" : "rubin"));
    report.echo("seed: " + std::to_string(seed));
    const auto targets = polynomial_urn_targets(w.alpha_or_zero());

    struct Rec {
        double d_tau = 0.0;
        double drift_acc = 0.0;
        double d_increment = 0.0;  // D_{tau_2n} - D_{tau_n}
    };

    for (std::size_t k = 0; k < n_values.size(); ++k) {
        const std::uint64_t n = n_values[k];
        auto batch = replicate<Rec>(
            replicas, seed, /*salt=*/0x75AB00 + k, workers, [&](std::size_t, Rng& rng) {
                Rec rec;
                if (sampler == UrnSampler::Direct) {
                    UrnProcess urn(variant, w);
                    auto stop = run_to_blue_count(urn, n, rng);
                    rec.d_tau = static_cast<double>(stop.discrepancy_at_tau);
                    rec.drift_acc = stop.drift_acc;
                    if (with_increment) {
                        auto stop2 = run_to_blue_count(urn, 2 * n, rng);
                        rec.d_increment =
                            static_cast<double>(stop2.discrepancy_at_tau - stop.discrepancy_at_tau);
                    }
                } else {
                    auto stop = rubin_sample(variant, w, n, rng);
                    rec.d_tau = static_cast<double>(stop.discrepancy_at_tau);
                    rec.drift_acc = rec.d_tau;  // no accumulator on the mark route
                }
                return rec;
            });
        require_failure_rate(batch.failures, replicas, 0.05, "moment_scan");
        report.replicas += replicas;
        report.failures += batch.failures;
        report.wall_seconds += batch.wall_seconds;

        const auto d = collect(batch, [](const Rec& r) { return r.d_tau; });
        const auto acc = collect(batch, [](const Rec& r) { return r.drift_acc; });
        const auto md = moments(d);
        const auto ma = moments(acc);
        const double nn = static_cast<double>(n);

        report.rows.push_back({"mean_D", nn, ma.mean, ma.se_mean, targets.mean, std::nullopt,
                               std::abs(ma.mean - targets.mean) <= 4 * ma.se_mean + 0.02
                                   ? "pass" : "fail"});
        report.rows.push_back({"mean_D_raw", nn, md.mean, md.se_mean, targets.mean, std::nullopt,
                               "info"});
        const double var_norm = md.var / (2.0 * nn);
        report.rows.push_back({"var_D_over_2n", nn, var_norm, md.se_var / (2.0 * nn),
                               targets.var_over_2n, std::nullopt,
                               std::abs(var_norm - targets.var_over_2n) <=
                                       0.05 * targets.var_over_2n + 2 * md.se_var / (2.0 * nn)
                                   ? "pass" : "fail"});
        if (with_increment && sampler == UrnSampler::Direct) {
            const auto inc = collect(batch, [](const Rec& r) { return r.d_increment; });
            const auto mi = moments(inc);
            report.rows.push_back({"var_D_increment", nn, mi.var, mi.se_var, 2.0 * nn,
                                   std::nullopt, "info"});
        }
    }
    return report;
}

}  // namespace sirw
