#pragma once
// Nearest-neighbor self-interacting walk on Z. From site x the walk steps to
// x+1 with probability w(r_x)/(w(r_x)+w(l_x)) where r_x and l_x count the
// undirected crossings of the bonds {x,x+1} and {x-1,x} so far. Bookkeeping
// covers directed edge crossings E/D, site visit counts L, running extrema,
// and the Doob decomposition X = M + Gamma with per-site drift accumulators.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "sirw/replicate.hpp"
#include "sirw/rng.hpp"
#include "sirw/weights.hpp"

namespace sirw {

// Dense array indexed by x in Z, growable on both sides.
template <class T>
class TwoSided {
  public:
    T get(std::int64_t x) const {
        if (x >= 0)
            return static_cast<std::size_t>(x) < pos_.size() ? pos_[static_cast<std::size_t>(x)]
                                                             : T{};
        const std::size_t i = static_cast<std::size_t>(-1 - x);
        return i < neg_.size() ? neg_[i] : T{};
    }

    T& at(std::int64_t x) {
        if (x >= 0) {
            const auto i = static_cast<std::size_t>(x);
            if (i >= pos_.size()) pos_.resize(i + 1, T{});
            return pos_[i];
        }
        const auto i = static_cast<std::size_t>(-1 - x);
        if (i >= neg_.size()) neg_.resize(i + 1, T{});
        return neg_[i];
    }

    std::int64_t lo() const { return -static_cast<std::int64_t>(neg_.size()); }
    std::int64_t hi() const { return static_cast<std::int64_t>(pos_.size()); }

  private:
    std::vector<T> pos_;
    std::vector<T> neg_;
};

inline constexpr std::int64_t kDefaultRangeGuard = 10'000'000;
inline constexpr std::uint64_t kDefaultStepBudget = 10'000'000'000ULL;

class Walk {
  public:
    Walk(const WeightFn& w, std::uint64_t seed) : Walk(w, Rng(seed)) {}

    Walk(const WeightFn& w, Rng rng) : w_(w), rng_(rng) {
        lsite_.at(0) = 1;  // L(0,0) = 1: the walk starts at the origin
    }

    std::int64_t position() const { return x_; }
    std::uint64_t steps() const { return i_; }
    std::int64_t running_min() const { return min_; }
    std::int64_t running_max() const { return max_; }
    const WeightFn& weight() const { return w_; }

    std::uint64_t upcrossings(std::int64_t x) const { return eup_.get(x); }
    std::uint64_t downcrossings(std::int64_t x) const { return ddown_.get(x); }
    std::uint64_t bond_crossings(std::int64_t x) const { return cross_.get(x); }
    std::uint64_t site_visits(std::int64_t x) const { return lsite_.get(x); }

    double right_probability() const {
        return jump_probability(w_, cross_.get(x_), cross_.get(x_ - 1));
    }

    // Conditional one-step drift E[X_{i+1} - X_i | history] at the current state.
    double drift() const { return 2.0 * right_probability() - 1.0; }

    // One jump; returns +1 or -1.
    int step() {
        const double p_right = right_probability();
        int jump;
        if (rng_.bernoulli(p_right)) {
            eup_.at(x_) += 1;
            cross_.at(x_) += 1;
            ++x_;
            jump = +1;
        } else {
            ddown_.at(x_) += 1;
            cross_.at(x_ - 1) += 1;
            --x_;
            jump = -1;
        }
        if (x_ > max_) max_ = x_;
        if (x_ < min_) min_ = x_;
        if (x_ > kDefaultRangeGuard || x_ < -kDefaultRangeGuard)
            throw ReplicaError("walk: range guard exceeded");
        lsite_.at(x_) += 1;
        ++i_;
        return jump;
    }

    // Advance until the up-crossing count of the bond {0,1} exceeds ell; the
    // stopping step completes a jump from 0 to 1.
    void run_until_upcrossings(std::uint64_t ell, std::uint64_t budget = kDefaultStepBudget) {
        while (eup_.get(0) <= ell) {
            if (i_ >= budget) throw ReplicaError("walk: step budget exceeded");
            step();
        }
    }

    // Advance until site z has been visited m times (time 0 counts).
    void run_until_visits(std::int64_t z, std::uint64_t m,
                          std::uint64_t budget = kDefaultStepBudget) {
        if (m < 1) throw std::invalid_argument("run_until_visits: m must be >= 1");
        while (lsite_.get(z) < m) {
            if (i_ >= budget) throw ReplicaError("walk: step budget exceeded");
            step();
        }
    }

    Rng& rng() { return rng_; }

  private:
    WeightFn w_;
    Rng rng_;
    std::int64_t x_ = 0;
    std::uint64_t i_ = 0;
    std::int64_t min_ = 0;
    std::int64_t max_ = 0;
    TwoSided<std::uint64_t> eup_;    // E(x): jumps x -> x+1
    TwoSided<std::uint64_t> ddown_;  // D(x): jumps x -> x-1
    TwoSided<std::uint64_t> cross_;  // E(x) + D(x+1), undirected bond count
    TwoSided<std::uint64_t> lsite_;  // visits including time 0
};

// A walk run with the martingale decomposition X = M + Gamma recorded, the
// accumulated drift split by site, and dyadic per-visit drift snapshots.
struct Trajectory {
    std::vector<std::int32_t> positions;  // X_0 .. X_n
    std::vector<double> gamma;            // Gamma_0 .. Gamma_n
    TwoSided<double> delta;               // per-site signed accumulated drift
    TwoSided<double> delta_abs;           // per-site accumulated |drift|
    // delta value frozen after visit counts 1, 2, 4, 8, ... per site
    std::map<std::int64_t, std::vector<double>> delta_dyadic;

    double martingale(std::size_t k) const {
        return static_cast<double>(positions[k]) - gamma[k];
    }
};

inline Trajectory run_for_steps(Walk& walk, std::uint64_t n, bool dyadic_snapshots = false) {
    if (n < 1) throw std::invalid_argument("run_for_steps: n must be >= 1");
    Trajectory traj;
    traj.positions.reserve(n + 1);
    traj.gamma.reserve(n + 1);
    traj.positions.push_back(static_cast<std::int32_t>(walk.position()));
    traj.gamma.push_back(0.0);
    double gamma = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        const std::int64_t x = walk.position();
        const double d = walk.drift();
        gamma += d;
        traj.delta.at(x) += d;
        traj.delta_abs.at(x) += std::abs(d);
        if (dyadic_snapshots) {
            const std::uint64_t visits = walk.site_visits(x);
            if ((visits & (visits - 1)) == 0)  // power of two
                traj.delta_dyadic[x].push_back(traj.delta.at(x));
        }
        walk.step();
        traj.positions.push_back(static_cast<std::int32_t>(walk.position()));
        traj.gamma.push_back(gamma);
    }
    return traj;
}

// sup over k <= n of the number of sites in [min, max] at time k-1 whose
// visit count is still <= M. Replays the recorded positions.
inline std::uint64_t rare_site_count(const Trajectory& traj, std::uint64_t M) {
    if (traj.positions.empty()) throw std::invalid_argument("rare_site_count: empty trajectory");
    TwoSided<std::uint64_t> visits;
    visits.at(0) = 1;
    std::uint64_t rare = (M >= 1) ? 1 : 0;  // site 0, visited once at time 0
    std::uint64_t best = 0;
    std::int64_t lo = 0, hi = 0;
    // the k-th term of the sup looks at the range and visit counts at time k-1
    for (std::size_t k = 1; k < traj.positions.size(); ++k) {
        if (rare > best) best = rare;
        const std::int64_t x = traj.positions[k];
        if (x > hi) {
            hi = x;
            ++rare;  // fresh site enters the range with 0 visits
        }
        if (x < lo) {
            lo = x;
            ++rare;
        }
        auto& v = visits.at(x);
        v += 1;
        if (v == M + 1) --rare;  // site leaves the rare set
    }
    return best;
}

// Exact structural identity checks used by the property suites.
struct WalkIdentityReport {
    bool crossing_conservation = true;  // sum of E + D over all edges == steps
    bool net_flow = true;               // E(x) - D(x+1) == walker-position indicator
    bool site_identity = true;          // L(x, i-1) from the edge profile
};

inline WalkIdentityReport check_walk_identities(const Walk& walk) {
    WalkIdentityReport rep;
    const std::int64_t lo = walk.running_min() - 1, hi = walk.running_max() + 1;
    std::uint64_t total = 0;
    for (std::int64_t x = lo; x <= hi; ++x)
        total += walk.upcrossings(x) + walk.downcrossings(x);
    rep.crossing_conservation = (total == walk.steps());
    const std::int64_t X = walk.position();
    for (std::int64_t x = lo; x <= hi; ++x) {
        const std::int64_t net = static_cast<std::int64_t>(walk.upcrossings(x)) -
                                 static_cast<std::int64_t>(walk.downcrossings(x + 1));
        const std::int64_t want = (0 <= x && x < X) ? 1 : ((X <= x && x < 0) ? -1 : 0);
        if (net != want) rep.net_flow = false;
        // L(x, i-1) = E^i(x-1) + E^i(x) + 1{X_i < x <= 0} - 1{0 < x <= X_i}
        const std::int64_t lhs = static_cast<std::int64_t>(walk.site_visits(x)) - (X == x ? 1 : 0);
        const std::int64_t rhs = static_cast<std::int64_t>(walk.upcrossings(x - 1)) +
                                 static_cast<std::int64_t>(walk.upcrossings(x)) +
                                 ((X < x && x <= 0) ? 1 : 0) - ((0 < x && x <= X) ? 1 : 0);
        if (lhs != rhs) rep.site_identity = false;
    }
    return rep;
}

}  // namespace sirw
