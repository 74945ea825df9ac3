#pragma once
// Windowed walk kernels with boundary excursion collapse.
//
// For observables that depend only on the walk inside a site window
// [lo, hi] (occupation counts of in-window sites, directed edge counts of
// in-window bonds, and stopping rules built from these), an excursion beyond
// a window edge can be collapsed into a single bounce: the walk is recurrent,
// so the excursion returns with probability one, it contributes exactly two
// crossings to the boundary bond and nothing to any in-window counter, and
// its internal randomness never feeds back into jump probabilities at
// in-window sites. Collapsing leaves the joint law of all in-window
// observables unchanged while removing the heavy-tailed excursion times.
//
// Two kernels: the self-interacting walk (jump law from bond crossing
// counts) and the perturbed walk (biased only at its running extrema), the
// latter serving as the diffusive-scale sampler for extremum-perturbed
// Brownian motion.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sirw/rng.hpp"
#include "sirw/weights.hpp"

namespace sirw {

class WindowSirw {
  public:
    WindowSirw(const WeightFn& w, std::int64_t lo, std::int64_t hi, Rng rng)
        : w_(w), rng_(rng), lo_(lo), hi_(hi), x_(0) {
        if (lo > 0 || hi < 1) throw std::invalid_argument("window must contain {0,1}");
        const std::size_t bonds = static_cast<std::size_t>(hi - lo + 2);
        cross_.assign(bonds, 0);   // bond {x,x+1} at index x - lo + 1, x in [lo-1, hi]
        eup_.assign(bonds, 0);     // E(x) at index x - lo + 1 (slot for x = lo-1 unused)
        w_.prefill(1024);
    }

    std::int64_t position() const { return x_; }
    std::uint64_t in_window_steps() const { return steps_; }

    std::uint64_t upcrossings(std::int64_t x) const { return eup_[bond_index(x)]; }
    std::uint64_t bond_crossings(std::int64_t x) const { return cross_[bond_index(x)]; }

    // E(x) for x in [lo, hi] copied out in site order.
    std::vector<std::uint64_t> upcrossing_profile() const {
        return {eup_.begin() + 1, eup_.end()};
    }

    // One in-window decision. Jumps beyond an edge bounce: the walker stays
    // put and the boundary bond count advances by two.
    void step() {
        const std::size_t b = bond_index(x_);
        const double wr = w_(cross_[b]);
        const double wl = w_(cross_[b - 1]);
        if (rng_.uniform() * (wr + wl) < wr) {
            eup_[b] += 1;
            if (x_ == hi_) {
                cross_[b] += 2;  // excursion above returns through the same bond
            } else {
                cross_[b] += 1;
                ++x_;
            }
        } else {
            if (x_ == lo_) {
                cross_[b - 1] += 2;  // excursion below collapsed
            } else {
                cross_[b - 1] += 1;
                --x_;
            }
        }
        ++steps_;
    }

    Rng& rng() { return rng_; }

  private:
    std::size_t bond_index(std::int64_t x) const {
        return static_cast<std::size_t>(x - lo_ + 1);
    }

    WeightFn w_;
    Rng rng_;
    std::int64_t lo_, hi_, x_;
    std::uint64_t steps_ = 0;
    std::vector<std::uint64_t> cross_;
    std::vector<std::uint64_t> eup_;
};

// Perturbed walk on [0, hi]: unbiased except at its running extrema, where
// the right-jump probability is 1/(2-theta) at the maximum and
// 1 - 1/(2-theta) at the minimum. Once an extremum leaves the window the
// corresponding perturbation can never trigger inside it again, so bounces
// need only remember that fact.
class WindowPq {
  public:
    WindowPq(double theta, std::int64_t hi, Rng rng)
        : rng_(rng), hi_(hi), p_max_(1.0 / (2.0 - theta)), p_min_(1.0 - 1.0 / (2.0 - theta)) {
        if (!(theta < 1.0)) throw std::invalid_argument("perturbed walk: theta must be < 1");
        if (hi < 1) throw std::invalid_argument("perturbed walk: window too small");
    }

    std::int64_t position() const { return y_; }
    std::uint64_t in_window_steps() const { return steps_; }

    void step() {
        double p_right = 0.5;
        if (steps_ == 0) {
            p_right = 0.5;  // first jump from the origin is unbiased
        } else if (!max_escaped_ && y_ == smax_) {
            p_right = p_max_;
        } else if (!min_escaped_ && y_ == imin_) {
            p_right = p_min_;
        }
        if (rng_.bernoulli(p_right)) {
            if (y_ == hi_) {
                max_escaped_ = true;  // walker can only be at hi at its maximum
            } else {
                ++y_;
                if (!max_escaped_ && y_ > smax_) smax_ = y_;
            }
        } else {
            if (y_ == 0) {
                min_escaped_ = true;
            } else {
                --y_;
                if (!min_escaped_ && y_ < imin_) imin_ = y_;
            }
        }
        ++steps_;
    }

    Rng& rng() { return rng_; }

  private:
    Rng rng_;
    std::int64_t hi_;
    double p_max_, p_min_;
    std::int64_t y_ = 0, smax_ = 0, imin_ = 0;
    std::uint64_t steps_ = 0;
    bool max_escaped_ = false, min_escaped_ = false;
};

}  // namespace sirw
