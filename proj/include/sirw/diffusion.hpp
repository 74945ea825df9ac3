#pragma once
// Reference continuous processes: the scaled squared Bessel process
// Z^(alpha,delta) solving
//   dZ = delta/(2(2a+1)) dx + sqrt(2 Z / (2a+1)) dB,   absorbed at 0 when
// delta = 0, extremum-perturbed Brownian motion W = B + th+ sup W + th- inf W,
// the perturbed (pq) walk whose diffusive limit it is, half local times,
// inverse local times, and the occupation functional built from them.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sirw/rng.hpp"

namespace sirw {

struct DiffusionPath {
    double dt = 0.0;
    std::vector<double> values;            // value at grid time k*dt
    std::optional<double> absorbed_at;     // delta = 0 paths freeze here
    std::vector<double> running_max;       // filled by the perturbed samplers
    std::vector<double> running_min;
    std::vector<double> noise_acc;         // accumulated Brownian increments

    double horizon() const { return dt * static_cast<double>(values.size() - 1); }

    double at_time(double t) const {
        const auto k = static_cast<std::size_t>(t / dt);
        return values[k < values.size() ? k : values.size() - 1];
    }
};

struct BesqParams {
    double alpha = 0.0;   // >= 0
    double delta = 0.0;   // generalized dimension
    double start = 0.0;   // >= 0
    double step = 1e-4;
    double horizon = 1.0;
};

inline void validate(const BesqParams& p) {
    if (!(p.step > 0.0)) throw std::invalid_argument("besq: step must be > 0");
    if (!(p.alpha >= 0.0) || !(p.start >= 0.0))
        throw std::invalid_argument("besq: alpha and start must be >= 0");
    if (!(p.step <= p.horizon / 100.0)) throw std::invalid_argument("besq: step too coarse");
}

// Full-truncation Euler scheme; for delta = 0 the path is frozen at the
// first nonpositive value, matching absorption at 0.
inline DiffusionPath sample_besq(const BesqParams& p, Rng& rng) {
    validate(p);
    const auto steps = static_cast<std::size_t>(std::llround(p.horizon / p.step));
    DiffusionPath path;
    path.dt = p.step;
    path.values.reserve(steps + 1);
    const double drift = p.delta / (2.0 * (2.0 * p.alpha + 1.0));
    const double diff_scale = std::sqrt(p.step * 2.0 / (2.0 * p.alpha + 1.0));
    double z = p.start;
    bool absorbed = (p.delta == 0.0 && z <= 0.0);
    if (absorbed) path.absorbed_at = 0.0;
    path.values.push_back(std::max(z, 0.0));
    for (std::size_t k = 0; k < steps; ++k) {
        if (absorbed) {
            path.values.push_back(0.0);
            continue;
        }
        z += drift * p.step + std::sqrt(std::max(z, 0.0)) * diff_scale * rng.normal();
        if (z <= 0.0) {
            if (p.delta == 0.0) {
                absorbed = true;
                path.absorbed_at = static_cast<double>(k + 1) * p.step;
            }
            z = 0.0;
        }
        path.values.push_back(z);
    }
    return path;
}

// Closed-form moments of the integral of an absorbed Z^(alpha,0) over [0,y]:
// mean y*s and variance 2 y^3 s / (3 (1+2 alpha)).
struct IntegralMoments {
    double mean = 0.0;
    double variance = 0.0;
};

inline IntegralMoments besq_integral_moments(double alpha, double start, double y) {
    if (!(alpha >= 0.0) || !(start >= 0.0) || !(y >= 0.0))
        throw std::invalid_argument("besq_integral_moments: negative argument");
    return {y * start, 2.0 * y * y * y * start / (3.0 * (1.0 + 2.0 * alpha))};
}

struct BmpeParams {
    double theta_plus = 0.0;   // < 1
    double theta_minus = 0.0;  // < 1
    double alpha_scale = 0.0;  // Brownian increments scaled by sqrt(2 alpha + 1)
    double step = 1e-4;
    double horizon = 1.0;
};

// Explicit scheme for W = B + th+ sup W + th- inf W. When the driven
// candidate exits the running range, the one-step fixed point moves the
// extremum by overshoot/(1-theta); this is the unique value solving the
// defining equation across the step when only that extremum moves.
inline DiffusionPath sample_bmpe(const BmpeParams& p, Rng& rng) {
    if (!(p.theta_plus < 1.0) || !(p.theta_minus < 1.0))
        throw std::invalid_argument("bmpe: theta must be < 1");
    if (!(p.step > 0.0)) throw std::invalid_argument("bmpe: step must be > 0");
    const auto steps = static_cast<std::size_t>(std::llround(p.horizon / p.step));
    const double sigma = std::sqrt((2.0 * p.alpha_scale + 1.0) * p.step);
    DiffusionPath path;
    path.dt = p.step;
    path.values.reserve(steps + 1);
    path.running_max.reserve(steps + 1);
    path.running_min.reserve(steps + 1);
    path.noise_acc.reserve(steps + 1);
    double w = 0.0, smax = 0.0, imin = 0.0, b = 0.0;
    path.values.push_back(w);
    path.running_max.push_back(smax);
    path.running_min.push_back(imin);
    path.noise_acc.push_back(b);
    for (std::size_t k = 0; k < steps; ++k) {
        const double db = sigma * rng.normal();
        b += db;
        const double cand = w + db;
        if (cand > smax && cand < imin)
            throw std::runtime_error("bmpe: step too coarse, both extrema moved");
        if (cand > smax) {
            smax += (cand - smax) / (1.0 - p.theta_plus);
            w = smax;
        } else if (cand < imin) {
            imin += (cand - imin) / (1.0 - p.theta_minus);
            w = imin;
        } else {
            w = cand;
        }
        path.values.push_back(w);
        path.running_max.push_back(smax);
        path.running_min.push_back(imin);
        path.noise_acc.push_back(b);
    }
    return path;
}

// Perturbed (pq) walk: unbiased except at the running extrema, where the
// right-jump probability is 1/(2-theta) at the maximum and 1 - 1/(2-theta)
// at the minimum; the first jump is unbiased. Returns the diffusively
// rescaled path X_{floor(nt)}/sqrt(n) on [0,1].
inline DiffusionPath sample_pq_walk(double theta, std::uint64_t n, Rng& rng) {
    if (!(theta < 1.0)) throw std::invalid_argument("pq walk: theta must be < 1");
    if (n < 1) throw std::invalid_argument("pq walk: n must be >= 1");
    const double p_max = 1.0 / (2.0 - theta);
    const double p_min = 1.0 - p_max;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    DiffusionPath path;
    path.dt = 1.0 / static_cast<double>(n);
    path.values.reserve(n + 1);
    path.running_max.reserve(n + 1);
    path.running_min.reserve(n + 1);
    std::int64_t y = 0, smax = 0, imin = 0;
    path.values.push_back(0.0);
    path.running_max.push_back(0.0);
    path.running_min.push_back(0.0);
    for (std::uint64_t k = 0; k < n; ++k) {
        double p_right = 0.5;
        if (k > 0) {
            if (y == smax) p_right = p_max;
            else if (y == imin) p_right = p_min;
        }
        y += rng.bernoulli(p_right) ? 1 : -1;
        if (y > smax) smax = y;
        if (y < imin) imin = y;
        path.values.push_back(static_cast<double>(y) * scale);
        path.running_max.push_back(static_cast<double>(smax) * scale);
        path.running_min.push_back(static_cast<double>(imin) * scale);
    }
    return path;
}

// (1/(2 eps)) * time spent in [x, x+eps]; grid occupation times dt.
inline double half_local_time(const DiffusionPath& path, double x, double eps,
                              bool* resolution_ok = nullptr) {
    if (!(eps > 0.0)) throw std::invalid_argument("half_local_time: eps must be > 0");
    if (resolution_ok) *resolution_ok = eps >= 10.0 * std::sqrt(path.dt);
    std::size_t count = 0;
    for (double v : path.values)
        if (v >= x && v <= x + eps) ++count;
    return static_cast<double>(count) * path.dt / (2.0 * eps);
}

// First grid time at which the running half-local-time estimate at 0
// (bandwidth eps) strictly exceeds ell; nullopt when the horizon ends first.
inline std::optional<double> inverse_local_time(const DiffusionPath& path, double ell,
                                                double eps) {
    if (!(ell >= 0.0)) throw std::invalid_argument("inverse_local_time: ell must be >= 0");
    const double threshold = 2.0 * eps * ell / path.dt;  // occupation count threshold
    std::size_t count = 0;
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        const double v = path.values[k];
        if (v >= 0.0 && v <= eps) {
            ++count;
            if (static_cast<double>(count) > threshold)
                return static_cast<double>(k) * path.dt;
        }
    }
    return std::nullopt;
}

// Occupation functional: T_{d,l} is the first time the (1/(2 delta))-scaled
// occupation of [0, delta] exceeds l; G is half the occupation of [0,1]
// between T_{d,M} and T_{d,M+1}.
struct OccupationRecord {
    double delta = 0.0;
    double m_level = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double g = 0.0;
    double g2_capped = 0.0;
    bool complete = false;  // false when the horizon ended before T_{d,M+1}
};

inline OccupationRecord occupation_functional(const DiffusionPath& path, double delta,
                                              double m_level, double cap) {
    if (!(delta > 0.0 && delta <= 0.5))
        throw std::invalid_argument("occupation_functional: delta must lie in (0, 1/2]");
    if (!(m_level >= 0.0) || !(cap > 0.0))
        throw std::invalid_argument("occupation_functional: bad M or cap");
    OccupationRecord rec;
    rec.delta = delta;
    rec.m_level = m_level;
    const double thresh_lo = 2.0 * delta * m_level / path.dt;
    const double thresh_hi = 2.0 * delta * (m_level + 1.0) / path.dt;
    std::size_t occ_delta = 0, occ_unit = 0;
    std::optional<std::size_t> unit_at_lo, unit_at_hi;
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        const double v = path.values[k];
        if (v >= 0.0 && v <= 1.0) ++occ_unit;
        if (v >= 0.0 && v <= delta) {
            ++occ_delta;
            if (!unit_at_lo && static_cast<double>(occ_delta) > thresh_lo) {
                unit_at_lo = occ_unit;
                rec.t_lo = static_cast<double>(k) * path.dt;
            }
            if (!unit_at_hi && static_cast<double>(occ_delta) > thresh_hi) {
                unit_at_hi = occ_unit;
                rec.t_hi = static_cast<double>(k) * path.dt;
                break;
            }
        }
    }
    if (unit_at_lo && unit_at_hi) {
        rec.complete = true;
        rec.g = 0.5 * static_cast<double>(*unit_at_hi - *unit_at_lo) * path.dt;
        rec.g2_capped = std::min(rec.g * rec.g, cap);
    }
    return rec;
}

}  // namespace sirw
