#pragma once
// Sample statistics, two-sample Kolmogorov-Smirnov distance, total variation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sirw {

struct Moments {
    std::size_t count = 0;
    double mean = 0.0;
    double var = 0.0;      // unbiased, (n-1) denominator
    double se_mean = 0.0;  // sqrt(var/n)
    double se_var = 0.0;   // kurtosis-aware standard error of the variance
    double m4 = 0.0;       // fourth central moment
};

inline Moments moments(std::span<const double> xs) {
    Moments m;
    m.count = xs.size();
    if (xs.empty()) return m;
    double sum = 0.0;
    for (double x : xs) sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return m;
    double s2 = 0.0, s4 = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        s2 += d * d;
        s4 += d * d * d * d;
    }
    const double n = static_cast<double>(xs.size());
    m.var = s2 / (n - 1.0);
    m.m4 = s4 / n;
    m.se_mean = std::sqrt(m.var / n);
    // Var(sample variance) = (m4 - var^2 (n-3)/(n-1)) / n
    const double vv = (m.m4 - m.var * m.var * (n - 3.0) / (n - 1.0)) / n;
    m.se_var = vv > 0.0 ? std::sqrt(vv) : 0.0;
    return m;
}

// Two-sample KS statistic: sup over pooled points of |ECDF_a - ECDF_b|.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// One-sample KS statistic against a continuous CDF.
template <class Cdf>
inline double ks_distance_cdf(std::vector<double> a, Cdf cdf) {
    if (a.empty()) throw std::invalid_argument("ks_distance_cdf: empty sample");
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Total variation distance between two finite laws on the same index set.
inline double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

inline double percentile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("percentile: empty sample");
    std::sort(xs.begin(), xs.end());
    const double pos = q * (static_cast<double>(xs.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

}  // namespace sirw
