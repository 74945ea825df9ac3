#pragma once
// Weight functions w : N0 -> (0, inf) driving the self-interacting walk and
// the generalized Polya urns, plus the derived partial sums U1, V1 and the
// limit gamma = lim (V1(n) - U1(n)) that identifies the diffusive limit.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sirw {

enum class WeightKind { Constant, PqStyle, AsymptoticallyFree, Polynomial };

// Value type; copy per worker or pre-fill the memo before sharing read-only.
class WeightFn {
  public:
    static WeightFn constant(double value) {
        if (!(value > 0.0)) throw std::invalid_argument("weight: constant value must be > 0");
        WeightFn w;
        w.kind_ = WeightKind::Constant;
        w.value_ = value;
        return w;
    }

    // w(0) = w0, w(n) = 1 for n >= 1. Closed-form gamma: 1 - 1/w0.
    static WeightFn pq_style(double w0) {
        if (!(w0 > 0.0)) throw std::invalid_argument("weight: pq w0 must be > 0");
        WeightFn w;
        w.kind_ = WeightKind::PqStyle;
        w.value_ = w0;
        return w;
    }

    // 1/w(n) = 1 + 2^p B / n^p for n >= 1 outside the override table,
    // w(0) = 1 unless overridden. Requires p in (1/2, 1] and positivity.
    static WeightFn asymptotically_free(double p, double B, double kappa,
                                        std::map<std::uint64_t, double> overrides = {}) {
        if (!(p > 0.5) || !(p <= 1.0))
            throw std::invalid_argument("weight: af p must lie in (1/2, 1]");
        if (!(kappa > 0.0)) throw std::invalid_argument("weight: af kappa must be > 0");
        for (const auto& [n, v] : overrides)
            if (!(v > 0.0)) throw std::invalid_argument("weight: af override values must be > 0");
        WeightFn w;
        w.kind_ = WeightKind::AsymptoticallyFree;
        w.p_ = p;
        w.B_ = B;
        w.kappa_ = kappa;
        w.overrides_ = std::move(overrides);
        // Positivity of 1 + 2^p B n^-p for every non-overridden n >= 1;
        // the worst case is the smallest such n.
        for (std::uint64_t n = 1; n <= 1 + w.overrides_.size(); ++n) {
            if (w.overrides_.count(n)) continue;
            if (!(1.0 + std::pow(2.0, p) * B / std::pow(static_cast<double>(n), p) > 0.0))
                throw std::invalid_argument("weight: af parameters give w(n) <= 0");
            break;
        }
        return w;
    }

    // w(n) = (n+1)^(-alpha), the polynomially self-repelling family.
    static WeightFn polynomial(double alpha) {
        if (!(alpha > 0.0)) throw std::invalid_argument("weight: polynomial alpha must be > 0");
        WeightFn w;
        w.kind_ = WeightKind::Polynomial;
        w.alpha_ = alpha;
        return w;
    }

    WeightKind kind() const { return kind_; }
    double alpha() const { return alpha_; }

    // alpha of the self-repulsion exponent; 0 for the asymptotically free kinds.
    double alpha_or_zero() const { return kind_ == WeightKind::Polynomial ? alpha_ : 0.0; }

    double operator()(std::uint64_t n) const {
        if (n < memo_.size()) return memo_[n];
        extend(n);
        return memo_[n];
    }

    double inv(std::uint64_t n) const { return 1.0 / (*this)(n); }

    // Fill the memo up to horizon so concurrent readers never mutate.
    void prefill(std::uint64_t horizon) const { extend(horizon); }

    std::string describe() const {
        std::ostringstream os;
        switch (kind_) {
            case WeightKind::Constant: os << "constant(" << value_ << ")"; break;
            case WeightKind::PqStyle: os << "pq(w0=" << value_ << ")"; break;
            case WeightKind::Polynomial: os << "polynomial(alpha=" << alpha_ << ")"; break;
            case WeightKind::AsymptoticallyFree:
                os << "af(p=" << p_ << ",B=" << B_ << ",kappa=" << kappa_ << ")";
                break;
        }
        return os.str();
    }

  private:
    WeightFn() = default;

    double eval(std::uint64_t n) const {
        switch (kind_) {
            case WeightKind::Constant: return value_;
            case WeightKind::PqStyle: return n == 0 ? value_ : 1.0;
            case WeightKind::Polynomial:
                return std::pow(static_cast<double>(n) + 1.0, -alpha_);
            case WeightKind::AsymptoticallyFree: {
                if (auto it = overrides_.find(n); it != overrides_.end()) return it->second;
                if (n == 0) return 1.0;
                const double inv =
                    1.0 + std::pow(2.0, p_) * B_ / std::pow(static_cast<double>(n), p_);
                if (!(inv > 0.0)) throw std::domain_error("weight: af w(n) <= 0");
                return 1.0 / inv;
            }
        }
        throw std::logic_error("weight: bad kind");
    }

    void extend(std::uint64_t n) const {
        memo_.reserve(n + 1);
        for (std::uint64_t k = memo_.size(); k <= n; ++k) memo_.push_back(eval(k));
    }

    WeightKind kind_ = WeightKind::Constant;
    double value_ = 1.0;   // Constant value or PqStyle w0
    double alpha_ = 0.0;   // Polynomial exponent
    double p_ = 1.0, B_ = 0.0, kappa_ = 1.0;
    std::map<std::uint64_t, double> overrides_;
    mutable std::vector<double> memo_;
};

// U1(n) = sum_{j<n} 1/w(2j), V1(n) = sum_{j<n} 1/w(2j+1).
struct PartialSums {
    double u1 = 0.0;
    double v1 = 0.0;
};

inline PartialSums partial_sums(const WeightFn& w, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("partial_sums: n must be >= 1");
    PartialSums s;
    for (std::uint64_t j = 0; j < n; ++j) {
        s.u1 += w.inv(2 * j);
        s.v1 += w.inv(2 * j + 1);
    }
    return s;
}

struct GammaEstimate {
    double value = 0.0;
    std::uint64_t horizon = 0;
    double residual = 0.0;  // |(V1-U1)(horizon) - (V1-U1)(horizon/2)|
    bool converged = true;
};

inline GammaEstimate gamma_limit(const WeightFn& w, std::uint64_t horizon, double tolerance) {
    if (w.kind() == WeightKind::Polynomial)
        throw std::invalid_argument("gamma_limit: diverges for polynomial weights");
    if (horizon < 2) throw std::invalid_argument("gamma_limit: horizon must be >= 2");
    const auto full = partial_sums(w, horizon);
    const auto half = partial_sums(w, horizon / 2);
    GammaEstimate g;
    g.horizon = horizon;
    g.value = full.v1 - full.u1;
    g.residual = std::abs(g.value - (half.v1 - half.u1));
    g.converged = g.residual <= tolerance;
    return g;
}

inline double jump_probability(const WeightFn& w, std::uint64_t r, std::uint64_t l) {
    const double wr = w(r), wl = w(l);
    return wr / (wr + wl);
}

// Text descriptor, e.g. "kind=polynomial,alpha=1.0" or
// "kind=af,p=1.0,B=0.5,kappa=1.0,overrides=0:2.0;1:1.5".
inline WeightFn parse_weight(const std::string& descriptor) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(descriptor);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("weight descriptor: expected key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument("weight descriptor: missing key '" + key + "'");
        return it->second;
    };
    const std::string kind = need("kind");
    auto num = [](const std::string& s) { return std::stod(s); };
    if (kind == "constant") return WeightFn::constant(num(need("value")));
    if (kind == "pq") return WeightFn::pq_style(num(need("w0")));
    if (kind == "polynomial") return WeightFn::polynomial(num(need("alpha")));
    if (kind == "af") {
        std::map<std::uint64_t, double> overrides;
        if (auto it = kv.find("overrides"); it != kv.end()) {
            std::stringstream os(it->second);
            std::string pair;
            while (std::getline(os, pair, ';')) {
                const auto colon = pair.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("weight descriptor: bad override '" + pair + "'");
                overrides[std::stoull(pair.substr(0, colon))] = num(pair.substr(colon + 1));
            }
        }
        return WeightFn::asymptotically_free(num(need("p")), num(need("B")), num(need("kappa")),
                                             std::move(overrides));
    }
    throw std::invalid_argument("weight descriptor: unknown kind '" + kind + "'");
}

}  // namespace sirw
