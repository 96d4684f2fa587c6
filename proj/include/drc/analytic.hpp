// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "drc/errors.hpp"

namespace drc {

// Exact non-negative rational, always stored in lowest terms.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
        if (den_ == 0) throw DomainError("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const auto g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b) { return a.num_ * b.den_ < b.num_ * a.den_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Rational operator/(const Rational& a, const Rational& b) { return {a.num_ * b.den_, a.den_ * b.num_}; }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

enum class CodeKind { RS, MSR, DRC };

inline const char* kind_name(CodeKind k) { return k == CodeKind::RS ? "RS" : k == CodeKind::MSR ? "MSR" : "DRC"; }

inline void check_traffic_params(std::size_t n, std::size_t k, std::size_t r) {
    if (n < 2 || k < 1 || k >= n) throw ParameterError("need 1 <= k < n");
    if (r < 1 || r > n || n % r != 0) throw ParameterError("r must divide n");
    if (r < n && (n / r > k || n / r > n - k))
        throw ParameterError("hierarchical placement needs n/r <= k and n/r <= n-k");
}

// Cross-rack repair traffic for one lost block, in units of the block size.
// r = n is flat placement, r < n hierarchical.
inline Rational analytic_cross_rack_traffic(CodeKind kind, std::size_t n, std::size_t k, std::size_t r) {
    check_traffic_params(n, k, r);
    const auto N = static_cast<std::int64_t>(n), K = static_cast<std::int64_t>(k), R = static_cast<std::int64_t>(r);
    switch (kind) {
        case CodeKind::RS: return r == n ? Rational(K) : Rational(K - (N / R - 1));
        case CodeKind::MSR: return r == n ? Rational(N - 1, N - K) : Rational(N - N / R, N - K);
        case CodeKind::DRC: return {R - 1, R - (K * R) / N};
    }
    throw ParameterError("unknown code kind");
}

// At r = n/(n-k) each rack holds n-k blocks and the minimum cross-rack
// traffic is (r-1) blocks. True when the hierarchical MSR value and the
// lower bound both equal r-1.
inline bool verify_theorem1(std::size_t n, std::size_t k) {
    if (k < 1 || k >= n || n % (n - k) != 0) throw ParameterError("n must be divisible by n-k");
    const std::size_t r = n / (n - k);
    const Rational target(static_cast<std::int64_t>(r - 1));
    return analytic_cross_rack_traffic(CodeKind::MSR, n, k, r) == target &&
           analytic_cross_rack_traffic(CodeKind::DRC, n, k, r) == target;
}

}  // namespace drc
