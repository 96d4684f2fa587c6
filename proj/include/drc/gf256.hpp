// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "drc/errors.hpp"

// Arithmetic in GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x^2 + 1.
namespace drc::gf {

inline constexpr unsigned kPolynomial = 0x11D;

class Element {
public:
    constexpr Element() = default;
    constexpr explicit Element(std::uint8_t v) : v_(v) {}

    constexpr std::uint8_t value() const { return v_; }
    constexpr bool is_zero() const { return v_ == 0; }

    friend constexpr Element operator+(Element a, Element b) {
        return Element(static_cast<std::uint8_t>(a.v_ ^ b.v_));
    }
    friend constexpr Element operator-(Element a, Element b) { return a + b; }
    constexpr Element& operator+=(Element o) {
        v_ ^= o.v_;
        return *this;
    }
    constexpr Element& operator-=(Element o) { return *this += o; }
    friend constexpr bool operator==(Element, Element) = default;

    friend Element operator*(Element a, Element b);
    friend Element operator/(Element a, Element b);
    Element& operator*=(Element o);

private:
    std::uint8_t v_ = 0;
};

inline constexpr Element kZero{0};
inline constexpr Element kOne{1};

namespace detail {

struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<int, 256> log{};
    std::array<std::array<std::uint8_t, 256>, 256> mul{};
    std::array<std::uint8_t, 256> inv{};
};

// 0x02 generates the multiplicative group for this polynomial.
inline Tables build_tables() {
    Tables t;
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
        t.log[x] = i;
        x <<= 1;
        if (x & 0x100U) x ^= kPolynomial;
    }
    for (int i = 255; i < 512; ++i) t.exp[static_cast<std::size_t>(i)] = t.exp[static_cast<std::size_t>(i - 255)];
    t.log[0] = -1;
    for (unsigned a = 1; a < 256; ++a) {
        for (unsigned b = 1; b < 256; ++b) {
            t.mul[a][b] = t.exp[static_cast<std::size_t>(t.log[a] + t.log[b])];
        }
        t.inv[a] = t.exp[static_cast<std::size_t>(255 - t.log[a])];
    }
    return t;
}

inline const Tables& tables() {
    static const Tables t = build_tables();
    return t;
}

}  // namespace detail

inline Element mul(Element a, Element b) { return Element(detail::tables().mul[a.value()][b.value()]); }

inline Element inv(Element a) {
    if (a.is_zero()) throw DomainError("zero has no multiplicative inverse in GF(256)");
    return Element(detail::tables().inv[a.value()]);
}

inline Element div(Element a, Element b) { return mul(a, inv(b)); }

// a^e for e >= 0; 0^0 is 1.
inline Element pow(Element a, unsigned e) {
    if (e == 0) return kOne;
    if (a.is_zero()) return kZero;
    const auto& t = detail::tables();
    return Element(t.exp[static_cast<std::size_t>((static_cast<unsigned long>(t.log[a.value()]) * e) % 255)]);
}

inline Element operator*(Element a, Element b) { return mul(a, b); }
inline Element operator/(Element a, Element b) { return div(a, b); }
inline Element& Element::operator*=(Element o) { return *this = mul(*this, o); }

// dst[i] ^= c * src[i]. The spans must have equal length.
inline void mul_add_region(Element c, std::span<const std::uint8_t> src, std::span<std::uint8_t> dst) {
    if (c.is_zero()) return;
    const std::size_t len = src.size() < dst.size() ? src.size() : dst.size();
    if (c == kOne) {
        for (std::size_t i = 0; i < len; ++i) dst[i] ^= src[i];
        return;
    }
    const auto& row = detail::tables().mul[c.value()];
    for (std::size_t i = 0; i < len; ++i) dst[i] ^= row[src[i]];
}

}  // namespace drc::gf
