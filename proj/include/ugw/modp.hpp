#pragma once

// Arithmetic modulo 61-bit primes: Montgomery products, Miller-Rabin, and
// random prime selection.

#include <array>
#include <cstdint>

#include "ugw/rng.hpp"

namespace ugw::modp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) noexcept { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) noexcept {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Deterministic for all 64-bit inputs with the first twelve prime bases.
inline bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    constexpr std::array<u64, 12> bases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : bases) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : bases) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline constexpr u64 kPrimeLow = u64{1} << 60;
inline constexpr u64 kPrimeHigh = u64{1} << 61;

/// Uniform prime in [2^60, 2^61) by rejection on uniform odd candidates.
inline u64 random_prime(Stream& rng) {
    for (;;) {
        const u64 candidate = (kPrimeLow + rng.below(kPrimeHigh - kPrimeLow)) | 1;
        if (is_prime(candidate)) return candidate;
    }
}

/// Montgomery multiplication with R = 2^64 for an odd modulus below 2^63.
class Montgomery {
public:
    explicit Montgomery(u64 modulus) noexcept : m_(modulus), neg_inv_(0) {
        u64 inv = modulus;  // Newton iteration for modulus^{-1} mod 2^64
        for (int i = 0; i < 6; ++i) inv *= 2 - modulus * inv;
        neg_inv_ = ~inv + 1;
    }

    u64 modulus() const noexcept { return m_; }

    /// a * b * R^{-1} mod m, for a, b < m.
    u64 mul(u64 a, u64 b) const noexcept {
        const u128 t = static_cast<u128>(a) * b;
        const u64 k = static_cast<u64>(t) * neg_inv_;
        const u64 u = static_cast<u64>((t + static_cast<u128>(k) * m_) >> 64);
        return u >= m_ ? u - m_ : u;
    }

    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + m_ - b; }

private:
    u64 m_;
    u64 neg_inv_;
};

}  // namespace ugw::modp
