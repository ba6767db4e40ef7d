#pragma once

// Counter-based random streams (Philox4x32-10).
//
// Every random draw in the library is a pure function of
// (seed, stream id, substream, position), so results never depend on
// scheduling or thread count.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ugw {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeylA;
                key[1] += kWeylB;
            }
            const std::uint64_t p0 = std::uint64_t{kMulA} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMulB} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMulA = 0xD2511F53u;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
};

/// Purpose tags keep streams used for different jobs disjoint.
enum class StreamTag : std::uint16_t {
    Generic = 0,
    StieltjesStep = 1,
    AlphaBetaStep = 2,
    JointStep = 3,
    RootPass = 4,
    Bootstrap = 5,
    Graph = 6,
    Prime = 7,
    BetaStar = 8,
};

/// A deterministic random stream. Satisfies UniformRandomBitGenerator
/// (32-bit output) so it can drive std::shuffle and friends, though the
/// library's own samplers only use the helpers below.
class Stream {
public:
    using result_type = std::uint32_t;

    Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t substream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, substream, static_cast<std::uint32_t>(stream_id),
               static_cast<std::uint32_t>(stream_id >> 32)} {}

    /// Stream for sample `index` of generation `generation` of a job tagged `tag`.
    static Stream keyed(std::uint64_t seed, StreamTag tag, std::uint64_t generation,
                        std::uint32_t index) noexcept {
        const std::uint64_t id = (std::uint64_t{static_cast<std::uint16_t>(tag)} << 48) |
                                 (generation & 0x0000FFFFFFFFFFFFull);
        return Stream(seed, id, index);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (lane_ == 4) {
            block_ = Philox4x32::apply(ctr_, key_);
            ++ctr_[0];
            lane_ = 0;
        }
        return block_[lane_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t hi = (*this)();
        return (hi << 32) | (*this)();
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe to take the logarithm of.
    double uniform_pos() noexcept { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    /// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= std::numeric_limits<std::uint32_t>::max()) {
            const auto b = static_cast<std::uint32_t>(bound);
            std::uint64_t m = std::uint64_t{(*this)()} * b;
            auto low = static_cast<std::uint32_t>(m);
            if (low < b) {
                const std::uint32_t threshold = static_cast<std::uint32_t>(-b) % b;
                while (low < threshold) {
                    m = std::uint64_t{(*this)()} * b;
                    low = static_cast<std::uint32_t>(m);
                }
            }
            return m >> 32;
        }
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter block_{};
    int lane_ = 4;
};

}  // namespace ugw
