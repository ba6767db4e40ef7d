#include <gtest/gtest.h>

#include <set>

#include "ugw/rng.hpp"

using namespace ugw;

TEST(Philox, KnownAnswer) {
    // Reference vectors for philox4x32-10 from the Random123 distribution.
    const auto zero = Philox4x32::apply({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(zero, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    const auto ones = Philox4x32::apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(ones, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    const auto pi = Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                      {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(pi, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Stream, KeyedStreamsAreReproducibleAndDistinct) {
    auto a = Stream::keyed(42, StreamTag::StieltjesStep, 7, 1000);
    auto b = Stream::keyed(42, StreamTag::StieltjesStep, 7, 1000);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
    std::set<std::uint64_t> firsts;
    for (std::uint32_t idx = 0; idx < 50; ++idx)
        for (std::uint64_t gen = 0; gen < 20; ++gen)
            firsts.insert(Stream::keyed(42, StreamTag::StieltjesStep, gen, idx).next_u64());
    EXPECT_EQ(firsts.size(), 1000u);
    EXPECT_NE(Stream::keyed(42, StreamTag::RootPass, 7, 1000).next_u64(),
              Stream::keyed(42, StreamTag::StieltjesStep, 7, 1000).next_u64());
}

TEST(Stream, UniformMomentsAndBounds) {
    Stream rng(1, 2);
    double s = 0.0, s2 = 0.0;
    constexpr int n = 400000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double v = rng.uniform_pos();
        ASSERT_GT(v, 0.0);
        ASSERT_LE(v, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 0.002);
    EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.002);
}

TEST(Stream, BelowIsUniform) {
    Stream rng(3, 4);
    std::vector<int> counts(7, 0);
    constexpr int n = 700000;
    for (int i = 0; i < n; ++i) ++counts[rng.below(7)];
    for (int c : counts) EXPECT_NEAR(c, n / 7.0, 5 * std::sqrt(n / 7.0));
    const std::uint64_t big = (1ull << 40) + 3;
    for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.below(big), big);
}
