#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ugw/degree.hpp"

using namespace ugw;

namespace {

std::vector<DegreeDistribution> zoo() {
    return {DegreeDistribution::poisson(0.7), DegreeDistribution::poisson(3.0),
            DegreeDistribution::dirac(3), DegreeDistribution::dirac(5),
            DegreeDistribution::geometric(0.4), DegreeDistribution::parse("negbin:3,0.6"),
            DegreeDistribution::parse("pmf:0=0.2,1=0.3,3=0.5"),
            DegreeDistribution::parse("pmf:1=0.5,4=0.25,7=0.25")};
}

}  // namespace

TEST(Degree, PmfExamples) {
    EXPECT_NEAR(DegreeDistribution::poisson(1.0).pmf(0), std::exp(-1.0), 1e-15);
    const auto two_point = DegreeDistribution::parse("pmf:1=0.5,3=0.5");
    EXPECT_EQ(two_point.pmf(2), 0.0);
    EXPECT_EQ(DegreeDistribution::dirac(3).pmf(3), 1.0);
    EXPECT_EQ(DegreeDistribution::dirac(3).pmf(2), 0.0);
}

TEST(Degree, PmfSumsToOne) {
    for (const auto& d : zoo()) {
        double total = 0.0;
        for (std::uint64_t k = 0; k < 400; ++k) total += d.pmf(k);
        EXPECT_NEAR(total, 1.0, 1e-12) << d.to_string();
    }
}

TEST(Degree, SizeBiasedExamples) {
    const auto p = size_biased(DegreeDistribution::poisson(2.3));
    ASSERT_TRUE(std::holds_alternative<law::Poisson>(p.kind()));
    EXPECT_EQ(std::get<law::Poisson>(p.kind()).mean, 2.3);

    const auto d = size_biased(DegreeDistribution::dirac(3));
    ASSERT_TRUE(std::holds_alternative<law::Dirac>(d.kind()));
    EXPECT_EQ(std::get<law::Dirac>(d.kind()).degree, 2u);

    // mean 2: pihat_0 = 1 * 0.5 / 2, pihat_2 = 3 * 0.5 / 2
    const auto f = size_biased(DegreeDistribution::parse("pmf:1=0.5,3=0.5"));
    EXPECT_NEAR(f.pmf(0), 0.25, 1e-15);
    EXPECT_NEAR(f.pmf(1), 0.0, 1e-15);
    EXPECT_NEAR(f.pmf(2), 0.75, 1e-15);
}

TEST(Degree, SizeBiasedMatchesDefinitionTermByTerm) {
    for (const auto& d : zoo()) {
        const auto hat = size_biased(d);
        for (std::uint64_t k = 0; k < 40; ++k) {
            const double expected = static_cast<double>(k + 1) * d.pmf(k + 1) / d.mean();
            EXPECT_NEAR(hat.pmf(k), expected, 1e-13) << d.to_string() << " k=" << k;
        }
    }
}

TEST(Degree, ZeroMeanCannotBeSizeBiased) {
    try {
        (void)size_biased(DegreeDistribution::dirac(0));
        FAIL() << "expected ZeroMean";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroMean);
    }
}

TEST(Degree, GeneratingFunctionExamples) {
    EXPECT_NEAR(DegreeDistribution::poisson(2.0).phi(0.5), std::exp(-1.0), 1e-15);
    const auto hat3 = size_biased(DegreeDistribution::dirac(3));
    EXPECT_NEAR(hat3.phi(0.3), 0.09, 1e-15);
    EXPECT_NEAR(hat3.phi_prime(0.5), 1.0, 1e-15);
    EXPECT_THROW((void)DegreeDistribution::poisson(1.0).phi(1.5), Error);
    EXPECT_THROW((void)DegreeDistribution::poisson(1.0).phi(-0.1), Error);
}

TEST(Degree, NormalizationAtOne) {
    for (const auto& d : zoo()) {
        EXPECT_NEAR(d.phi(1.0), 1.0, 1e-12) << d.to_string();
        EXPECT_NEAR(size_biased(d).phi(1.0), 1.0, 1e-12) << d.to_string();
        EXPECT_NEAR(d.phi_prime(1.0), d.mean(), 1e-12) << d.to_string();
    }
}

TEST(Degree, SizeBiasedGeneratingFunctionIdentity) {
    Stream rng(7, 0);
    for (const auto& d : zoo()) {
        const auto hat = size_biased(d);
        const double scale = d.phi_prime(1.0);
        for (int i = 0; i < 100; ++i) {
            const double z = rng.uniform();
            EXPECT_NEAR(hat.phi(z) * scale, d.phi_prime(z), 1e-12) << d.to_string();
            EXPECT_NEAR(hat.phi_prime(z) * scale, d.phi_second(z), 1e-11) << d.to_string();
        }
    }
}

TEST(Degree, DerivativesMatchFiniteDifferences) {
    for (const auto& d : zoo()) {
        for (double z : {0.1, 0.35, 0.6, 0.9}) {
            const double h = 1e-6;
            EXPECT_NEAR((d.phi(z + h) - d.phi(z - h)) / (2 * h), d.phi_prime(z), 1e-6);
            EXPECT_NEAR((d.phi_prime(z + h) - d.phi_prime(z - h)) / (2 * h), d.phi_second(z), 1e-5);
        }
    }
}

TEST(Degree, GeneratingFunctionMonotoneAndConvex) {
    for (const auto& d : zoo()) {
        constexpr int n = 200;
        double prev_diff = -1.0;
        for (int i = 0; i < n; ++i) {
            const double diff = d.phi((i + 1.0) / n) - d.phi(static_cast<double>(i) / n);
            EXPECT_GE(diff, -1e-15) << d.to_string();
            EXPECT_GE(diff, prev_diff - 1e-14) << d.to_string();
            prev_diff = diff;
        }
    }
}

TEST(Degree, SamplerExamples) {
    for (std::uint64_t seed : {1ull, 99ull, 12345ull}) {
        Stream rng(seed, 3);
        EXPECT_EQ(DegreeDistribution::dirac(3).sample(rng), 3u);
        EXPECT_EQ(DegreeDistribution::parse("pmf:0=1").sample(rng), 0u);
    }
}

TEST(Degree, PoissonSamplerMean) {
    const auto d = DegreeDistribution::poisson(1.0);
    Stream rng(2024, 11);
    double total = 0.0;
    constexpr int draws = 1'000'000;
    for (int i = 0; i < draws; ++i) total += static_cast<double>(d.sample(rng));
    EXPECT_NEAR(total / draws, 1.0, 0.005);
}

TEST(Degree, SamplerFrequenciesMatchPmf) {
    for (const auto& d : zoo()) {
        Stream rng(5, 17);
        std::vector<double> counts(64, 0.0);
        constexpr int draws = 200'000;
        for (int i = 0; i < draws; ++i) {
            const auto k = d.sample(rng);
            if (k < counts.size()) counts[k] += 1.0;
        }
        for (std::size_t k = 0; k < 12; ++k) {
            const double p = d.pmf(k);
            const double se = std::sqrt(p * (1 - p) / draws);
            EXPECT_NEAR(counts[k] / draws, p, 5 * se + 1e-9) << d.to_string() << " k=" << k;
        }
    }
}

TEST(Degree, LargeMeanPoissonSampler) {
    const auto d = DegreeDistribution::poisson(75.0);
    Stream rng(8, 8);
    double s = 0.0, s2 = 0.0;
    constexpr int draws = 200'000;
    for (int i = 0; i < draws; ++i) {
        const double k = static_cast<double>(d.sample(rng));
        s += k;
        s2 += k * k;
    }
    const double mean = s / draws;
    EXPECT_NEAR(mean, 75.0, 0.1);
    EXPECT_NEAR(s2 / draws - mean * mean, 75.0, 1.5);
}

TEST(Degree, FinitePmfRenormalizesWithinTolerance) {
    const auto d = DegreeDistribution::finite({0.25, 0.25, 0.5 + 5e-10});
    EXPECT_NEAR(d.pmf(0) + d.pmf(1) + d.pmf(2), 1.0, 1e-15);
    EXPECT_THROW(DegreeDistribution::finite({0.3, 0.3}), Error);
    EXPECT_THROW(DegreeDistribution::finite({-0.5, 1.5}), Error);
}

TEST(Degree, DegeneracyFlag) {
    EXPECT_FALSE(DegreeDistribution::parse("pmf:0=0.5,1=0.5").non_degenerate());
    EXPECT_FALSE(DegreeDistribution::dirac(1).non_degenerate());
    EXPECT_FALSE(DegreeDistribution::dirac(0).non_degenerate());
    EXPECT_TRUE(DegreeDistribution::dirac(2).non_degenerate());
    EXPECT_TRUE(DegreeDistribution::poisson(0.01).non_degenerate());
}

TEST(Degree, ParseGrammar) {
    EXPECT_EQ(DegreeDistribution::parse("poisson:2.0").to_string(), "poisson:2");
    EXPECT_EQ(DegreeDistribution::parse("dirac:3").to_string(), "dirac:3");
    EXPECT_EQ(DegreeDistribution::parse("geometric:0.5").to_string(), "geometric:0.5");
    const auto pmf = DegreeDistribution::parse("pmf:0=0.2,1=0.3,3=0.5");
    EXPECT_NEAR(pmf.pmf(3), 0.5, 1e-15);
    EXPECT_NEAR(pmf.mean(), 1.8, 1e-15);
    // Round trip through the printed form.
    for (const auto& d : zoo()) {
        const auto again = DegreeDistribution::parse(d.to_string());
        for (std::uint64_t k = 0; k < 20; ++k) EXPECT_EQ(again.pmf(k), d.pmf(k)) << d.to_string();
    }
}

TEST(Degree, ParseErrorsNameTheToken) {
    const auto message_of = [](const char* text) {
        try {
            (void)DegreeDistribution::parse(text);
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Parse) << text;
            return std::string(e.what());
        }
        ADD_FAILURE() << "no error for " << text;
        return std::string();
    };
    EXPECT_NE(message_of("poisson:abc").find("abc"), std::string::npos);
    EXPECT_NE(message_of("binomial:3").find("binomial"), std::string::npos);
    EXPECT_NE(message_of("pmf:0=0.5,x=0.5").find("x"), std::string::npos);
    EXPECT_NE(message_of("pmf:0=0.5,1").find("'1'"), std::string::npos);
    EXPECT_NE(message_of("dirac:-2").find("-2"), std::string::npos);
    message_of("poisson:0");
    message_of("geometric:1.5");
    message_of("pmf:0=0.2,1=0.2");
    message_of("nocolon");
}
