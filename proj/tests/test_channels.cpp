#include "nomars/channels.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace nomars;

TEST_CASE("same seed gives bit-identical realizations")
{
    const auto a = sample_realization({42, 17}, 8);
    const auto b = sample_realization({42, 17}, 8);
    CHECK(a.h_sq == b.h_sq);
    CHECK(a.g1_sq == b.g1_sq);
    CHECK(a.g2_sq == b.g2_sq);

    const auto c = sample_realization({42, 18}, 8);
    CHECK(a.h_sq != c.h_sq);
    const auto d = sample_realization({43, 17}, 8);
    CHECK(a.h_sq != d.h_sq);
}

TEST_CASE("realization shape")
{
    const auto r = sample_realization({1, 2}, 5);
    CHECK(r.h_sq.size() == 5);
    CHECK(r.g1_sq.size() == 5);
    CHECK(r.g2_sq.size() == 5);
    CHECK_NOTHROW(r.validate());
    CHECK_THROWS_AS(sample_realization({1, 2}, 0), std::invalid_argument);
}

TEST_CASE("stream generator satisfies the standard concept")
{
    static_assert(std::uniform_random_bit_generator<StreamRng>);
    StreamRng rng({5, 5});
    std::uniform_int_distribution<int> die(1, 6);
    const int roll = die(rng);
    CHECK(roll >= 1);
    CHECK(roll <= 6);

    for (int i = 0; i < 1000; ++i)
    {
        const double u = rng.uniform_open_closed();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        CHECK(rng.below(7) < 7);
    }
    CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("pooled gains follow the unit exponential law")
{
    // 10^6 draws per link family.
    constexpr std::size_t kRelays = 10;
    constexpr std::uint64_t kTrials = 100'000;
    const double n = static_cast<double>(kRelays * kTrials);

    std::array<double, 3> sum{};
    std::array<std::array<double, 3>, 3> above{}; // [family][threshold]
    const std::array<double, 3> cut = {0.5, 1.0, 2.0};

    ChannelRealization r;
    for (std::uint64_t t = 0; t < kTrials; ++t)
    {
        sample_realization_into({2024, t}, kRelays, r);
        const std::array<const std::vector<double>*, 3> families = {&r.h_sq, &r.g1_sq, &r.g2_sq};
        for (std::size_t f = 0; f < 3; ++f)
            for (double v : *families[f])
            {
                sum[f] += v;
                for (std::size_t k = 0; k < 3; ++k)
                    above[f][k] += v > cut[k] ? 1.0 : 0.0;
            }
    }

    for (std::size_t f = 0; f < 3; ++f)
    {
        const double mean = sum[f] / n;
        CHECK(mean >= 0.995);
        CHECK(mean <= 1.005);
        for (std::size_t k = 0; k < 3; ++k)
        {
            const double p = std::exp(-cut[k]);
            const double se = std::sqrt(p * (1.0 - p) / n);
            CHECK(std::abs(above[f][k] / n - p) <= 3.0 * se);
        }
    }
}

TEST_CASE("empirical CDF passes Kolmogorov-Smirnov at 1%")
{
    constexpr std::size_t kSamples = 100'000;
    // Asymptotic 1% critical value of the KS statistic.
    const double critical = 1.6276 / std::sqrt(static_cast<double>(kSamples));

    std::array<std::vector<double>, 3> family;
    for (std::uint64_t t = 0; t < kSamples; ++t)
    {
        const auto r = sample_realization({99, t}, 1);
        family[0].push_back(r.h_sq[0]);
        family[1].push_back(r.g1_sq[0]);
        family[2].push_back(r.g2_sq[0]);
    }
    for (auto& f : family)
        CHECK(oracle::ks_exponential(f) < critical);
}

TEST_CASE("distinct streams are uncorrelated")
{
    constexpr std::size_t kPairs = 100'000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::uint64_t t = 0; t < kPairs; ++t)
    {
        const double x = sample_realization({7, 2 * t}, 1).h_sq[0];
        const double y = sample_realization({7, 2 * t + 1}, 1).h_sq[0];
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double n = static_cast<double>(kPairs);
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
    CHECK(std::abs(corr) < 3.0 / std::sqrt(n));

    // Gains and random-selection draws of the same trial come from separate sub-streams.
    StreamRng gains({7, 0}, StreamPurpose::channel_gains);
    StreamRng pick({7, 0}, StreamPurpose::random_selection);
    CHECK(gains() != pick());
}
