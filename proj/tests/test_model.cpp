#include "nomars/channels.hpp"
#include "nomars/model.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace nomars;

namespace {

SystemConfig
example_config()
{
    SystemConfig c;
    c.n_relays = 3;
    c.alpha1_sq = 0.8;
    c.alpha2_sq = 0.2;
    c.r1 = 0.5;
    c.r2 = 1.0;
    c.rho = 10.0;
    return c;
}

} // namespace

TEST_CASE("config validation")
{
    SystemConfig c = example_config();
    CHECK_NOTHROW(c.validate());

    SUBCASE("power split must sum to one")
    {
        c.alpha2_sq = 0.25;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("user 1 gets the larger share")
    {
        c = SystemConfig::with_power_split(c, 0.4);
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("zero relays only outside simulation")
    {
        c.n_relays = 0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        CHECK_NOTHROW(c.validate(false));
    }
    SUBCASE("rates and snr positive")
    {
        c.r2 = 0.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c.r2 = 1.0;
        c.rho = -1.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
}

TEST_CASE("thresholds of the worked example")
{
    const Thresholds t = compute_thresholds(example_config());
    CHECK(t.feasible);
    CHECK(t.eps1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.eps2 == doctest::Approx(3.0).epsilon(1e-15));
    REQUIRE(t.xi1.has_value());
    CHECK(*t.xi1 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(t.xi2 == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("infeasible power split")
{
    SystemConfig c = example_config();
    c.alpha1_sq = 0.4;
    c.alpha2_sq = 0.6;
    const Thresholds t = compute_thresholds(c);
    CHECK_FALSE(t.feasible);
    CHECK_FALSE(t.xi1.has_value());
    CHECK(t.xi2 > 0.0);
    CHECK_THROWS_AS(t.xi1_or_throw(), std::logic_error);
    CHECK_THROWS_AS(relay_decodes_s1(5.0, t), std::logic_error);
    CHECK_THROWS_AS(user_decodes_s1(5.0, t), std::logic_error);

    // Boundary alpha1^2 == eps1 alpha2^2 is infeasible as well.
    c = SystemConfig::with_power_split(c, 0.5);
    CHECK_FALSE(compute_thresholds(c).feasible);
}

TEST_CASE("thresholds vanish as rho grows")
{
    SystemConfig c = example_config();
    double last1 = INFINITY;
    double last2 = INFINITY;
    for (double rho : {1e1, 1e3, 1e6, 1e12})
    {
        c.rho = rho;
        const Thresholds t = compute_thresholds(c);
        CHECK(*t.xi1 < last1);
        CHECK(t.xi2 < last2);
        last1 = *t.xi1;
        last2 = t.xi2;
    }
    CHECK(last1 < 1e-11);
    CHECK(last2 < 1e-10);
}

TEST_CASE("decoding predicates are strict")
{
    const Thresholds t = compute_thresholds(example_config());
    const double xi1 = *t.xi1;
    CHECK(relay_decodes_s1(2.0 * xi1, t));
    CHECK_FALSE(relay_decodes_s1(xi1, t));
    CHECK_FALSE(user_decodes_s1(0.0, t));

    CHECK_FALSE(node_decodes_s2(t.xi2, t));
    CHECK(node_decodes_s2(10.0 * t.xi2, t));
    CHECK_FALSE(node_decodes_s2(1.4, t)); // xi2 = 1.5
}

TEST_CASE("gain threshold matches the SINR condition")
{
    StreamRng rng({7, 0});
    for (int i = 0; i < 2000; ++i)
    {
        SystemConfig c;
        c.alpha1_sq = 0.5 + 0.49 * rng.uniform_open_closed();
        c.alpha2_sq = 1.0 - c.alpha1_sq;
        c.r1 = 0.05 + 0.5 * rng.uniform_open_closed();
        c.rho = std::pow(10.0, 3.0 * rng.uniform_open_closed());
        const Thresholds t = compute_thresholds(c);
        if (!t.feasible)
            continue;
        const double g = 4.0 * rng.exponential() * *t.xi1;
        // Skip draws within rounding distance of the boundary.
        if (std::abs(g - *t.xi1) < 1e-9 * *t.xi1)
            continue;
        const bool by_sinr = s1_sinr(g, c.alpha1_sq, c.alpha2_sq, c.rho) > t.eps1;
        CHECK(by_sinr == user_decodes_s1(g, t));
    }
}

TEST_CASE("predicates are monotone in the gain")
{
    const Thresholds t = compute_thresholds(example_config());
    bool prev1 = false;
    bool prev2 = false;
    for (double g = 0.0; g < 5.0; g += 0.01)
    {
        const bool d1 = user_decodes_s1(g, t);
        const bool d2 = node_decodes_s2(g, t);
        CHECK((!prev1 || d1));
        CHECK((!prev2 || d2));
        prev1 = d1;
        prev2 = d2;
    }
}

TEST_CASE("outage events for one relay")
{
    SystemConfig c = example_config();
    c.rho = 100.0;
    Thresholds t = compute_thresholds(c); // xi1 = 1/60, xi2 = 0.15
    const double xi1 = *t.xi1;
    const double big = 100.0;

    SUBCASE("everything strong")
    {
        const ChannelRealization r{{big}, {big}, {big}};
        const auto o = outage_given_relay(r, 0, t);
        CHECK_FALSE(o.outage);
        CHECK_FALSE(o.o1);
        CHECK_FALSE(o.o2);
    }
    SUBCASE("s1 fine, s2 lost at the relay")
    {
        REQUIRE(t.xi2 > 2.0 * xi1);
        const ChannelRealization r{{2.0 * xi1}, {2.0 * xi1}, {2.0 * xi1}};
        const auto o = outage_given_relay(r, 0, t);
        CHECK_FALSE(o.o1);
        CHECK(o.o2);
        CHECK(o.outage);
    }
    SUBCASE("user 1 cannot decode s1")
    {
        const ChannelRealization r{{big}, {xi1}, {big}};
        const auto o = outage_given_relay(r, 0, t);
        CHECK(o.o1);
        CHECK_FALSE(o.o2);
        CHECK(o.outage);
    }
    SUBCASE("bad index")
    {
        const ChannelRealization r{{big}, {big}, {big}};
        CHECK_THROWS_AS(outage_given_relay(r, 1, t), std::out_of_range);
    }
    SUBCASE("infeasible split is always outage")
    {
        c = SystemConfig::with_power_split(c, 0.5);
        t = compute_thresholds(c);
        const ChannelRealization r{{big, 1.0}, {big, 1.0}, {big, 1.0}};
        for (RelayIndex n = 0; n < 2; ++n)
        {
            const auto o = outage_given_relay(r, n, t);
            CHECK(o.outage);
            CHECK(o.o1);
        }
    }
}

TEST_CASE("o1 and o2 never coincide")
{
    SystemConfig c = example_config();
    for (double rho : {3.0, 30.0, 300.0})
    {
        c.rho = rho;
        const Thresholds t = compute_thresholds(c);
        for (std::uint64_t s = 0; s < 2000; ++s)
        {
            const auto r = sample_realization({11, s}, 1);
            const auto o = outage_given_relay(r, 0, t);
            CHECK_FALSE((o.o1 && o.o2));
            CHECK(o.outage == (o.o1 || o.o2));
        }
    }
}

TEST_CASE("symmetric rate makes both thresholds equal")
{
    const double r2 = symmetric_r2(0.5, 0.75, 0.25);
    SystemConfig c = SystemConfig::with_power_split({}, 0.75);
    c.r1 = 0.5;
    c.r2 = r2;
    for (double rho : {10.0, 1e3, 1e5})
    {
        c.rho = rho;
        const Thresholds t = compute_thresholds(c);
        CHECK(std::abs(*t.xi1 - t.xi2) <= 1e-12 * t.xi2);
    }
    CHECK_THROWS_AS(symmetric_r2(0.5, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("realization validation")
{
    ChannelRealization r{{1.0, 2.0}, {1.0}, {1.0, 2.0}};
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r.g1_sq = {1.0, -0.1};
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r.g1_sq = {1.0, 0.0};
    CHECK_NOTHROW(r.validate());
}
