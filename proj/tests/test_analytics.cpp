#include "nomars/analytics.hpp"
#include "nomars/channels.hpp"
#include "nomars/verification.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace nomars;

namespace {

// xi1 = 1/6, xi2 = 3/2.
SystemConfig
example_config(std::size_t n = 10)
{
    SystemConfig c;
    c.n_relays = n;
    c.alpha1_sq = 0.8;
    c.alpha2_sq = 0.2;
    c.r1 = 0.5;
    c.r2 = 1.0;
    c.rho = 10.0;
    return c;
}

SystemConfig
reference_config(std::size_t n, double snr_db)
{
    SystemConfig c = SystemConfig::with_power_split({}, 0.75);
    c.n_relays = n;
    c.r1 = 0.5;
    c.r2 = 2.0;
    c.rho = db_to_linear(snr_db);
    return c;
}

} // namespace

TEST_CASE("conditional CDF")
{
    const SystemConfig c = example_config();
    const Thresholds t = compute_thresholds(c);
    const double floor = cdf_domain_floor(c, t);

    CHECK(cdf_F(floor, c, t) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cdf_F(INFINITY, c, t) == 1.0);
    CHECK(cdf_F(200.0, c, t) == doctest::Approx(1.0));
    // e^{1/3} (e^{-1/3} - e^{-3}), evaluated to 30 digits with mpmath.
    CHECK(cdf_F(2.0, c, t) == doctest::Approx(0.930516548777198465).epsilon(1e-13));

    CHECK_THROWS_AS(cdf_F(floor - 0.01, c, t), std::domain_error);
    CHECK(cdf_F_total(floor - 0.01, c, t) == 0.0);

    double prev = 0.0;
    for (double x = floor; x < floor + 8.0; x += 0.05)
    {
        const double f = cdf_F(x, c, t);
        CHECK(f >= prev);
        CHECK(f <= 1.0);
        prev = f;
    }

    Thresholds bad = t;
    bad.feasible = false;
    bad.xi1.reset();
    CHECK_THROWS_AS(cdf_F(2.0, c, bad), std::logic_error);
}

TEST_CASE("conditional CDF against empirical frequencies")
{
    const SystemConfig c = example_config();
    const Thresholds t = compute_thresholds(c);
    const double xi1 = *t.xi1;
    const double y = t.xi2; // gain level matching x = 2 R2

    std::uint64_t kept = 0;
    std::uint64_t below = 0;
    ChannelRealization r;
    for (std::uint64_t s = 0; s < 1'000'000; ++s)
    {
        sample_realization_into({4242, s}, 1, r);
        if (r.h_sq[0] > xi1 && r.g1_sq[0] > xi1 && r.g2_sq[0] > xi1)
        {
            ++kept;
            below += std::min(r.h_sq[0], r.g2_sq[0]) < y ? 1 : 0;
        }
    }
    const double f = cdf_F(2.0, c, t);
    const double se = std::sqrt(f * (1.0 - f) / static_cast<double>(kept));
    CHECK(std::abs(static_cast<double>(below) / static_cast<double>(kept) - f) <= 3.0 * se);
}

TEST_CASE("P(O1) and qualified-set law")
{
    SystemConfig c = example_config(1);
    const Thresholds t = compute_thresholds(c);
    CHECK(p_o1(c, t) == doctest::Approx(0.393469340287366576).epsilon(1e-14));

    SystemConfig high = c;
    high.rho = 1e12;
    CHECK(p_o1(high, compute_thresholds(high)) < 1e-11);

    for (std::size_t n : {1u, 2u, 5u, 10u, 40u})
    {
        c.n_relays = n;
        double total = 0.0;
        for (std::size_t l = 0; l <= n; ++l)
            total += p_sr_size(l, c, t);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(p_sr_size(0, c, t) == doctest::Approx(p_o1(c, t)).epsilon(1e-12));
        CHECK_THROWS_AS(p_sr_size(n + 1, c, t), std::out_of_range);
    }

    c.n_relays = 10;
    CHECK(p_sr_size(3, c, t) == doctest::Approx(0.0390945126141717671).epsilon(1e-12));
    high.n_relays = 10;
    CHECK(p_sr_size(10, high, compute_thresholds(high)) == doctest::Approx(1.0));
}

TEST_CASE("closed-form outage frozen values")
{
    // mpmath, 30 digits.
    CHECK(outage_closed_form(example_config(10)) ==
          doctest::Approx(0.650134105734598916).epsilon(1e-12));
    CHECK(outage_closed_form(reference_config(1, 20.0)) ==
          doctest::Approx(0.704769833075985791).epsilon(1e-12));
    CHECK(outage_closed_form(reference_config(3, 30.0)) ==
          doctest::Approx(0.00151499607095053984).epsilon(1e-11));
    CHECK(outage_closed_form(reference_config(10, 25.0)) ==
          doctest::Approx(1.12914322965904658e-5).epsilon(1e-10));
}

TEST_CASE("closed-form outage edge cases")
{
    SystemConfig c = reference_config(4, 20.0);
    c = SystemConfig::with_power_split(c, 0.5); // alpha1^2 == eps1 alpha2^2
    CHECK(outage_closed_form(c) == 1.0);

    c = reference_config(0, 20.0);
    CHECK(outage_closed_form(c) == 1.0);
}

TEST_CASE("closed-form outage equals the relay-independence oracle")
{
    StreamRng rng({101, 0});
    for (int i = 0; i < 500; ++i)
    {
        SystemConfig c;
        c.n_relays = 1 + rng.below(20);
        c = SystemConfig::with_power_split(c, 0.5 + 0.49 * rng.uniform_open_closed());
        c.r1 = 0.05 + 0.6 * rng.uniform_open_closed();
        c.r2 = 0.05 + 3.0 * rng.uniform_open_closed();
        c.rho = std::pow(10.0, 4.0 * rng.uniform_open_closed());
        const Thresholds t = compute_thresholds(c);
        if (!t.feasible)
        {
            CHECK(outage_closed_form(c) == 1.0);
            continue;
        }
        const double expected = oracle::two_stage_outage(c.n_relays, *t.xi1, t.xi2);
        CHECK(outage_closed_form(c) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("closed-form outage decomposes into P(O1) plus the conditioned sum")
{
    for (std::size_t n : {1u, 3u, 10u})
        for (double db : {5.0, 15.0, 25.0, 35.0})
        {
            const SystemConfig c = reference_config(n, db);
            const Thresholds t = compute_thresholds(c);
            const double f = cdf_F(2.0 * c.r2, c, t);
            double rebuilt = p_o1(c, t);
            for (std::size_t l = 1; l <= n; ++l)
                rebuilt += std::pow(f, static_cast<double>(l)) * p_sr_size(l, c, t);
            const double closed = outage_closed_form(c);
            CHECK(std::abs(closed - rebuilt) <= 1e-12 * std::max(1.0, closed) + 1e-300);
            CHECK(closed >= p_o1(c, t) * (1.0 - 1e-12));
        }
}

TEST_CASE("closed-form outage is monotone in SNR and relay count")
{
    for (std::size_t n = 1; n <= 12; ++n)
    {
        double prev = 1.0;
        for (double db = 0.0; db <= 50.0; db += 1.0)
        {
            const double p = outage_closed_form(reference_config(n, db));
            CHECK(p <= prev * (1.0 + 1e-12));
            CHECK(p >= 0.0);
            prev = p;
            CHECK(outage_closed_form(reference_config(n + 1, db)) <= p * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("xi2 below xi1 clamps F to zero")
{
    SystemConfig c = reference_config(4, 20.0);
    c.r2 = 0.05;
    const Thresholds t = compute_thresholds(c);
    REQUIRE(t.xi2 < *t.xi1);
    CHECK(cdf_F_total(2.0 * c.r2, c, t) == 0.0);
    CHECK(outage_closed_form(c) == doctest::Approx(p_o1(c, t)).epsilon(1e-13));
}

TEST_CASE("log-space evaluation survives deep tails")
{
    const double p = outage_closed_form(reference_config(40, 60.0));
    CHECK(p > 0.0);
    CHECK(std::isfinite(std::log(p)));
    CHECK(p == doctest::Approx(oracle::two_stage_outage(40, 2e-6, 6e-5)).epsilon(1e-8));

    Diagnostics diag;
    outage_closed_form(reference_config(10, 30.0), &diag);
    CHECK(diag.empty());
}

TEST_CASE("high-SNR approximation")
{
    SUBCASE("converges to the exact closed form")
    {
        for (std::size_t n = 1; n <= 3; ++n)
            for (double db : {40.0, 45.0, 50.0, 60.0})
            {
                const SystemConfig c = reference_config(n, db);
                CHECK(outage_high_snr(c) / outage_closed_form(c) ==
                      doctest::Approx(1.0).epsilon(0.05));
            }
    }
    SUBCASE("exact rho^-N scaling")
    {
        for (std::size_t n = 1; n <= 6; ++n)
        {
            SystemConfig c = reference_config(n, 33.0);
            const double base = outage_high_snr(c);
            c.rho *= 2.0;
            CHECK(base / outage_high_snr(c) == std::ldexp(1.0, static_cast<int>(n)));
        }
    }
    SUBCASE("single relay")
    {
        const SystemConfig c = reference_config(1, 30.0);
        // gamma = 2*15/0.25 - 2*1/0.5 = 116; 3 eps1 / margin = 6.
        CHECK(high_snr_gamma(c) == doctest::Approx(116.0).epsilon(1e-14));
        CHECK(outage_high_snr(c) == doctest::Approx(122.0 / c.rho).epsilon(1e-14));
    }
    SUBCASE("frozen N=3 value")
    {
        CHECK(outage_high_snr(reference_config(3, 30.0)) ==
              doctest::Approx(0.001815848).epsilon(1e-12));
    }
    SUBCASE("negative gamma is reported")
    {
        SystemConfig c = reference_config(2, 30.0);
        c = SystemConfig::with_power_split(c, 0.6);
        c.r2 = 0.05;
        REQUIRE(high_snr_gamma(c) < 0.0);
        Diagnostics diag;
        outage_high_snr(c, &diag);
        CHECK_FALSE(diag.empty());
    }
    SUBCASE("infeasible split is rejected")
    {
        const SystemConfig c = SystemConfig::with_power_split(reference_config(2, 30.0), 0.5);
        CHECK_THROWS_AS(outage_high_snr(c), std::logic_error);
    }
}

TEST_CASE("symmetric max-min formula")
{
    SystemConfig c = reference_config(1, 20.0);
    c.r2 = symmetric_r2(c.r1, c.alpha1_sq, c.alpha2_sq);
    for (std::size_t n : {1u, 2u, 5u, 10u})
        for (double db = 10.0; db <= 40.0; db += 5.0)
        {
            c.n_relays = n;
            c.rho = db_to_linear(db);
            CHECK(std::abs(maxmin_outage_symmetric(c) - outage_closed_form(c)) <= 1e-10);
        }

    c.n_relays = 1;
    c.rho = 100.0;
    const double xi1 = *compute_thresholds(c).xi1;
    CHECK(maxmin_outage_symmetric(c) == doctest::Approx(1.0 - std::exp(-3.0 * xi1)));

    CHECK_THROWS_AS(maxmin_outage_symmetric(reference_config(2, 20.0)), std::domain_error);
}

TEST_CASE("diversity order estimator")
{
    std::vector<OutageCurvePoint> pts;
    for (double rho : {10.0, 20.0, 40.0, 80.0})
        pts.push_back({rho, 1e3 * std::pow(rho, -4.0), CurveKind::exact_closed_form});
    pts.erase(pts.begin()); // keep values inside (0, 1)
    CHECK(estimate_diversity_order(pts) == doctest::Approx(4.0).epsilon(1e-9));

    std::vector<double> db;
    for (double d = 30.0; d <= 50.0; d += 2.5)
        db.push_back(d);
    const auto curve = analytic_curve(reference_config(3, 0.0), db, CurveKind::exact_closed_form);
    const double slope = estimate_diversity_order(curve);
    CHECK(slope >= 2.7);
    CHECK(slope <= 3.3);

    SUBCASE("errors")
    {
        CHECK_THROWS_AS(estimate_diversity_order(std::span(pts).first(2)), std::invalid_argument);
        auto bad = pts;
        bad[1].value = 0.0;
        CHECK_THROWS_AS(estimate_diversity_order(bad), std::invalid_argument);
        bad = pts;
        bad[2].value = 1.0;
        CHECK_THROWS_AS(estimate_diversity_order(bad), std::invalid_argument);
        bad = pts;
        bad[2].rho = bad[1].rho;
        CHECK_THROWS_AS(estimate_diversity_order(bad), std::invalid_argument);
    }
}

TEST_CASE("Q1 integral against Simpson quadrature")
{
    StreamRng rng({303, 0});
    for (int i = 0; i < 20; ++i)
    {
        const double xi1 = 0.001 + 2.0 * rng.uniform_open_closed();
        const double y = xi1 + 3.0 * rng.uniform_open_closed();
        const double simpson =
            std::exp(2.0 * xi1) *
            oracle::simpson([xi1](double z) { return std::exp(-std::max(xi1, z) - z); }, xi1, y,
                            20'000);
        const double closed = q1_closed_form(xi1, y);
        CHECK(std::abs(simpson - closed) / closed < 1e-8);
        CHECK(std::abs(q1_quadrature(xi1, y) - closed) / closed < 1e-8);
    }
    CHECK(q1_closed_form(0.3, 0.3) == 0.0);
    CHECK_THROWS_AS(q1_closed_form(0.3, 0.2), std::domain_error);
}
