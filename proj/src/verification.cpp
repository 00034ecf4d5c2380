#include "nomars/verification.hpp"

#include "nomars/analytics.hpp"
#include "nomars/channels.hpp"
#include "nomars/sim.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nomars {

namespace {

constexpr std::size_t kRelayCounts[] = {1, 2, 5, 10};
constexpr SnrGrid kReferenceGrid{10.0, 40.0, 5.0};

SystemConfig
reference_config(std::size_t n_relays)
{
    SystemConfig c = SystemConfig::with_power_split({}, kReferenceAlpha1Sq);
    c.n_relays = n_relays;
    c.r1 = kReferenceR1;
    c.r2 = kReferenceR2;
    return c;
}

CampaignSpec
campaign(const SystemConfig& config,
         SnrGrid grid,
         std::uint64_t trials,
         std::uint64_t seed,
         std::vector<Strategy> strategies)
{
    CampaignSpec spec;
    spec.config = config;
    spec.snr = grid;
    spec.trials = trials;
    spec.master_seed = seed;
    spec.strategies = std::move(strategies);
    return spec;
}

// Each check draws from its own seed family so they stay independent.
std::uint64_t
derived_seed(const VerifyOptions& opts, std::uint64_t salt)
{
    return opts.seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
}

} // namespace

double
null_z_score(double estimate, double p0, std::uint64_t trials)
{
    const double spread = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(trials));
    const double gap = estimate - p0;
    if (spread == 0.0)
        return gap == 0.0 ? 0.0 : std::copysign(HUGE_VAL, gap);
    return gap / spread;
}

double
q1_quadrature(double xi1, double y)
{
    auto integrand = [xi1](double z) { return std::exp(-std::max(xi1, z) - z); };
    double error = 0.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, xi1, y, 15,
                                                                       1e-14, &error);
    return std::exp(2.0 * xi1) * integral;
}

double
chi_squared_critical(double dof, double level)
{
    boost::math::chi_squared dist(dof);
    return boost::math::quantile(boost::math::complement(dist, level));
}

CheckResult
check_closed_form_vs_simulation(const VerifyOptions& opts)
{
    CheckResult res{"closed_form_vs_simulation", false, {}, {}};
    std::size_t total = 0;
    std::size_t within = 0;
    std::ostringstream worst;

    for (std::size_t n : kRelayCounts)
    {
        const SystemConfig base = reference_config(n);
        const OutageStats stats =
            run_campaign(campaign(base, kReferenceGrid, opts.closed_form_trials,
                                  derived_seed(opts, 1), {Strategy::two_stage}),
                         opts.workers);
        for (std::size_t k = 0; k < stats.snr_db().size(); ++k)
        {
            SystemConfig c = base;
            c.rho = db_to_linear(stats.snr_db()[k]);
            Thresholds thr = compute_thresholds(c);
            if (thr.xi1)
                *thr.xi1 *= opts.xi1_fault_scale;
            const double predicted = outage_closed_form(c, thr);
            const auto point = stats.at(Strategy::two_stage, k);
            const double z = null_z_score(point.estimate, predicted, point.trials);
            res.z_scores.push_back(z);
            ++total;
            if (std::abs(z) <= 3.0)
                ++within;
            else
                worst << " N=" << n << "@" << stats.snr_db()[k] << "dB(z=" << z << ")";
        }
    }
    res.passed = static_cast<double>(within) >= 0.95 * static_cast<double>(total);
    std::ostringstream s;
    s << within << "/" << total << " grid points within 3 SE";
    if (within != total)
        s << "; outside:" << worst.str();
    res.summary = s.str();
    return res;
}

CheckResult
check_two_stage_optimality(const VerifyOptions& opts)
{
    CheckResult res{"two_stage_optimality", true, {}, {}};
    std::uint64_t mismatched = 0;
    std::uint64_t checked = 0;
    for (std::size_t n : kRelayCounts)
    {
        const OutageStats stats = run_campaign(
            campaign(reference_config(n), kReferenceGrid, opts.optimality_trials,
                     derived_seed(opts, 2), {Strategy::two_stage, Strategy::oracle}),
            opts.workers);
        const unsigned ts = 1u << strategy_bit(Strategy::two_stage);
        const unsigned orc = 1u << strategy_bit(Strategy::oracle);
        for (std::size_t k = 0; k < stats.snr_db().size(); ++k)
        {
            const auto& counts = stats.patterns(k);
            for (unsigned mask = 0; mask < counts.size(); ++mask)
                if (static_cast<bool>(mask & ts) != static_cast<bool>(mask & orc))
                    mismatched += counts[mask];
            checked += stats.spec().trials;
        }
    }
    res.passed = mismatched == 0;
    std::ostringstream s;
    s << mismatched << " of " << checked << " trials where two-stage and oracle disagree";
    res.summary = s.str();
    return res;
}

CheckResult
check_symmetric_case(const VerifyOptions& opts)
{
    CheckResult res{"symmetric_case", false, {}, {}};
    const double r2 = symmetric_r2(kReferenceR1, kReferenceAlpha1Sq, 1.0 - kReferenceAlpha1Sq);

    double worst_analytic = 0.0;
    std::size_t mc_fail = 0;
    std::size_t points = 0;
    for (std::size_t n : kRelayCounts)
    {
        SystemConfig base = reference_config(n);
        base.r2 = r2;
        for (double db : kReferenceGrid.points())
        {
            SystemConfig c = base;
            c.rho = db_to_linear(db);
            worst_analytic = std::max(
                worst_analytic, std::abs(maxmin_outage_symmetric(c) - outage_closed_form(c)));
        }

        const OutageStats stats =
            run_campaign(campaign(base, kReferenceGrid, opts.symmetric_trials,
                                  derived_seed(opts, 3), {Strategy::two_stage, Strategy::max_min}),
                         opts.workers);
        for (const GapPoint& g : compare_strategies(stats).points)
        {
            ++points;
            const double z = g.joint_se > 0.0 ? g.gap / g.joint_se : (g.gap == 0.0 ? 0.0 : HUGE_VAL);
            res.z_scores.push_back(z);
            if (std::abs(g.gap) > 3.0 * g.joint_se)
                ++mc_fail;
        }
    }

    res.passed = worst_analytic <= 1e-10 && mc_fail == 0;
    std::ostringstream s;
    s << "R2=" << r2 << "; max |symmetric - general| = " << worst_analytic << "; " << mc_fail
      << "/" << points << " points with max-min vs two-stage gap beyond 3 joint SE";
    res.summary = s.str();
    return res;
}

CheckResult
check_diversity_order(const VerifyOptions& opts)
{
    CheckResult res{"diversity_order", true, {}, {}};
    const SnrGrid grid{35.0, 50.0, 2.5};
    const std::vector<double> db = grid.points();
    std::ostringstream s;

    for (std::size_t n = 1; n <= 3; ++n)
    {
        const auto curve = analytic_curve(reference_config(n), db, CurveKind::exact_closed_form);
        const double slope = estimate_diversity_order(curve);
        res.z_scores.push_back(slope);
        const bool ok = std::abs(slope - static_cast<double>(n)) <= 0.3;
        res.passed = res.passed && ok;
        s << "closed form N=" << n << ": " << slope << (ok ? "" : " (FAIL)") << "; ";
    }

    const std::size_t n_random = 3;
    const OutageStats stats =
        run_campaign(campaign(reference_config(n_random), grid, opts.diversity_trials,
                              derived_seed(opts, 4), {Strategy::random}),
                     opts.workers);
    std::vector<OutageCurvePoint> mc;
    for (std::size_t k = 0; k < db.size(); ++k)
    {
        const auto p = stats.at(Strategy::random, k);
        mc.push_back({p.rho, p.estimate, CurveKind::monte_carlo});
    }
    const bool measurable = std::all_of(mc.begin(), mc.end(),
                                        [](const auto& p) { return p.value > 0.0 && p.value < 1.0; });
    if (!measurable)
    {
        res.passed = false;
        s << "random selection: zero-outage point, raise trials";
    }
    else
    {
        const double slope = estimate_diversity_order(mc);
        res.z_scores.push_back(slope);
        const bool ok = std::abs(slope - 1.0) <= 0.3;
        res.passed = res.passed && ok;
        s << "random selection N=" << n_random << ": " << slope << (ok ? "" : " (FAIL)");
    }
    res.summary = s.str();
    return res;
}

CheckResult
check_high_snr_approximation(const VerifyOptions&)
{
    CheckResult res{"high_snr_approximation", true, {}, {}};
    std::ostringstream s;
    for (std::size_t n = 1; n <= 3; ++n)
    {
        SystemConfig c = reference_config(n);
        c.rho = db_to_linear(40.0);
        const double ratio = outage_high_snr(c) / outage_closed_form(c);
        res.z_scores.push_back(ratio);
        const bool ok = ratio >= 0.8 && ratio <= 1.25;
        res.passed = res.passed && ok;
        s << "N=" << n << " ratio " << ratio << (ok ? "" : " (FAIL)") << (n < 3 ? "; " : "");
    }
    res.summary = s.str();
    return res;
}

CheckResult
check_component_laws(const VerifyOptions& opts)
{
    CheckResult res{"component_laws", true, {}, {}};
    std::ostringstream s;

    // xi1 = 1/6, xi2 = 3/2.
    SystemConfig c;
    c.n_relays = 10;
    c.alpha1_sq = 0.8;
    c.alpha2_sq = 0.2;
    c.r1 = 0.5;
    c.r2 = 1.0;
    c.rho = 10.0;
    const Thresholds thr = compute_thresholds(c);

    const OutageStats stats = run_campaign(
        campaign(c, SnrGrid{10.0, 10.0, 1.0}, opts.component_trials, derived_seed(opts, 5),
                 {Strategy::two_stage}),
        opts.workers);
    const auto& hist = stats.qualified_size_histogram(0);
    const double n = static_cast<double>(opts.component_trials);

    // Empty qualified set.
    const double z_empty = null_z_score(static_cast<double>(hist[0]) / n, p_o1(c, thr),
                                        opts.component_trials);
    res.z_scores.push_back(z_empty);
    const bool empty_ok = std::abs(z_empty) <= 3.0;
    s << "P(|S_r|=0) z=" << z_empty << (empty_ok ? "" : " (FAIL)") << "; ";

    // Histogram goodness of fit, pooling sparse bins from the low end.
    double chi2 = 0.0;
    std::size_t bins = 0;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    for (std::size_t l = 0; l <= c.n_relays; ++l)
    {
        pooled_obs += static_cast<double>(hist[l]);
        pooled_exp += n * p_sr_size(l, c, thr);
        if (pooled_exp >= 5.0 || l == c.n_relays)
        {
            chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
            ++bins;
            pooled_obs = 0.0;
            pooled_exp = 0.0;
        }
    }
    const double critical = chi_squared_critical(static_cast<double>(bins - 1), 0.01);
    const bool chi_ok = chi2 < critical;
    s << "|S_r| chi2=" << chi2 << " vs " << critical << (chi_ok ? "" : " (FAIL)") << "; ";

    // Conditional CDF of min(h, g2) at x = 2 R2, from raw single-relay draws.
    const double y = (std::exp2(2.0 * c.r2) - 1.0) / (c.rho * c.alpha2_sq);
    const double xi1 = *thr.xi1;
    std::uint64_t conditioned = 0;
    std::uint64_t below = 0;
    ChannelRealization r;
    for (std::uint64_t t = 0; t < opts.component_trials; ++t)
    {
        sample_realization_into({derived_seed(opts, 6), t}, 1, r);
        if (r.h_sq[0] > xi1 && r.g1_sq[0] > xi1 && r.g2_sq[0] > xi1)
        {
            ++conditioned;
            if (std::min(r.h_sq[0], r.g2_sq[0]) < y)
                ++below;
        }
    }
    const double f_pred = cdf_F(2.0 * c.r2, c, thr);
    const double z_cdf = null_z_score(static_cast<double>(below) / static_cast<double>(conditioned),
                                      f_pred, conditioned);
    res.z_scores.push_back(z_cdf);
    const bool cdf_ok = std::abs(z_cdf) <= 3.0;
    s << "F(2R2)=" << f_pred << " z=" << z_cdf << (cdf_ok ? "" : " (FAIL)") << "; ";

    // Q1 integral against quadrature.
    StreamRng rng({derived_seed(opts, 7), 0});
    double worst_rel = 0.0;
    for (int i = 0; i < 20; ++i)
    {
        const double x1 = 0.001 + 2.0 * rng.uniform_open_closed();
        const double yy = x1 + 3.0 * rng.uniform_open_closed();
        const double numeric = q1_quadrature(x1, yy);
        const double closed = q1_closed_form(x1, yy);
        worst_rel = std::max(worst_rel, std::abs(numeric - closed) / std::abs(numeric));
    }
    const bool q1_ok = worst_rel < 1e-8;
    s << "Q1 worst relative error " << worst_rel << (q1_ok ? "" : " (FAIL)");

    res.passed = empty_ok && chi_ok && cdf_ok && q1_ok;
    res.summary = s.str();
    return res;
}

CheckResult
check_noma_vs_oma(const VerifyOptions& opts)
{
    CheckResult res{"noma_vs_oma", false, {}, {}};
    const OutageStats stats =
        run_campaign(campaign(reference_config(3), SnrGrid{20.0, 40.0, 5.0}, opts.oma_trials,
                              derived_seed(opts, 8), {Strategy::two_stage, Strategy::oma}),
                     opts.workers);

    std::size_t below = 0;
    std::size_t separated = 0;
    const std::size_t total = stats.snr_db().size();
    for (std::size_t k = 0; k < total; ++k)
    {
        const auto noma = stats.at(Strategy::two_stage, k);
        const auto oma = stats.at(Strategy::oma, k);
        const auto d = stats.paired_difference(Strategy::oma, Strategy::two_stage, k);
        res.z_scores.push_back(d.std_err > 0.0 ? d.mean / d.std_err : 0.0);
        if (noma.estimate < oma.estimate)
            ++below;
        if (noma.ci_hi < oma.ci_lo)
            ++separated;
    }
    res.passed = below == total && static_cast<double>(separated) >= 0.8 * static_cast<double>(total);
    std::ostringstream s;
    s << "NOMA below OMA at " << below << "/" << total << " points; disjoint 95% CIs at "
      << separated << "/" << total;
    res.summary = s.str();
    return res;
}

std::vector<CheckResult>
run_all_checks(const VerifyOptions& opts)
{
    return {
        check_closed_form_vs_simulation(opts),
        check_two_stage_optimality(opts),
        check_symmetric_case(opts),
        check_diversity_order(opts),
        check_high_snr_approximation(opts),
        check_component_laws(opts),
        check_noma_vs_oma(opts),
    };
}

} // namespace nomars
