#include "nomars/analytics.hpp"
#include "nomars/cli.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

namespace nomars::cli {

namespace {

constexpr const char* kOmaModel =
    "four slots; each user served over its own BS-relay-user slot pair at full power; "
    "quarter pre-log; max-min relay selection";
constexpr const char* kPowerSplitNote =
    "presets read the power split as alpha2^2=1/4 (alpha1^2=3/4); a literal alpha1=1/4 "
    "violates alpha1>=alpha2 and cannot support R1=0.5, so outage would be 1 everywhere";

struct Analytic
{
    std::optional<double> closed_form;
    std::optional<double> high_snr;
};

Analytic
analytic_columns(const SweepOptions& opts, Strategy s, double rho)
{
    SystemConfig c = opts.config;
    c.rho = rho;
    const Thresholds thr = compute_thresholds(c);

    Analytic a;
    switch (s)
    {
    case Strategy::two_stage:
    case Strategy::oracle:
        a.closed_form = outage_closed_form(c, thr);
        if (thr.feasible)
            a.high_snr = outage_high_snr(c);
        break;
    case Strategy::max_min:
        if (!thr.feasible)
            a.closed_form = 1.0;
        else if (std::abs(*thr.xi1 - thr.xi2) <= 1e-9 * std::max(*thr.xi1, thr.xi2))
            a.closed_form = maxmin_outage_symmetric(c);
        break;
    case Strategy::random:
        if (!thr.feasible)
            a.closed_form = 1.0;
        break;
    case Strategy::oma:
        break;
    }
    return a;
}

std::string
optional_number(const std::optional<double>& v)
{
    return v ? format_number(*v) : std::string();
}

std::string
join_strategies(const std::vector<Strategy>& list)
{
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i)
    {
        if (i)
            out += ',';
        out += to_string(list[i]);
    }
    return out;
}

} // namespace

std::string
format_number(double v)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf.data(), ptr);
}

std::string
render_csv(const OutageStats& stats, const SweepOptions& opts)
{
    std::ostringstream out;
    out << "# meta: tool=nomars version=" << kVersion << "\n";
    out << "# meta: preset=" << (opts.preset.empty() ? "none" : opts.preset)
        << " n_relays=" << opts.config.n_relays << " r1=" << format_number(opts.config.r1)
        << " r2=" << format_number(opts.config.r2)
        << " alpha1_sq=" << format_number(opts.config.alpha1_sq)
        << " alpha2_sq=" << format_number(opts.config.alpha2_sq)
        << " snr_db=" << format_snr_grid(opts.snr) << " trials=" << opts.trials
        << " seed=" << opts.seed << " strategies=" << join_strategies(opts.strategies) << "\n";
    out << "# meta: channel=unit-mean exponential power gains, common random numbers per trial\n";
    if (stats.has(Strategy::oma))
        out << "# meta: oma_model=" << kOmaModel << "\n";
    if (!opts.preset.empty())
        out << "# meta: power_split_note=" << kPowerSplitNote << "\n";
    if (stats.infeasible())
        out << "# meta: warning=power split cannot support R1; NOMA outage is 1 everywhere\n";

    out << "strategy,rho_db,trials,outage_count,estimate,std_err,ci_lo,ci_hi,closed_form,"
           "high_snr_approx\n";
    for (const auto& row : stats.rows())
    {
        const Analytic a = analytic_columns(opts, row.strategy, row.rho);
        out << to_string(row.strategy) << ',' << format_number(row.snr_db) << ',' << row.trials
            << ',' << row.outage_count << ',' << format_number(row.estimate) << ','
            << format_number(row.std_err) << ',' << format_number(row.ci_lo) << ','
            << format_number(row.ci_hi) << ',' << optional_number(a.closed_form) << ','
            << optional_number(a.high_snr) << '\n';
    }
    return out.str();
}

nlohmann::json
render_json(const OutageStats& stats, const SweepOptions& opts)
{
    using nlohmann::json;

    json meta = {
        {"tool", "nomars"},
        {"version", kVersion},
        {"preset", opts.preset},
        {"n_relays", opts.config.n_relays},
        {"r1", opts.config.r1},
        {"r2", opts.config.r2},
        {"alpha1_sq", opts.config.alpha1_sq},
        {"alpha2_sq", opts.config.alpha2_sq},
        {"snr_db", format_snr_grid(opts.snr)},
        {"trials", opts.trials},
        {"seed", opts.seed},
        {"strategies", join_strategies(opts.strategies)},
        {"infeasible", stats.infeasible()},
    };
    if (stats.has(Strategy::oma))
        meta["oma_model"] = kOmaModel;
    if (!opts.preset.empty())
        meta["power_split_note"] = kPowerSplitNote;

    json rows = json::array();
    for (const auto& row : stats.rows())
    {
        const Analytic a = analytic_columns(opts, row.strategy, row.rho);
        rows.push_back({
            {"strategy", std::string(to_string(row.strategy))},
            {"rho_db", row.snr_db},
            {"trials", row.trials},
            {"outage_count", row.outage_count},
            {"estimate", row.estimate},
            {"std_err", row.std_err},
            {"ci_lo", row.ci_lo},
            {"ci_hi", row.ci_hi},
            {"closed_form", a.closed_form ? json(*a.closed_form) : json(nullptr)},
            {"high_snr_approx", a.high_snr ? json(*a.high_snr) : json(nullptr)},
        });
    }

    json doc = {{"meta", meta}, {"rows", rows}};
    if (stats.has(Strategy::two_stage) && stats.has(Strategy::max_min))
    {
        const ComparisonReport cmp = compare_strategies(stats);
        json gaps = json::array();
        for (const auto& g : cmp.points)
            gaps.push_back({{"rho_db", g.snr_db},
                            {"gap", g.gap},
                            {"joint_se", g.joint_se},
                            {"two_stage_worse", g.two_stage_worse}});
        doc["comparison"] = {{"points", gaps}, {"any_two_stage_worse", cmp.any_two_stage_worse}};
    }
    return doc;
}

} // namespace nomars::cli
