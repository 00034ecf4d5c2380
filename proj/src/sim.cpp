#include "nomars/sim.hpp"

#include "nomars/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace nomars {

namespace {

constexpr double kZ95 = 1.959963984540054;

} // namespace

std::vector<double>
SnrGrid::points() const
{
    if (!(step_db > 0.0))
        throw std::invalid_argument("SNR step must be positive");
    if (stop_db < start_db)
        throw std::invalid_argument("SNR stop must not be below start");

    std::vector<double> out;
    const double tol = 1e-9 * step_db;
    for (std::size_t i = 0;; ++i)
    {
        const double db = start_db + static_cast<double>(i) * step_db;
        if (db > stop_db + tol)
            break;
        out.push_back(db);
    }
    return out;
}

void
CampaignSpec::validate() const
{
    config.validate(true);
    if (trials == 0)
        throw std::invalid_argument("trials must be at least 1");
    if (snr.points().empty())
        throw std::invalid_argument("SNR grid is empty");
    if (strategies.empty())
        throw std::invalid_argument("at least one strategy is required");
}

unsigned
strategy_bit(Strategy s)
{
    for (unsigned i = 0; i < kAllStrategies.size(); ++i)
        if (kAllStrategies[i] == s)
            return i;
    throw std::invalid_argument("unknown strategy");
}

OutageStats::OutageStats(CampaignSpec spec, std::vector<double> snr_db, bool infeasible)
    : spec_(std::move(spec)),
      snr_db_(std::move(snr_db)),
      infeasible_(infeasible),
      patterns_(snr_db_.size(), PatternCounts{}),
      qualified_hist_(snr_db_.size(), std::vector<std::uint64_t>(spec_.config.n_relays + 1, 0))
{
}

bool
OutageStats::has(Strategy s) const
{
    return std::find(spec_.strategies.begin(), spec_.strategies.end(), s) !=
           spec_.strategies.end();
}

std::uint64_t
OutageStats::count_with_bit(std::size_t snr_index, unsigned bit) const
{
    const auto& counts = patterns_.at(snr_index);
    std::uint64_t total = 0;
    for (unsigned mask = 0; mask < counts.size(); ++mask)
        if (mask & (1u << bit))
            total += counts[mask];
    return total;
}

StrategyPointStats
OutageStats::at(Strategy s, std::size_t snr_index) const
{
    if (!has(s))
        throw std::invalid_argument("strategy '" + std::string(to_string(s)) +
                                    "' was not simulated");

    StrategyPointStats p;
    p.strategy = s;
    p.snr_db = snr_db_.at(snr_index);
    p.rho = db_to_linear(p.snr_db);
    p.trials = spec_.trials;
    p.outage_count = count_with_bit(snr_index, strategy_bit(s));

    const double n = static_cast<double>(p.trials);
    p.estimate = static_cast<double>(p.outage_count) / n;
    p.std_err = std::sqrt(p.estimate * (1.0 - p.estimate) / n);
    p.ci_lo = std::max(0.0, p.estimate - kZ95 * p.std_err);
    p.ci_hi = std::min(1.0, p.estimate + kZ95 * p.std_err);
    return p;
}

std::vector<StrategyPointStats>
OutageStats::rows() const
{
    std::vector<StrategyPointStats> out;
    out.reserve(spec_.strategies.size() * snr_db_.size());
    for (Strategy s : spec_.strategies)
        for (std::size_t k = 0; k < snr_db_.size(); ++k)
            out.push_back(at(s, k));
    return out;
}

PairedDifference
OutageStats::paired_difference(Strategy a, Strategy b, std::size_t snr_index) const
{
    if (!has(a) || !has(b))
        throw std::invalid_argument("paired difference needs both strategies simulated");

    const unsigned bit_a = 1u << strategy_bit(a);
    const unsigned bit_b = 1u << strategy_bit(b);
    const auto& counts = patterns_.at(snr_index);
    std::uint64_t only_a = 0;
    std::uint64_t only_b = 0;
    for (unsigned mask = 0; mask < counts.size(); ++mask)
    {
        const bool in_a = mask & bit_a;
        const bool in_b = mask & bit_b;
        if (in_a && !in_b)
            only_a += counts[mask];
        else if (in_b && !in_a)
            only_b += counts[mask];
    }

    const double n = static_cast<double>(spec_.trials);
    PairedDifference d;
    d.mean = (static_cast<double>(only_a) - static_cast<double>(only_b)) / n;
    const double second_moment = static_cast<double>(only_a + only_b) / n;
    const double variance = std::max(0.0, second_moment - d.mean * d.mean);
    d.std_err = std::sqrt(variance / n);
    return d;
}

void
OutageStats::merge(const OutageStats& other)
{
    if (other.patterns_.size() != patterns_.size())
        throw std::invalid_argument("cannot merge results of different campaigns");
    for (std::size_t k = 0; k < patterns_.size(); ++k)
    {
        for (std::size_t m = 0; m < patterns_[k].size(); ++m)
            patterns_[k][m] += other.patterns_[k][m];
        for (std::size_t l = 0; l < qualified_hist_[k].size(); ++l)
            qualified_hist_[k][l] += other.qualified_hist_[k][l];
    }
}

void
OutageStats::record(std::size_t snr_index, unsigned pattern, std::size_t qualified_size)
{
    ++patterns_[snr_index][pattern];
    ++qualified_hist_[snr_index][qualified_size];
}

namespace {

struct SnrPoint
{
    Thresholds noma;
    OmaThresholds oma;
};

struct Wanted
{
    bool two_stage = false;
    bool max_min = false;
    bool oracle = false;
    bool random = false;
    bool oma = false;
};

void
run_trials(const CampaignSpec& spec,
           const std::vector<SnrPoint>& points,
           const Wanted& wanted,
           std::uint64_t first,
           std::uint64_t last,
           OutageStats& out)
{
    const std::size_t n = spec.config.n_relays;
    ChannelRealization r;
    SelectionResult two_stage;
    two_stage.qualified_set.reserve(n);

    for (std::uint64_t t = first; t < last; ++t)
    {
        const SeedSpec seed{spec.master_seed, t};
        sample_realization_into(seed, n, r);

        // Both selections ignore rho, so they are fixed for the whole grid.
        RelayIndex max_min_relay = 0;
        if (wanted.max_min || wanted.oma)
            max_min_relay = *select_max_min(r).chosen;
        RelayIndex random_relay = 0;
        if (wanted.random)
            random_relay = *select_random(r, seed).chosen;

        for (std::size_t k = 0; k < points.size(); ++k)
        {
            const Thresholds& thr = points[k].noma;
            unsigned pattern = 0;

            select_two_stage_into(r, thr, two_stage);
            const bool two_stage_out =
                !two_stage.chosen || outage_given_relay(r, *two_stage.chosen, thr).outage;
            if (wanted.two_stage && two_stage_out)
                pattern |= 1u << strategy_bit(Strategy::two_stage);

            if (wanted.oracle && outage_given_relay(r, *select_oracle(r, thr).chosen, thr).outage)
                pattern |= 1u << strategy_bit(Strategy::oracle);

            if (wanted.max_min && outage_given_relay(r, max_min_relay, thr).outage)
                pattern |= 1u << strategy_bit(Strategy::max_min);

            if (wanted.random && outage_given_relay(r, random_relay, thr).outage)
                pattern |= 1u << strategy_bit(Strategy::random);

            if (wanted.oma && oma_outage_given_relay(r, max_min_relay, points[k].oma))
                pattern |= 1u << strategy_bit(Strategy::oma);

            out.record(k, pattern, two_stage.qualified_set.size());
        }
    }
}

} // namespace

OutageStats
run_campaign(const CampaignSpec& spec, unsigned workers)
{
    spec.validate();
    const std::vector<double> grid = spec.snr.points();

    std::vector<SnrPoint> points;
    points.reserve(grid.size());
    bool infeasible = false;
    for (double db : grid)
    {
        SystemConfig c = spec.config;
        c.rho = db_to_linear(db);
        points.push_back({compute_thresholds(c), compute_oma_thresholds(c)});
        infeasible = infeasible || !points.back().noma.feasible;
    }

    Wanted wanted;
    for (Strategy s : spec.strategies)
    {
        switch (s)
        {
        case Strategy::two_stage:
            wanted.two_stage = true;
            break;
        case Strategy::max_min:
            wanted.max_min = true;
            break;
        case Strategy::oracle:
            wanted.oracle = true;
            break;
        case Strategy::random:
            wanted.random = true;
            break;
        case Strategy::oma:
            wanted.oma = true;
            break;
        }
    }

    workers = std::max(1u, workers);
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, spec.trials));

    std::vector<OutageStats> partial(workers, OutageStats(spec, grid, infeasible));
    const std::uint64_t chunk = spec.trials / workers;
    const std::uint64_t extra = spec.trials % workers;
    {
        std::vector<std::jthread> pool;
        std::uint64_t first = 0;
        for (unsigned w = 0; w < workers; ++w)
        {
            const std::uint64_t last = first + chunk + (w < extra ? 1 : 0);
            pool.emplace_back([&, w, first, last] {
                run_trials(spec, points, wanted, first, last, partial[w]);
            });
            first = last;
        }
    }

    OutageStats total(spec, grid, infeasible);
    for (const auto& p : partial)
        total.merge(p);
    return total;
}

ComparisonReport
compare_strategies(const OutageStats& stats)
{
    if (!stats.has(Strategy::two_stage) || !stats.has(Strategy::max_min))
        throw std::invalid_argument("comparison needs both two_stage and max_min columns");

    ComparisonReport report;
    for (std::size_t k = 0; k < stats.snr_db().size(); ++k)
    {
        GapPoint g;
        g.snr_db = stats.snr_db()[k];
        g.two_stage = stats.at(Strategy::two_stage, k).estimate;
        g.max_min = stats.at(Strategy::max_min, k).estimate;
        const PairedDifference d = stats.paired_difference(Strategy::max_min, Strategy::two_stage, k);
        g.gap = d.mean;
        g.joint_se = d.std_err;
        g.two_stage_worse = g.gap < 0.0 && -g.gap > 3.0 * g.joint_se;
        report.any_two_stage_worse = report.any_two_stage_worse || g.two_stage_worse;
        report.points.push_back(g);
    }
    return report;
}

} // namespace nomars
