#ifndef NOMARS_SIM_HPP
#define NOMARS_SIM_HPP

#include "nomars/model.hpp"
#include "nomars/selection.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace nomars {

/// Inclusive SNR grid in dB.
struct SnrGrid
{
    double start_db = 0.0;
    double stop_db = 0.0;
    double step_db = 1.0;

    /// Throws std::invalid_argument for a non-positive step or stop < start.
    std::vector<double> points() const;
};

struct CampaignSpec
{
    SystemConfig config; ///< rho is ignored; the grid supplies it
    SnrGrid snr;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
    std::vector<Strategy> strategies;

    void validate() const;
};

struct StrategyPointStats
{
    Strategy strategy = Strategy::two_stage;
    double snr_db = 0.0;
    double rho = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t outage_count = 0;
    double estimate = 0.0;
    double std_err = 0.0; ///< sqrt(p (1 - p) / trials) at the estimate
    double ci_lo = 0.0;   ///< normal-approximation 95% interval, clipped to [0, 1]
    double ci_hi = 0.0;
};

/// Mean and standard error of the per-trial indicator difference a - b.
struct PairedDifference
{
    double mean = 0.0;
    double std_err = 0.0;
};

/// Bit i of a trial pattern is the outage indicator of kAllStrategies[i].
using PatternCounts = std::array<std::uint64_t, 1u << kAllStrategies.size()>;

class OutageStats
{
public:
    OutageStats() = default;
    OutageStats(CampaignSpec spec, std::vector<double> snr_db, bool infeasible);

    const CampaignSpec& spec() const { return spec_; }
    const std::vector<double>& snr_db() const { return snr_db_; }
    bool infeasible() const { return infeasible_; }
    bool has(Strategy s) const;

    /// Throws std::invalid_argument when the strategy was not simulated.
    StrategyPointStats at(Strategy s, std::size_t snr_index) const;

    /// Rows in strategy-request order, then SNR order.
    std::vector<StrategyPointStats> rows() const;

    PairedDifference paired_difference(Strategy a, Strategy b, std::size_t snr_index) const;

    /// Counts of |S_r| = 0..N at one SNR point.
    const std::vector<std::uint64_t>& qualified_size_histogram(std::size_t snr_index) const
    {
        return qualified_hist_.at(snr_index);
    }

    const PatternCounts& patterns(std::size_t snr_index) const { return patterns_.at(snr_index); }

    /// Accumulate another partial result over the same spec.
    void merge(const OutageStats& other);

    // Engine-side accumulation.
    void record(std::size_t snr_index, unsigned pattern, std::size_t qualified_size);

private:
    std::uint64_t count_with_bit(std::size_t snr_index, unsigned bit) const;

    CampaignSpec spec_;
    std::vector<double> snr_db_;
    bool infeasible_ = false;
    std::vector<PatternCounts> patterns_;
    std::vector<std::vector<std::uint64_t>> qualified_hist_;
};

unsigned strategy_bit(Strategy s);

/**
 * Runs every trial of `spec` on `workers` threads.
 *
 * Trial t draws one realization from stream (master_seed, t) and reuses it at
 * every SNR point and for every strategy. Counts are summed as integers, so the
 * result does not depend on the worker count.
 */
OutageStats run_campaign(const CampaignSpec& spec, unsigned workers = 1);

struct GapPoint
{
    double snr_db = 0.0;
    double two_stage = 0.0;
    double max_min = 0.0;
    double gap = 0.0;      ///< max_min - two_stage
    double joint_se = 0.0; ///< paired standard error of the gap
    bool two_stage_worse = false;
};

struct ComparisonReport
{
    std::vector<GapPoint> points;
    bool any_two_stage_worse = false;
};

/// Per-SNR signed gap between max-min and two-stage. Throws std::invalid_argument
/// when either column is missing.
ComparisonReport compare_strategies(const OutageStats& stats);

} // namespace nomars

#endif // NOMARS_SIM_HPP
