#include "nomars/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nomars {

std::string_view
to_string(Strategy s)
{
    switch (s)
    {
    case Strategy::two_stage:
        return "two_stage";
    case Strategy::max_min:
        return "max_min";
    case Strategy::oracle:
        return "oracle";
    case Strategy::random:
        return "random";
    case Strategy::oma:
        return "oma";
    }
    return "unknown";
}

Strategy
parse_strategy(std::string_view name)
{
    for (Strategy s : kAllStrategies)
        if (to_string(s) == name)
            return s;
    throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::vector<RelayIndex>
qualified_set(const ChannelRealization& realization, const Thresholds& thresholds)
{
    std::vector<RelayIndex> set;
    if (!thresholds.feasible)
        return set;
    for (RelayIndex n = 0; n < realization.size(); ++n)
        if (relay_decodes_s1(realization.h_sq[n], thresholds) &&
            user_decodes_s1(realization.g1_sq[n], thresholds) &&
            user_decodes_s1(realization.g2_sq[n], thresholds))
            set.push_back(n);
    return set;
}

void
select_two_stage_into(const ChannelRealization& realization,
                      const Thresholds& thresholds,
                      SelectionResult& out)
{
    out.chosen.reset();
    out.qualified_set.clear();
    if (!thresholds.feasible)
        return;

    const double xi1 = *thresholds.xi1;
    double best = -1.0;
    for (RelayIndex n = 0; n < realization.size(); ++n)
    {
        const double h = realization.h_sq[n];
        const double g2 = realization.g2_sq[n];
        if (!(h > xi1 && realization.g1_sq[n] > xi1 && g2 > xi1))
            continue;
        out.qualified_set.push_back(n);
        // log(1 + rho a2 x) is increasing, so compare the gains directly.
        const double bottleneck = std::min(h, g2);
        if (bottleneck > best)
        {
            best = bottleneck;
            out.chosen = n;
        }
    }
}

SelectionResult
select_two_stage(const ChannelRealization& realization, const Thresholds& thresholds)
{
    SelectionResult r;
    select_two_stage_into(realization, thresholds, r);
    return r;
}

SelectionResult
select_max_min(const ChannelRealization& realization)
{
    if (realization.size() == 0)
        throw std::invalid_argument("max-min selection needs at least one relay");

    SelectionResult r;
    double best = -1.0;
    for (RelayIndex n = 0; n < realization.size(); ++n)
    {
        const double weakest =
            std::min({realization.h_sq[n], realization.g1_sq[n], realization.g2_sq[n]});
        if (weakest > best)
        {
            best = weakest;
            r.chosen = n;
        }
    }
    return r;
}

SelectionResult
select_oracle(const ChannelRealization& realization, const Thresholds& thresholds)
{
    if (realization.size() == 0)
        throw std::invalid_argument("oracle selection needs at least one relay");

    SelectionResult r;
    for (RelayIndex n = 0; n < realization.size(); ++n)
    {
        if (!outage_given_relay(realization, n, thresholds).outage)
        {
            r.chosen = n;
            return r;
        }
    }
    r.chosen = 0;
    return r;
}

SelectionResult
select_random(const ChannelRealization& realization, SeedSpec seed)
{
    if (realization.size() == 0)
        throw std::invalid_argument("random selection needs at least one relay");

    StreamRng rng(seed, StreamPurpose::random_selection);
    SelectionResult r;
    r.chosen = static_cast<RelayIndex>(rng.below(realization.size()));
    return r;
}

OmaThresholds
compute_oma_thresholds(const SystemConfig& config)
{
    return {(std::exp2(4.0 * config.r1) - 1.0) / config.rho,
            (std::exp2(4.0 * config.r2) - 1.0) / config.rho};
}

bool
oma_outage_given_relay(const ChannelRealization& realization,
                       RelayIndex relay,
                       const OmaThresholds& thresholds)
{
    if (relay >= realization.size())
        throw std::out_of_range("relay index out of range");
    const double h = realization.h_sq[relay];
    // (1/4) log2(1 + rho m) < R  <=>  m < (2^{4R} - 1) / rho; the boundary counts as outage.
    const bool user1_ok = std::min(h, realization.g1_sq[relay]) > thresholds.user1;
    const bool user2_ok = std::min(h, realization.g2_sq[relay]) > thresholds.user2;
    return !(user1_ok && user2_ok);
}

bool
oma_outage(const ChannelRealization& realization, const SystemConfig& config)
{
    const auto relay = select_max_min(realization).chosen.value();
    return oma_outage_given_relay(realization, relay, compute_oma_thresholds(config));
}

} // namespace nomars
