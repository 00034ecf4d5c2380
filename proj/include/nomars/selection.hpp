#ifndef NOMARS_SELECTION_HPP
#define NOMARS_SELECTION_HPP

#include "nomars/channels.hpp"
#include "nomars/model.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace nomars {

enum class Strategy
{
    two_stage,
    max_min,
    oracle,
    random,
    oma,
};

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::two_stage, Strategy::max_min, Strategy::oracle, Strategy::random, Strategy::oma};

std::string_view to_string(Strategy s);
/// Throws std::invalid_argument for an unknown name.
Strategy parse_strategy(std::string_view name);

struct SelectionResult
{
    std::optional<RelayIndex> chosen;
    std::vector<RelayIndex> qualified_set; ///< empty for strategies that do not build it
};

/// Relays whose BS link and both user links exceed xi1. Infeasible thresholds give an empty set.
std::vector<RelayIndex> qualified_set(const ChannelRealization& realization,
                                      const Thresholds& thresholds);

/// Among the qualified relays pick the one with the largest min(h, g2).
/// No relay is chosen when the qualified set is empty.
SelectionResult select_two_stage(const ChannelRealization& realization,
                                 const Thresholds& thresholds);

/// Allocation-free form for hot loops; `out.qualified_set` keeps its capacity.
void select_two_stage_into(const ChannelRealization& realization,
                           const Thresholds& thresholds,
                           SelectionResult& out);

/// Largest min(h, g1, g2) over all relays, ignoring decoding thresholds.
/// Throws std::invalid_argument for an empty realization.
SelectionResult select_max_min(const ChannelRealization& realization);

/// Exhaustive search: lowest-index relay that avoids outage, else relay 0.
SelectionResult select_oracle(const ChannelRealization& realization, const Thresholds& thresholds);

/// Uniformly random relay, deterministic in `seed`.
SelectionResult select_random(const ChannelRealization& realization, SeedSpec seed);

/// Gain thresholds of the four-slot orthogonal baseline (quarter pre-log, full power per slot).
struct OmaThresholds
{
    double user1 = 0.0; ///< (2^{4 R1} - 1) / rho
    double user2 = 0.0; ///< (2^{4 R2} - 1) / rho
};

OmaThresholds compute_oma_thresholds(const SystemConfig& config);

/// Outage of the orthogonal baseline when `relay` serves both users in turn.
bool oma_outage_given_relay(const ChannelRealization& realization,
                            RelayIndex relay,
                            const OmaThresholds& thresholds);

/// Orthogonal baseline with max-min relay selection.
bool oma_outage(const ChannelRealization& realization, const SystemConfig& config);

} // namespace nomars

#endif // NOMARS_SELECTION_HPP
