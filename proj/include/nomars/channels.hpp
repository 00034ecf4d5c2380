#ifndef NOMARS_CHANNELS_HPP
#define NOMARS_CHANNELS_HPP

#include "nomars/model.hpp"

#include <array>
#include <cstdint>
#include <limits>

namespace nomars {

/// Identifies one reproducible random stream: a campaign seed plus a per-trial id.
struct SeedSpec
{
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

/// Independent sub-streams derived from the same SeedSpec.
enum class StreamPurpose : std::uint64_t
{
    channel_gains = 0,
    random_selection = 1,
};

/**
 * xoshiro256** generator whose state is derived from (master_seed, stream_id,
 * purpose) through SplitMix64. Construction is cheap, so every trial builds its
 * own generator and results never depend on execution order.
 *
 * Satisfies std::uniform_random_bit_generator.
 */
class StreamRng
{
public:
    using result_type = std::uint64_t;

    explicit StreamRng(SeedSpec seed, StreamPurpose purpose = StreamPurpose::channel_gains);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform_open_closed();

    /// Exp(1) by inversion.
    double exponential();

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);

private:
    std::array<std::uint64_t, 4> s_{};
};

/// 3N independent unit-mean exponential gains. Throws std::invalid_argument if n_relays == 0.
ChannelRealization sample_realization(SeedSpec seed, std::size_t n_relays);

/// In-place variant reusing the realization's storage.
void sample_realization_into(SeedSpec seed, std::size_t n_relays, ChannelRealization& out);

} // namespace nomars

#endif // NOMARS_CHANNELS_HPP
