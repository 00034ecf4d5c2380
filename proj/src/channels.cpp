#include "nomars/channels.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace nomars {

namespace {

std::uint64_t
splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

StreamRng::StreamRng(SeedSpec seed, StreamPurpose purpose)
{
    // Fold the three keys through SplitMix64 one at a time so that nearby
    // (seed, stream) pairs land on unrelated states.
    std::uint64_t mix = seed.master_seed;
    std::uint64_t key = splitmix64(mix);
    mix = key ^ seed.stream_id;
    key = splitmix64(mix);
    mix = key ^ static_cast<std::uint64_t>(purpose);
    for (auto& word : s_)
        word = splitmix64(mix);
}

StreamRng::result_type
StreamRng::operator()()
{
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

double
StreamRng::uniform_open_closed()
{
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

double
StreamRng::exponential()
{
    return -std::log(uniform_open_closed());
}

std::uint64_t
StreamRng::below(std::uint64_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("bound must be positive");
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound)
    {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold)
        {
            x = (*this)();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

void
sample_realization_into(SeedSpec seed, std::size_t n_relays, ChannelRealization& out)
{
    if (n_relays == 0)
        throw std::invalid_argument("n_relays must be at least 1");

    out.h_sq.resize(n_relays);
    out.g1_sq.resize(n_relays);
    out.g2_sq.resize(n_relays);

    StreamRng rng(seed, StreamPurpose::channel_gains);
    for (auto& v : out.h_sq)
        v = rng.exponential();
    for (auto& v : out.g1_sq)
        v = rng.exponential();
    for (auto& v : out.g2_sq)
        v = rng.exponential();
}

ChannelRealization
sample_realization(SeedSpec seed, std::size_t n_relays)
{
    ChannelRealization r;
    sample_realization_into(seed, n_relays, r);
    return r;
}

} // namespace nomars
