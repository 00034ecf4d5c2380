#include "nomars/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nomars {

namespace {

constexpr double kPowerSplitTolerance = 1e-12;

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

} // namespace

void
SystemConfig::validate(bool require_relays) const
{
    if (require_relays && n_relays == 0)
        throw std::invalid_argument("n_relays must be at least 1");
    if (!in_open_unit(alpha1_sq) || !in_open_unit(alpha2_sq))
        throw std::invalid_argument("power coefficients must lie in (0, 1)");
    if (std::abs(alpha1_sq + alpha2_sq - 1.0) > kPowerSplitTolerance)
        throw std::invalid_argument("alpha1_sq + alpha2_sq must equal 1");
    if (alpha1_sq < alpha2_sq)
        throw std::invalid_argument("alpha1_sq must be >= alpha2_sq");
    if (!(r1 > 0.0) || !(r2 > 0.0) || !std::isfinite(r1) || !std::isfinite(r2))
        throw std::invalid_argument("target rates must be positive and finite");
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("rho must be positive and finite");
}

SystemConfig
SystemConfig::with_power_split(SystemConfig base, double alpha1_sq)
{
    base.alpha1_sq = alpha1_sq;
    base.alpha2_sq = 1.0 - alpha1_sq;
    return base;
}

double
Thresholds::xi1_or_throw() const
{
    if (!feasible || !xi1)
        throw std::logic_error("s1 threshold undefined: power split cannot support R1");
    return *xi1;
}

Thresholds
compute_thresholds(const SystemConfig& config)
{
    Thresholds t;
    t.eps1 = std::exp2(2.0 * config.r1) - 1.0;
    t.eps2 = std::exp2(2.0 * config.r2) - 1.0;
    t.xi2 = t.eps2 / (config.rho * config.alpha2_sq);

    const double margin = config.alpha1_sq - t.eps1 * config.alpha2_sq;
    t.feasible = margin > 0.0;
    if (t.feasible)
        t.xi1 = (t.eps1 / config.rho) / margin;
    return t;
}

double
symmetric_r2(double r1, double alpha1_sq, double alpha2_sq)
{
    const double eps1 = std::exp2(2.0 * r1) - 1.0;
    const double margin = alpha1_sq - eps1 * alpha2_sq;
    if (!(margin > 0.0))
        throw std::invalid_argument("power split cannot support R1");
    // xi2 == xi1  <=>  eps2 / alpha2_sq == eps1 / margin
    const double eps2 = alpha2_sq * eps1 / margin;
    return 0.5 * std::log2(1.0 + eps2);
}

void
ChannelRealization::validate() const
{
    if (g1_sq.size() != h_sq.size() || g2_sq.size() != h_sq.size())
        throw std::invalid_argument("channel arrays must have identical length");
    for (const auto* family : {&h_sq, &g1_sq, &g2_sq})
        for (double v : *family)
            if (!(v >= 0.0))
                throw std::invalid_argument("channel power gains must be non-negative");
}

bool
relay_decodes_s1(double h_sq_n, const Thresholds& thresholds)
{
    return h_sq_n > thresholds.xi1_or_throw();
}

bool
user_decodes_s1(double g_sq, const Thresholds& thresholds)
{
    return g_sq > thresholds.xi1_or_throw();
}

bool
node_decodes_s2(double gain, const Thresholds& thresholds)
{
    return gain > thresholds.xi2;
}

double
s1_sinr(double gain, double alpha1_sq, double alpha2_sq, double rho)
{
    return gain * alpha1_sq / (gain * alpha2_sq + 1.0 / rho);
}

OutageBreakdown
outage_given_relay(const ChannelRealization& realization,
                   RelayIndex relay,
                   const Thresholds& thresholds)
{
    if (relay >= realization.size())
        throw std::out_of_range("relay index " + std::to_string(relay) + " out of range for " +
                                std::to_string(realization.size()) + " relays");

    OutageBreakdown out;
    if (!thresholds.feasible)
    {
        out.o1 = true;
        out.outage = true;
        return out;
    }

    const double h = realization.h_sq[relay];
    const double g1 = realization.g1_sq[relay];
    const double g2 = realization.g2_sq[relay];

    out.o1 = !(relay_decodes_s1(h, thresholds) && user_decodes_s1(g1, thresholds) &&
               user_decodes_s1(g2, thresholds));
    out.o2 = !out.o1 && !(node_decodes_s2(h, thresholds) && node_decodes_s2(g2, thresholds));
    out.outage = out.o1 || out.o2;
    return out;
}

} // namespace nomars
