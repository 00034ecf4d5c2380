#ifndef NOMARS_MODEL_HPP
#define NOMARS_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace nomars {

using RelayIndex = std::size_t;

/**
 * Scenario parameters for one BS, two users and N decode-and-forward relays.
 *
 * Power split is given as squared coefficients (alpha1_sq + alpha2_sq = 1,
 * alpha1_sq >= alpha2_sq). Rates are in bits per channel use, rho is the
 * linear transmit SNR.
 */
struct SystemConfig
{
    std::size_t n_relays = 1;
    double alpha1_sq = 0.75;
    double alpha2_sq = 0.25;
    double r1 = 0.5;
    double r2 = 2.0;
    double rho = 100.0;

    /// Throws std::invalid_argument when a field or the power split is out of range.
    /// n_relays == 0 is accepted unless require_relays is set.
    void validate(bool require_relays = true) const;

    /// Same config with alpha2_sq = 1 - alpha1_sq.
    static SystemConfig with_power_split(SystemConfig base, double alpha1_sq);
};

/// Decoding thresholds on the channel power gain.
struct Thresholds
{
    double eps1 = 0.0;
    double eps2 = 0.0;
    std::optional<double> xi1; ///< absent when the power split cannot support R1
    double xi2 = 0.0;
    bool feasible = false;

    /// Value of xi1; throws std::logic_error when infeasible.
    double xi1_or_throw() const;
};

Thresholds compute_thresholds(const SystemConfig& config);

/// R2 that makes xi2 == xi1 for the given R1 and power split (the symmetric setup).
/// Throws std::invalid_argument when the split is infeasible for R1.
double symmetric_r2(double r1, double alpha1_sq, double alpha2_sq);

/// One draw of all 3N channel power gains.
struct ChannelRealization
{
    std::vector<double> h_sq;  ///< BS -> relay n
    std::vector<double> g1_sq; ///< relay n -> user 1
    std::vector<double> g2_sq; ///< relay n -> user 2

    std::size_t size() const { return h_sq.size(); }

    /// Throws std::invalid_argument on length mismatch or negative gains.
    void validate() const;
};

struct OutageBreakdown
{
    bool o1 = false; ///< s1 lost at the relay or at either user
    bool o2 = false; ///< s1 fine everywhere, s2 lost at the relay or at user 2
    bool outage = false;
};

// Decoding predicates. All comparisons are strict (gain > threshold).
// The s1 checks require feasible thresholds and throw std::logic_error otherwise.
bool relay_decodes_s1(double h_sq_n, const Thresholds& thresholds);
bool user_decodes_s1(double g_sq, const Thresholds& thresholds);
bool node_decodes_s2(double gain, const Thresholds& thresholds);

/// SINR of s1 when the interfering s2 is treated as noise.
double s1_sinr(double gain, double alpha1_sq, double alpha2_sq, double rho);

/// Outage events when `relay` forwards. Infeasible thresholds give o1 = outage = true.
/// Throws std::out_of_range for an invalid relay index.
OutageBreakdown outage_given_relay(const ChannelRealization& realization,
                                   RelayIndex relay,
                                   const Thresholds& thresholds);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace nomars

#endif // NOMARS_MODEL_HPP
