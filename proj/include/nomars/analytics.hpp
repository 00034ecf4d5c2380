#ifndef NOMARS_ANALYTICS_HPP
#define NOMARS_ANALYTICS_HPP

#include "nomars/model.hpp"

#include <span>
#include <string>
#include <vector>

namespace nomars {

/// Collects non-fatal numerical warnings (clamping, negative expansion terms).
struct Diagnostics
{
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
    bool empty() const { return warnings.empty(); }
};

enum class CurveKind
{
    exact_closed_form,
    high_snr_approx,
    symmetric_maxmin,
    monte_carlo,
};

struct OutageCurvePoint
{
    double rho = 0.0; ///< linear SNR
    double value = 0.0;
    CurveKind kind = CurveKind::exact_closed_form;
};

/// Smallest rate argument on which the conditional CDF is defined: log2(1 + rho xi1 alpha2^2).
double cdf_domain_floor(const SystemConfig& config, const Thresholds& thresholds);

/**
 * CDF of x_n = log2(1 + rho alpha2^2 min(h, g2)) for a relay drawn from the
 * qualified set:
 *
 *   F(x) = e^{2 xi1} (e^{-2 xi1} - e^{-2 y}),  y = (2^x - 1) / (rho alpha2^2).
 *
 * Throws std::domain_error when x is below cdf_domain_floor() and
 * std::logic_error for infeasible thresholds.
 */
double cdf_F(double x, const SystemConfig& config, const Thresholds& thresholds);

/// Same as cdf_F but returns 0 below the domain floor.
double cdf_F_total(double x, const SystemConfig& config, const Thresholds& thresholds);

/// e^{2 xi1} * integral_{xi1}^{y} e^{-max(xi1, z) - z} dz in closed form, y >= xi1.
double q1_closed_form(double xi1, double y);

/// P(|S_r| = 0) = (1 - e^{-3 xi1})^N.
double p_o1(const SystemConfig& config, const Thresholds& thresholds);

/// Binomial mass of the qualified-set size. Throws std::out_of_range when l > N.
double p_sr_size(std::size_t l, const SystemConfig& config, const Thresholds& thresholds);

/// Outage probability of two-stage selection; 1 when the power split is infeasible or N == 0.
double outage_closed_form(const SystemConfig& config, Diagnostics* diag = nullptr);

/// Same, evaluated with caller-supplied thresholds.
double outage_closed_form(const SystemConfig& config,
                          const Thresholds& thresholds,
                          Diagnostics* diag = nullptr);

/// Slope coefficient gamma of the high-SNR expansion of F(2 R2).
double high_snr_gamma(const SystemConfig& config);

/// rho^{-N} sum_l C(N,l) gamma^l [3 eps1 / (alpha1^2 - eps1 alpha2^2)]^{N-l}.
/// Negative expansion terms are reported through `diag`, not corrected.
double outage_high_snr(const SystemConfig& config, Diagnostics* diag = nullptr);

/// Max-min outage when xi1 == xi2 (relative tolerance 1e-9); throws std::domain_error otherwise.
double maxmin_outage_symmetric(const SystemConfig& config);

/// Negated least-squares slope of ln(value) against ln(rho).
/// Throws std::invalid_argument for < 3 points, non-increasing rho, or values outside (0, 1).
double estimate_diversity_order(std::span<const OutageCurvePoint> points);

/// Closed-form (or high-SNR) curve over an SNR grid given in dB.
std::vector<OutageCurvePoint> analytic_curve(const SystemConfig& base,
                                             std::span<const double> snr_db,
                                             CurveKind kind);

} // namespace nomars

#endif // NOMARS_ANALYTICS_HPP
