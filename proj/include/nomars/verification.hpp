#ifndef NOMARS_VERIFICATION_HPP
#define NOMARS_VERIFICATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace nomars {

/// Outcome of one cross-check between the closed forms and an independent route.
struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string summary;
    std::vector<double> z_scores; ///< per-point statistics where the check has them
};

struct VerifyOptions
{
    std::uint64_t seed = 20160901;
    std::uint64_t closed_form_trials = 1'000'000;
    std::uint64_t optimality_trials = 100'000;
    std::uint64_t symmetric_trials = 100'000;
    std::uint64_t diversity_trials = 1'000'000;
    std::uint64_t component_trials = 1'000'000;
    std::uint64_t oma_trials = 100'000;
    unsigned workers = 1;

    /// Fault-injection hook: scales xi1 inside the closed-form predictions only.
    double xi1_fault_scale = 1.0;
};

/// Reference scenario used by the checks: R1 = 0.5, R2 = 2, alpha1^2 = 3/4.
inline constexpr double kReferenceR1 = 0.5;
inline constexpr double kReferenceR2 = 2.0;
inline constexpr double kReferenceAlpha1Sq = 0.75;

/// (estimate - p0) / sqrt(p0 (1 - p0) / n); 0 when both the gap and the null spread vanish.
double null_z_score(double estimate, double p0, std::uint64_t trials);

/// e^{2 xi1} * integral_{xi1}^{y} e^{-max(xi1, z) - z} dz by adaptive Gauss-Kronrod.
double q1_quadrature(double xi1, double y);

/// Upper critical value of the chi-squared law with `dof` degrees of freedom at `level`.
double chi_squared_critical(double dof, double level);

/// Closed-form outage against Monte Carlo for N in {1, 2, 5, 10} over 10..40 dB:
/// |estimate - closed form| <= 3 SE at >= 95% of the grid.
CheckResult check_closed_form_vs_simulation(const VerifyOptions& opts);

/// Two-stage outage indicator equals the exhaustive oracle in every trial.
CheckResult check_two_stage_optimality(const VerifyOptions& opts);

/// xi1 == xi2: symmetric max-min formula equals the closed form, and simulated max-min
/// matches two-stage within 3 paired SE.
CheckResult check_symmetric_case(const VerifyOptions& opts);

/// Closed-form slope over 35..50 dB is N +- 0.3 for N = 1..3; random selection gives 1 +- 0.3.
CheckResult check_diversity_order(const VerifyOptions& opts);

/// High-SNR approximation over exact outage lies in [0.8, 1.25] at 40 dB for N <= 3.
CheckResult check_high_snr_approximation(const VerifyOptions& opts);

/// P(|S_r| = 0), the |S_r| histogram (chi-squared, 1%), the conditional CDF F,
/// and the Q1 integral against quadrature.
CheckResult check_component_laws(const VerifyOptions& opts);

/// Two-stage NOMA strictly below OMA at every point >= 20 dB for N = 3,
/// with disjoint 95% intervals at >= 80% of the points.
CheckResult check_noma_vs_oma(const VerifyOptions& opts);

std::vector<CheckResult> run_all_checks(const VerifyOptions& opts);

} // namespace nomars

#endif // NOMARS_VERIFICATION_HPP
