#include "nomars/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nomars {

namespace {

constexpr double kClampWarnTolerance = 1e-9;
constexpr double kSymmetricTolerance = 1e-9;

double
clamp_probability(double p, const char* what, Diagnostics* diag)
{
    if (diag && (p < -kClampWarnTolerance || p > 1.0 + kClampWarnTolerance))
    {
        std::ostringstream msg;
        msg << what << ": clamped " << p << " into [0, 1]";
        diag->warn(msg.str());
    }
    return std::clamp(p, 0.0, 1.0);
}

/// P(min(h, g2) < y | h > xi1, g2 > xi1) = 1 - e^{-2 (y - xi1)}.
double
conditional_min_cdf(double y, double xi1)
{
    return std::clamp(-std::expm1(-2.0 * (y - xi1)), 0.0, 1.0);
}

double
rate_to_gain(double x, const SystemConfig& config)
{
    return std::expm1(x * std::log(2.0)) / (config.rho * config.alpha2_sq);
}

double
log_sum_exp(std::span<const double> terms)
{
    const double peak = *std::max_element(terms.begin(), terms.end());
    if (peak == -std::numeric_limits<double>::infinity())
        return peak;
    double sum = 0.0;
    for (double t : terms)
        sum += std::exp(t - peak);
    return peak + std::log(sum);
}

/// ln C(n, k) for k = 0..n, built by the multiplicative recurrence.
std::vector<double>
log_binomials(std::size_t n)
{
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        out[k + 1] = out[k] + std::log(static_cast<double>(n - k)) -
                     std::log(static_cast<double>(k + 1));
    return out;
}

} // namespace

double
cdf_domain_floor(const SystemConfig& config, const Thresholds& thresholds)
{
    return std::log2(1.0 + config.rho * thresholds.xi1_or_throw() * config.alpha2_sq);
}

double
cdf_F(double x, const SystemConfig& config, const Thresholds& thresholds)
{
    const double floor = cdf_domain_floor(config, thresholds);
    if (x < floor - 1e-12 * std::max(1.0, std::abs(floor)))
    {
        std::ostringstream msg;
        msg << "rate argument " << x << " is below the domain floor " << floor;
        throw std::domain_error(msg.str());
    }
    if (std::isinf(x) && x > 0)
        return 1.0;
    return conditional_min_cdf(rate_to_gain(x, config), *thresholds.xi1);
}

double
cdf_F_total(double x, const SystemConfig& config, const Thresholds& thresholds)
{
    const double xi1 = thresholds.xi1_or_throw();
    if (std::isinf(x) && x > 0)
        return 1.0;
    return conditional_min_cdf(rate_to_gain(x, config), xi1);
}

double
q1_closed_form(double xi1, double y)
{
    if (y < xi1)
        throw std::domain_error("q1 requires y >= xi1");
    // 0.5 e^{2 xi1} (e^{-2 xi1} - e^{-2 y}) written to keep precision when y ~ xi1.
    return -0.5 * std::expm1(-2.0 * (y - xi1));
}

double
p_o1(const SystemConfig& config, const Thresholds& thresholds)
{
    const double per_relay = -std::expm1(-3.0 * thresholds.xi1_or_throw());
    return std::pow(per_relay, static_cast<double>(config.n_relays));
}

double
p_sr_size(std::size_t l, const SystemConfig& config, const Thresholds& thresholds)
{
    const std::size_t n = config.n_relays;
    if (l > n)
        throw std::out_of_range("qualified-set size exceeds the number of relays");

    const double xi1 = thresholds.xi1_or_throw();
    const double log_fail = std::log(-std::expm1(-3.0 * xi1));
    const double lc = log_binomials(n)[l];
    const double log_mass = lc + static_cast<double>(l) * (-3.0 * xi1) +
                            (n - l == 0 ? 0.0 : static_cast<double>(n - l) * log_fail);
    return std::exp(log_mass);
}

double
outage_closed_form(const SystemConfig& config, Diagnostics* diag)
{
    return outage_closed_form(config, compute_thresholds(config), diag);
}

double
outage_closed_form(const SystemConfig& config, const Thresholds& thresholds, Diagnostics* diag)
{
    const std::size_t n = config.n_relays;
    if (!thresholds.feasible || n == 0)
        return 1.0;

    const double xi1 = *thresholds.xi1;
    const double f = cdf_F_total(2.0 * config.r2, config, thresholds);
    const double log_f = f > 0.0 ? std::log(f) : -std::numeric_limits<double>::infinity();
    const double log_fail = std::log(-std::expm1(-3.0 * xi1));
    const auto lc = log_binomials(n);

    // Terms reach rho^{-N} at high SNR; sum them in log space.
    std::vector<double> terms(n + 1);
    for (std::size_t l = 0; l <= n; ++l)
    {
        const double kept = l == 0 ? 0.0 : static_cast<double>(l) * (log_f - 3.0 * xi1);
        const double lost = l == n ? 0.0 : static_cast<double>(n - l) * log_fail;
        terms[l] = lc[l] + kept + lost;
    }
    return clamp_probability(std::exp(log_sum_exp(terms)), "outage_closed_form", diag);
}

double
high_snr_gamma(const SystemConfig& config)
{
    const Thresholds t = compute_thresholds(config);
    t.xi1_or_throw();
    const double margin = config.alpha1_sq - t.eps1 * config.alpha2_sq;
    return 2.0 * t.eps2 / config.alpha2_sq - 2.0 * t.eps1 / margin;
}

double
outage_high_snr(const SystemConfig& config, Diagnostics* diag)
{
    const Thresholds t = compute_thresholds(config);
    t.xi1_or_throw();
    const double margin = config.alpha1_sq - t.eps1 * config.alpha2_sq;
    const double gamma = high_snr_gamma(config);
    const double o1_slope = 3.0 * t.eps1 / margin;

    if (diag && gamma < 0.0)
    {
        std::ostringstream msg;
        msg << "outage_high_snr: gamma = " << gamma
            << " is negative; odd-order expansion terms are negative";
        diag->warn(msg.str());
    }

    // Fold rho^{-N} into each base so that large N neither overflows nor underflows early.
    const std::size_t n = config.n_relays;
    const double a = gamma / config.rho;
    const double b = o1_slope / config.rho;
    double sum = 0.0;
    double binom = 1.0;
    for (std::size_t l = 0; l <= n; ++l)
    {
        sum += binom * std::pow(a, static_cast<double>(l)) *
               std::pow(b, static_cast<double>(n - l));
        binom = binom * static_cast<double>(n - l) / static_cast<double>(l + 1);
    }
    return sum;
}

double
maxmin_outage_symmetric(const SystemConfig& config)
{
    const Thresholds t = compute_thresholds(config);
    const double xi1 = t.xi1_or_throw();
    if (std::abs(xi1 - t.xi2) > kSymmetricTolerance * std::max(xi1, t.xi2))
        throw std::domain_error("symmetric formula invalid when xi1 != xi2");
    return std::pow(-std::expm1(-3.0 * xi1), static_cast<double>(config.n_relays));
}

double
estimate_diversity_order(std::span<const OutageCurvePoint> points)
{
    if (points.size() < 3)
        throw std::invalid_argument("diversity fit needs at least 3 points");

    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        const auto& p = points[i];
        if (i > 0 && !(p.rho > points[i - 1].rho))
            throw std::invalid_argument("SNR values must be strictly increasing");
        if (!(p.rho > 0.0))
            throw std::invalid_argument("SNR values must be positive");
        if (!(p.value > 0.0 && p.value < 1.0))
            throw std::invalid_argument("outage values must lie strictly inside (0, 1)");
        mean_x += std::log(p.rho);
        mean_y += std::log(p.value);
    }
    const double count = static_cast<double>(points.size());
    mean_x /= count;
    mean_y /= count;

    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& p : points)
    {
        const double dx = std::log(p.rho) - mean_x;
        sxy += dx * (std::log(p.value) - mean_y);
        sxx += dx * dx;
    }
    return -sxy / sxx;
}

std::vector<OutageCurvePoint>
analytic_curve(const SystemConfig& base, std::span<const double> snr_db, CurveKind kind)
{
    std::vector<OutageCurvePoint> curve;
    curve.reserve(snr_db.size());
    for (double db : snr_db)
    {
        SystemConfig c = base;
        c.rho = db_to_linear(db);
        double value = 0.0;
        switch (kind)
        {
        case CurveKind::exact_closed_form:
            value = outage_closed_form(c);
            break;
        case CurveKind::high_snr_approx:
            value = outage_high_snr(c);
            break;
        case CurveKind::symmetric_maxmin:
            value = maxmin_outage_symmetric(c);
            break;
        case CurveKind::monte_carlo:
            throw std::invalid_argument("Monte Carlo curves come from the simulation engine");
        }
        curve.push_back({c.rho, value, kind});
    }
    return curve;
}

} // namespace nomars
