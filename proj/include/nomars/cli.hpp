#ifndef NOMARS_CLI_HPP
#define NOMARS_CLI_HPP

#include "nomars/sim.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nomars::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int
{
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_usage = 2,
    exit_insufficient_data = 3,
};

/// Raised for bad flag values or experiment files; maps to exit code 2.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Everything needed to reproduce one sweep.
struct SweepOptions
{
    std::string preset; ///< empty when no preset was applied
    SystemConfig config;
    SnrGrid snr;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 42;
    std::vector<Strategy> strategies;
    std::string out_csv;
    std::string out_json;
    bool json = false;
    unsigned threads = 1; ///< affects speed only, never output

    void validate() const;
};

/// Defaults for a named preset ("fig1" or "fig2"); throws UsageError otherwise.
SweepOptions preset_options(const std::string& name);

SnrGrid parse_snr_grid(const std::string& text);
std::vector<Strategy> parse_strategy_list(const std::string& text);
std::string format_snr_grid(const SnrGrid& grid);

/// Locale-independent shortest round-trip representation.
std::string format_number(double v);

/// CSV with `# meta:` provenance lines, a header row and one row per (strategy, SNR).
std::string render_csv(const OutageStats& stats, const SweepOptions& opts);

nlohmann::json render_json(const OutageStats& stats, const SweepOptions& opts);

/// Reads a declarative experiment description. Unknown keys and wrong types throw UsageError.
SweepOptions load_experiment(const nlohmann::json& doc);

/// Entry point shared by the executable and the tests. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nomars::cli

#endif // NOMARS_CLI_HPP
