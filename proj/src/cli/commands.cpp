#include "nomars/analytics.hpp"
#include "nomars/cli.hpp"
#include "nomars/verification.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace nomars::cli {

namespace {

/// Raw sweep-style flags before presets and overrides are resolved.
struct SweepFlags
{
    std::optional<std::string> preset;
    std::optional<std::size_t> n_relays;
    std::optional<double> r1;
    std::optional<double> r2;
    std::optional<double> alpha1_sq;
    std::optional<std::string> snr_db;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> strategies;
    std::string out;
    bool json = false;
    unsigned threads = 1;

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--preset", preset, "Scenario preset: fig1 (N=3, with OMA) or fig2 (N=10)");
        cmd.add_option("--n-relays", n_relays, "Number of relays N");
        cmd.add_option("--r1", r1, "Target rate of user 1 [BPCU]");
        cmd.add_option("--r2", r2, "Target rate of user 2 [BPCU]");
        cmd.add_option("--alpha1-sq", alpha1_sq, "Power share of user 1; user 2 gets 1 - alpha1^2");
        cmd.add_option("--snr-db", snr_db, "SNR grid start:stop:step in dB");
        cmd.add_option("--trials", trials, "Monte Carlo trials per SNR point");
        cmd.add_option("--seed", seed, "Master seed");
        cmd.add_option("--strategies", strategies,
                       "Comma list of two_stage,max_min,oracle,random,oma");
        cmd.add_option("--out", out, "Write CSV to this path");
        cmd.add_flag("--json", json, "Print a JSON report on stdout");
        cmd.add_option("--threads", threads, "Worker threads (results do not depend on it)");
    }

    SweepOptions resolve(const SweepOptions& fallback) const
    {
        SweepOptions o = preset ? preset_options(*preset) : fallback;
        if (n_relays)
            o.config.n_relays = *n_relays;
        if (r1)
            o.config.r1 = *r1;
        if (r2)
            o.config.r2 = *r2;
        if (alpha1_sq)
            o.config = SystemConfig::with_power_split(o.config, *alpha1_sq);
        if (snr_db)
            o.snr = parse_snr_grid(*snr_db);
        if (trials)
            o.trials = *trials;
        if (seed)
            o.seed = *seed;
        if (strategies)
            o.strategies = parse_strategy_list(*strategies);
        o.out_csv = out;
        o.json = json;
        o.threads = threads;
        o.validate();
        return o;
    }
};

SweepOptions
default_sweep()
{
    SweepOptions o = preset_options("fig2");
    o.preset.clear();
    return o;
}

CampaignSpec
to_campaign(const SweepOptions& o)
{
    CampaignSpec spec;
    spec.config = o.config;
    spec.snr = o.snr;
    spec.trials = o.trials;
    spec.master_seed = o.seed;
    spec.strategies = o.strategies;
    return spec;
}

void
write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot open '" + path + "' for writing");
    f << content;
    if (!f)
        throw UsageError("failed writing '" + path + "'");
}

void
print_summary(const OutageStats& stats, std::ostream& os)
{
    os << std::left << std::setw(10) << "strategy" << std::right << std::setw(8) << "SNR[dB]"
       << std::setw(14) << "outage" << std::setw(28) << "95% CI" << "  closed form"
       << "\n";
    for (const auto& row : stats.rows())
    {
        SystemConfig c = stats.spec().config;
        c.rho = row.rho;
        std::string closed;
        if (row.strategy == Strategy::two_stage || row.strategy == Strategy::oracle)
            closed = format_number(outage_closed_form(c));
        std::ostringstream ci;
        ci << std::setprecision(4) << "[" << row.ci_lo << ", " << row.ci_hi << "]";
        os << std::left << std::setw(10) << to_string(row.strategy) << std::right << std::setw(8)
           << row.snr_db << std::setw(14) << std::setprecision(5) << row.estimate << std::setw(28)
           << ci.str() << "  " << closed << "\n";
    }
}

void
warn_about(const OutageStats& stats, std::ostream& err)
{
    if (stats.infeasible())
        err << "WARNING: alpha1^2 <= (2^(2 R1) - 1) alpha2^2: the power split cannot support R1, "
               "NOMA outage probability is 1 at every SNR\n";
    std::size_t sparse = 0;
    for (const auto& row : stats.rows())
        if (row.outage_count < 20)
            ++sparse;
    if (sparse > 0)
        err << "warning: " << sparse
            << " point(s) have fewer than 20 outage events; their normal-approximation "
               "intervals are unreliable, raise --trials\n";
}

int
execute_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err)
{
    const OutageStats stats = run_campaign(to_campaign(o), o.threads);
    warn_about(stats, err);

    const std::string csv = render_csv(stats, o);
    if (!o.out_csv.empty())
        write_file(o.out_csv, csv);
    if (!o.out_json.empty())
        write_file(o.out_json, render_json(stats, o).dump(2) + "\n");

    if (o.json)
    {
        out << render_json(stats, o).dump(2) << "\n";
    }
    else if (o.out_csv.empty())
    {
        out << csv;
        print_summary(stats, err);
    }
    else
    {
        print_summary(stats, out);
    }
    return exit_ok;
}

CheckResult
check_sweep_determinism(std::uint64_t seed)
{
    SweepOptions o = preset_options("fig1");
    o.trials = 20'000;
    o.seed = seed;
    o.strategies = {Strategy::two_stage, Strategy::max_min, Strategy::oracle, Strategy::random,
                    Strategy::oma};
    const auto once = render_csv(run_campaign(to_campaign(o), 1), o);
    const auto again = render_csv(run_campaign(to_campaign(o), 1), o);
    const auto parallel = render_csv(run_campaign(to_campaign(o), 4), o);

    CheckResult r{"sweep_determinism", once == again && once == parallel, {}, {}};
    r.summary = r.passed ? "identical CSV across repeats and worker counts"
                         : "CSV differs between runs";
    return r;
}

int
execute_verify(const VerifyOptions& opts, bool json, std::ostream& out)
{
    std::vector<CheckResult> results = run_all_checks(opts);
    results.push_back(check_sweep_determinism(opts.seed));

    bool all = true;
    for (const auto& r : results)
        all = all && r.passed;

    if (json)
    {
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& r : results)
        {
            nlohmann::json z = nlohmann::json::array();
            for (double v : r.z_scores)
                z.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
            checks.push_back(
                {{"name", r.name}, {"passed", r.passed}, {"summary", r.summary}, {"z_scores", z}});
        }
        out << nlohmann::json{{"passed", all}, {"seed", opts.seed}, {"checks", checks}}.dump(2)
            << "\n";
    }
    else
    {
        for (const auto& r : results)
            out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.summary << "\n";
        out << (all ? "all checks passed" : "verification FAILED") << "\n";
    }
    return all ? exit_ok : exit_verification_failed;
}

int
execute_diversity(const SweepOptions& o, bool json, std::ostream& out, std::ostream& err)
{
    const auto grid = o.snr.points();
    if (grid.back() - grid.front() < 15.0)
        throw UsageError("diversity estimation needs an SNR grid spanning at least 15 dB");
    if (grid.size() < 3)
        throw UsageError("diversity estimation needs at least 3 SNR points");

    const OutageStats stats = run_campaign(to_campaign(o), o.threads);
    const std::size_t n = o.config.n_relays;

    nlohmann::json report = {{"n_relays", n}, {"snr_db", format_snr_grid(o.snr)},
                             {"trials", o.trials}, {"seed", o.seed}};
    nlohmann::json rows = nlohmann::json::array();
    bool starved = false;

    if (compute_thresholds(o.config).feasible)
    {
        const auto curve = analytic_curve(o.config, grid, CurveKind::exact_closed_form);
        const bool usable = std::all_of(curve.begin(), curve.end(), [](const auto& p) {
            return p.value > 0.0 && p.value < 1.0;
        });
        if (usable)
            rows.push_back({{"curve", "closed_form"},
                            {"estimate", estimate_diversity_order(curve)},
                            {"expected", n}});
    }

    for (Strategy s : o.strategies)
    {
        std::vector<OutageCurvePoint> mc;
        bool usable = true;
        for (std::size_t k = 0; k < grid.size(); ++k)
        {
            const auto p = stats.at(s, k);
            if (p.outage_count == 0 || p.outage_count == p.trials)
                usable = false;
            mc.push_back({p.rho, p.estimate, CurveKind::monte_carlo});
        }
        nlohmann::json row = {{"curve", std::string(to_string(s))}};
        if (s == Strategy::two_stage || s == Strategy::oracle)
            row["expected"] = n;
        else if (s == Strategy::random)
            row["expected"] = 1;
        if (usable)
        {
            row["estimate"] = estimate_diversity_order(mc);
        }
        else
        {
            row["estimate"] = nullptr;
            starved = true;
            err << "error: " << to_string(s)
                << " curve has a point with no outage events (or only outages); raise --trials "
                   "or lower the SNR ceiling\n";
        }
        rows.push_back(row);
    }
    report["curves"] = rows;

    if (json)
    {
        out << report.dump(2) << "\n";
    }
    else
    {
        out << "diversity order, N=" << n << ", SNR " << format_snr_grid(o.snr) << " dB\n";
        for (const auto& r : rows)
        {
            out << "  " << std::left << std::setw(12) << r["curve"].get<std::string>() << " ";
            if (r["estimate"].is_null())
                out << "n/a";
            else
                out << std::setprecision(4) << r["estimate"].get<double>();
            if (r.contains("expected"))
                out << "  (expected " << r["expected"].get<std::size_t>() << ")";
            out << "\n";
        }
    }
    return starved ? exit_insufficient_data : exit_ok;
}

} // namespace

int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Relay selection for cooperative NOMA: closed-form outage analysis and "
                 "seeded Monte Carlo"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "Simulate outage over an SNR grid and emit CSV");
    sweep_flags.attach(*sweep);

    bool verify_json = false;
    bool verify_quick = false;
    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "Cross-check closed forms against simulation");
    verify->add_flag("--json", verify_json, "Machine-readable report");
    verify->add_flag("--quick", verify_quick, "Ten times fewer trials per check");
    verify->add_option("--seed", verify_opts.seed, "Master seed");
    verify->add_option("--threads", verify_opts.workers, "Worker threads");
    verify->add_option("--inject-xi1-scale", verify_opts.xi1_fault_scale)->group("");

    SweepFlags diversity_flags;
    auto* diversity = app.add_subcommand("diversity", "Estimate diversity order from outage slopes");
    diversity_flags.attach(*diversity);

    std::string experiment_path;
    auto* run_cmd = app.add_subcommand("run", "Execute a JSON experiment file");
    run_cmd->add_option("--experiment", experiment_path, "Experiment file")->required();

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*sweep)
            return execute_sweep(sweep_flags.resolve(default_sweep()), out, err);

        if (*verify)
        {
            if (verify_quick)
            {
                for (auto* t : {&verify_opts.closed_form_trials, &verify_opts.optimality_trials,
                                &verify_opts.symmetric_trials, &verify_opts.diversity_trials,
                                &verify_opts.component_trials, &verify_opts.oma_trials})
                    *t /= 10;
            }
            return execute_verify(verify_opts, verify_json, out);
        }

        if (*diversity)
        {
            SweepOptions fallback = default_sweep();
            fallback.config.n_relays = 2;
            fallback.snr = {35.0, 50.0, 2.5};
            fallback.trials = 1'000'000;
            fallback.strategies = {Strategy::two_stage, Strategy::random};
            return execute_diversity(diversity_flags.resolve(fallback), diversity_flags.json, out,
                                     err);
        }

        if (*run_cmd)
        {
            std::ifstream f(experiment_path);
            if (!f)
                throw UsageError("cannot open experiment file '" + experiment_path + "'");
            nlohmann::json doc;
            try
            {
                doc = nlohmann::json::parse(f);
            }
            catch (const nlohmann::json::parse_error& e)
            {
                throw UsageError(std::string("experiment file is not valid JSON: ") + e.what());
            }
            return execute_sweep(load_experiment(doc), out, err);
        }
    }
    catch (const UsageError& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

} // namespace nomars::cli
