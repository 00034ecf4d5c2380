#include "nomars/cli.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace nomars::cli {

namespace {

double
parse_double(const std::string& text, const std::string& what)
{
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw UsageError("invalid " + what + " '" + text + "'");
    return v;
}

} // namespace

void
SweepOptions::validate() const
{
    try
    {
        CampaignSpec spec;
        spec.config = config;
        spec.snr = snr;
        spec.trials = trials;
        spec.master_seed = seed;
        spec.strategies = strategies;
        spec.validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw UsageError(e.what());
    }
    if (threads == 0)
        throw UsageError("threads must be at least 1");
}

SweepOptions
preset_options(const std::string& name)
{
    SweepOptions o;
    o.preset = name;
    o.config = SystemConfig::with_power_split({}, 0.75);
    o.config.r1 = 0.5;
    o.config.r2 = 2.0;
    o.snr = {10.0, 40.0, 5.0};
    if (name == "fig1")
    {
        o.config.n_relays = 3;
        o.strategies = {Strategy::two_stage, Strategy::max_min, Strategy::oma};
    }
    else if (name == "fig2")
    {
        o.config.n_relays = 10;
        o.strategies = {Strategy::two_stage, Strategy::max_min};
    }
    else
    {
        throw UsageError("unknown preset '" + name + "' (expected fig1 or fig2)");
    }
    return o;
}

SnrGrid
parse_snr_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(item);
    if (parts.size() != 3)
        throw UsageError("SNR grid must be start:stop:step, got '" + text + "'");

    SnrGrid g{parse_double(parts[0], "SNR start"), parse_double(parts[1], "SNR stop"),
              parse_double(parts[2], "SNR step")};
    try
    {
        (void)g.points();
    }
    catch (const std::invalid_argument& e)
    {
        throw UsageError(e.what());
    }
    return g;
}

std::string
format_snr_grid(const SnrGrid& grid)
{
    return format_number(grid.start_db) + ":" + format_number(grid.stop_db) + ":" +
           format_number(grid.step_db);
}

std::vector<Strategy>
parse_strategy_list(const std::string& text)
{
    std::vector<Strategy> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (item.empty())
            continue;
        Strategy s{};
        try
        {
            s = parse_strategy(item);
        }
        catch (const std::invalid_argument& e)
        {
            throw UsageError(e.what());
        }
        if (std::find(out.begin(), out.end(), s) != out.end())
            throw UsageError("strategy '" + item + "' listed twice");
        out.push_back(s);
    }
    if (out.empty())
        throw UsageError("strategy list is empty");
    return out;
}

SweepOptions
load_experiment(const nlohmann::json& doc)
{
    static const std::set<std::string> kKnown = {
        "preset", "n_relays", "r1",       "r2",      "alpha1_sq", "snr_db",
        "trials", "seed",     "strategies", "out_csv", "out_json",  "threads"};

    if (!doc.is_object())
        throw UsageError("experiment file must contain a JSON object");
    for (const auto& [key, value] : doc.items())
        if (!kKnown.count(key))
            throw UsageError("unknown experiment key '" + key + "'");

    auto require = [&](const char* key, bool ok, const char* type) {
        if (!ok)
            throw UsageError(std::string("experiment key '") + key + "' must be " + type);
    };

    SweepOptions o;
    if (doc.contains("preset"))
    {
        require("preset", doc["preset"].is_string(), "a string");
        o = preset_options(doc["preset"].get<std::string>());
    }
    else
    {
        o = preset_options("fig2");
        o.preset.clear();
    }

    if (doc.contains("n_relays"))
    {
        require("n_relays", doc["n_relays"].is_number_unsigned(), "a non-negative integer");
        o.config.n_relays = doc["n_relays"].get<std::size_t>();
    }
    for (const char* key : {"r1", "r2", "alpha1_sq"})
    {
        if (!doc.contains(key))
            continue;
        require(key, doc[key].is_number(), "a number");
        const double v = doc[key].get<double>();
        if (std::string(key) == "r1")
            o.config.r1 = v;
        else if (std::string(key) == "r2")
            o.config.r2 = v;
        else
            o.config = SystemConfig::with_power_split(o.config, v);
    }
    if (doc.contains("snr_db"))
    {
        const auto& g = doc["snr_db"];
        if (g.is_string())
        {
            o.snr = parse_snr_grid(g.get<std::string>());
        }
        else
        {
            require("snr_db", g.is_object(), "\"start:stop:step\" or {start, stop, step}");
            for (const auto& [key, value] : g.items())
            {
                if (key != "start" && key != "stop" && key != "step")
                    throw UsageError("unknown snr_db key '" + key + "'");
                require("snr_db", value.is_number(), "numeric start/stop/step");
            }
            if (!g.contains("start") || !g.contains("stop") || !g.contains("step"))
                throw UsageError("snr_db needs start, stop and step");
            o.snr = {g["start"].get<double>(), g["stop"].get<double>(), g["step"].get<double>()};
        }
    }
    if (doc.contains("trials"))
    {
        require("trials", doc["trials"].is_number_unsigned(), "a positive integer");
        o.trials = doc["trials"].get<std::uint64_t>();
    }
    if (doc.contains("seed"))
    {
        require("seed", doc["seed"].is_number_unsigned(), "a non-negative integer");
        o.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("strategies"))
    {
        const auto& list = doc["strategies"];
        require("strategies", list.is_array(), "an array of strategy names");
        std::string joined;
        for (const auto& s : list)
        {
            require("strategies", s.is_string(), "an array of strategy names");
            joined += s.get<std::string>() + ",";
        }
        o.strategies = parse_strategy_list(joined);
    }
    for (const char* key : {"out_csv", "out_json"})
    {
        if (!doc.contains(key))
            continue;
        require(key, doc[key].is_string(), "a path string");
        (std::string(key) == "out_csv" ? o.out_csv : o.out_json) = doc[key].get<std::string>();
    }
    if (doc.contains("threads"))
    {
        require("threads", doc["threads"].is_number_unsigned(), "a positive integer");
        o.threads = doc["threads"].get<unsigned>();
    }

    o.validate();
    return o;
}

} // namespace nomars::cli
