#include "clmm/cli.hpp"

#include "clmm/errors.hpp"
#include "clmm/pool.hpp"
#include "clmm/position_analytics.hpp"
#include "clmm/replay.hpp"
#include "clmm/risk_metrics.hpp"
#include "clmm/stochastic.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#ifndef CLMM_VERSION
#define CLMM_VERSION "0.0.0"
#endif

namespace clmm::cli {

namespace fs = std::filesystem;

namespace {

/// Bad flag values detected after CLI11 accepted the syntax.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output directory or file that cannot be written.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Resolved flag values recorded in the comment line of every output file.
class Provenance {
public:
    explicit Provenance(std::string command) : command_(std::move(command)) {}

    template <typename T>
    void add(const std::string& key, const T& value) {
        flags_ += fmt::format(" --{}={}", key, value);
    }

    void add_list(const std::string& key, const std::vector<double>& values) {
        flags_ += fmt::format(" --{}={}", key, fmt::join(values, ","));
    }

    void set_seed(std::uint64_t seed) { seed_ = seed; }

    std::string str() const {
        std::string s = fmt::format("clmm {}; command={}; flags:{}", CLMM_VERSION, command_, flags_);
        s += seed_ ? fmt::format("; seed={}", *seed_) : std::string("; seed=none");
        return s;
    }

private:
    std::string command_;
    std::string flags_;
    std::optional<std::uint64_t> seed_;
};

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create output directory " + dir.string() + ": " + ec.message());
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path.string());
    return out;
}

void finish_output(std::ofstream& out, const fs::path& dir, const std::string& name) {
    out.flush();
    if (!out) throw OutputError("write failed for " + (dir / name).string());
}

template <typename Fn>
void write_file(const fs::path& dir, const std::string& name, Fn&& body) {
    auto out = open_output(dir, name);
    body(out);
    finish_output(out, dir, name);
}

std::string alpha_tag(double alpha) { return fmt::format("{:g}", alpha); }

// ---------------------------------------------------------------- options --

struct GbmOptions {
    stochastic::GbmParams params;
    unsigned threads = 0;
    bool first_passage = false;

    stochastic::ItmMode mode() const {
        return first_passage ? stochastic::ItmMode::FirstPassage : stochastic::ItmMode::Marginal;
    }
};

void add_gbm_options(CLI::App* sub, GbmOptions& o) {
    sub->add_option("--sigma", o.params.sigma, "Annual volatility")->capture_default_str();
    sub->add_option("--mu", o.params.mu, "Annual drift")->capture_default_str();
    sub->add_option("--days", o.params.horizon_days, "Horizon in days")->capture_default_str();
    sub->add_option("--step-days", o.params.step_days, "Time step in days")->capture_default_str();
    sub->add_option("--paths", o.params.n_paths, "Number of simulated paths")->capture_default_str();
    sub->add_option("--seed", o.params.seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    sub->add_flag("--first-passage", o.first_passage, "Count a path in range only while it never left");
}

void record_gbm(Provenance& p, const GbmOptions& o) {
    p.add("sigma", o.params.sigma);
    p.add("mu", o.params.mu);
    p.add("days", o.params.horizon_days);
    p.add("step-days", o.params.step_days);
    p.add("paths", o.params.n_paths);
    p.add("mode", o.first_passage ? "first-passage" : "marginal");
    p.set_seed(o.params.seed);
}

void validate_gbm(const GbmOptions& o) {
    try {
        o.params.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

void validate_alphas(const std::vector<double>& alphas) {
    if (alphas.empty()) throw UsageError("--alpha needs at least one value");
    for (double a : alphas) {
        if (!(a > 1.0) || !std::isfinite(a)) throw UsageError(fmt::format("alpha must be > 1, got {}", a));
    }
}

// --------------------------------------------------------------- commands --

struct IlCurveOptions {
    std::vector<double> alphas{1.1, 4.0, 20.0};
    std::string entry = "center";
    double ratio_min = 0.05;
    double ratio_max = 20.0;
    std::size_t points = 400;
    fs::path out_dir = ".";
};

int cmd_il_curve(const IlCurveOptions& o, std::ostream& out) {
    validate_alphas(o.alphas);
    if (!(o.ratio_min > 0.0) || !(o.ratio_max > o.ratio_min) || o.points < 2) {
        throw UsageError("ratio grid requires 0 < --ratio-min < --ratio-max and --points >= 2");
    }
    const analytics::EntryMode mode = o.entry == "lower"   ? analytics::EntryMode::Lower
                                      : o.entry == "upper" ? analytics::EntryMode::Upper
                                                           : analytics::EntryMode::Center;
    Provenance prov("il-curve");
    prov.add_list("alpha", o.alphas);
    prov.add("entry", o.entry);
    prov.add("ratio-min", o.ratio_min);
    prov.add("ratio-max", o.ratio_max);
    prov.add("points", o.points);

    const auto grid = analytics::ratio_grid(o.ratio_min, o.ratio_max, o.points, true);
    for (double alpha : o.alphas) {
        const analytics::RangeSpec spec{alpha, mode};
        const auto curve = analytics::il_curve(spec, grid);
        const std::string name = o.entry == "center" ? fmt::format("il_alpha_{}.csv", alpha_tag(alpha))
                                                     : fmt::format("il_{}_alpha_{}.csv", o.entry, alpha_tag(alpha));
        write_file(o.out_dir, name,
                   [&](std::ostream& f) { analytics::write_il_curve_csv(f, spec.describe(), curve, prov.str()); });
        fmt::print(out, "wrote {}\n", (o.out_dir / name).string());
    }
    const auto v2 = analytics::il_curve_v2(grid);
    write_file(o.out_dir, "il_v2.csv", [&](std::ostream& f) { analytics::write_il_curve_csv(f, "full", v2, prov.str()); });
    fmt::print(out, "wrote {}\n", (o.out_dir / "il_v2.csv").string());
    return kExitOk;
}

struct ItmOptions {
    GbmOptions gbm;
    std::vector<double> alphas{1.1, 4.0, 20.0};
    fs::path out_dir = ".";
};

std::vector<double> closed_form_curve(const stochastic::GbmParams& p, const std::vector<double>& times, double alpha) {
    std::vector<double> v;
    v.reserve(times.size());
    for (double t : times) v.push_back(stochastic::p_itm_closed_form(p.mu, p.sigma, t, alpha));
    return v;
}

std::vector<stochastic::TimePoint> as_points(const std::vector<double>& times, const std::vector<double>& v) {
    std::vector<stochastic::TimePoint> pts;
    for (std::size_t i = 0; i < times.size(); ++i) pts.push_back({times[i], v[i]});
    return pts;
}

void write_p_itm(std::ostream& f, const stochastic::PathSet& paths, const ItmOptions& o, const Provenance& prov) {
    fmt::print(f, "# {}\nt_days,alpha,p_itm,std_error,closed_form\n", prov.str());
    const double n = static_cast<double>(paths.path_count());
    for (double alpha : o.alphas) {
        const auto mc = stochastic::p_itm(paths, {alpha}, o.gbm.mode());
        const auto cf = closed_form_curve(o.gbm.params, paths.times_days(), alpha);
        for (std::size_t i = 0; i < mc.size(); ++i) {
            const double p = mc[i].value;
            fmt::print(f, "{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", mc[i].t_days, alpha, p,
                       std::sqrt(p * (1.0 - p) / n), cf[i]);
        }
    }
}

void write_time_itm(std::ostream& f, const stochastic::PathSet& paths, const ItmOptions& o, const Provenance& prov) {
    fmt::print(f, "# {}\nt_days,alpha,fraction,closed_form\n", prov.str());
    for (double alpha : o.alphas) {
        const auto mc = stochastic::expected_time_itm(paths, {alpha}, o.gbm.mode());
        const auto cf_p = as_points(paths.times_days(), closed_form_curve(o.gbm.params, paths.times_days(), alpha));
        const auto cf = stochastic::expected_time_itm(cf_p);
        for (std::size_t i = 0; i < mc.size(); ++i) {
            fmt::print(f, "{:.12g},{:.12g},{:.12g},{:.12g}\n", mc[i].t_days, alpha, mc[i].value, cf[i].value);
        }
    }
}

void write_proxy(std::ostream& f, std::span<const stochastic::WidthOptimum> optima, const Provenance& prov) {
    fmt::print(f, "# {}\nt_days,alpha,proxy\n", prov.str());
    for (const auto& w : optima) {
        for (std::size_t i = 0; i < w.alphas.size(); ++i) {
            fmt::print(f, "{:.12g},{:.12g},{:.12g}\n", w.horizon_days, w.alphas[i], w.proxy[i]);
        }
    }
}

int cmd_itm(const ItmOptions& o, bool time_only, std::ostream& out) {
    validate_gbm(o.gbm);
    validate_alphas(o.alphas);
    Provenance prov(time_only ? "time-itm" : "itm");
    record_gbm(prov, o.gbm);
    prov.add_list("alpha", o.alphas);

    const auto paths = stochastic::simulate_paths(o.gbm.params, 1.0, o.gbm.threads);
    if (!time_only) {
        write_file(o.out_dir, "p_itm.csv", [&](std::ostream& f) { write_p_itm(f, paths, o, prov); });
        fmt::print(out, "wrote {}\n", (o.out_dir / "p_itm.csv").string());
    }
    write_file(o.out_dir, "time_itm.csv", [&](std::ostream& f) { write_time_itm(f, paths, o, prov); });
    fmt::print(out, "wrote {}\n", (o.out_dir / "time_itm.csv").string());
    if (!time_only) {
        const double horizon = paths.times_days().back();
        const std::vector<double> horizons{horizon};
        const auto optima = stochastic::optimal_width(paths, horizons, stochastic::alpha_grid(), o.gbm.mode());
        write_file(o.out_dir, "fee_proxy.csv", [&](std::ostream& f) { write_proxy(f, optima, prov); });
        fmt::print(out, "wrote {}\n", (o.out_dir / "fee_proxy.csv").string());
    }
    return kExitOk;
}

struct WidthOptions {
    GbmOptions gbm;
    std::vector<double> horizons{1.0, 10.0, 30.0};
    double alpha_min = 1.01;
    double alpha_max = 20.0;
    std::size_t alpha_points = 200;
    fs::path out_dir = ".";
};

int cmd_optimal_width(WidthOptions o, std::ostream& out) {
    if (o.horizons.empty()) throw UsageError("--horizons needs at least one value");
    for (double h : o.horizons) {
        if (!(h > 0.0) || !std::isfinite(h)) throw UsageError(fmt::format("horizon must be positive, got {}", h));
    }
    if (!(o.alpha_min > 1.0) || !(o.alpha_max > o.alpha_min) || o.alpha_points < 2) {
        throw UsageError("alpha grid requires 1 < --alpha-min < --alpha-max and --alpha-points >= 2");
    }
    const double longest = *std::max_element(o.horizons.begin(), o.horizons.end());
    o.gbm.params.horizon_days = std::max(o.gbm.params.horizon_days, static_cast<int>(std::ceil(longest)));
    validate_gbm(o.gbm);

    Provenance prov("optimal-width");
    record_gbm(prov, o.gbm);
    prov.add_list("horizons", o.horizons);
    prov.add("alpha-min", o.alpha_min);
    prov.add("alpha-max", o.alpha_max);
    prov.add("alpha-points", o.alpha_points);

    const auto alphas = stochastic::alpha_grid(o.alpha_min, o.alpha_max, o.alpha_points);
    std::vector<stochastic::WidthOptimum> optima;
    try {
        optima = stochastic::optimal_width(o.gbm.params, o.horizons, alphas, o.gbm.mode(), o.gbm.threads);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    write_file(o.out_dir, "fee_proxy.csv", [&](std::ostream& f) { write_proxy(f, optima, prov); });
    write_file(o.out_dir, "optimal_width.csv", [&](std::ostream& f) {
        fmt::print(f, "# {}\nt_days,alpha_star,argmax_index,interior\n", prov.str());
        for (const auto& w : optima) {
            fmt::print(f, "{:.12g},{:.12g},{},{}\n", w.horizon_days, w.alpha_star, w.argmax_index, w.interior() ? 1 : 0);
        }
    });
    for (const auto& w : optima) {
        fmt::print(out, "T={:g} days  alpha*={:.6g}{}\n", w.horizon_days, w.alpha_star,
                   w.interior() ? "" : "  (grid edge)");
    }
    return kExitOk;
}

struct ReplayCliOptions {
    fs::path events;
    fs::path pool;
    fs::path out_dir = ".";
    std::int64_t day_anchor = 0;
    std::string itm = "daily";
    int window = 30;
    double min_value = 1e-4;
    std::int64_t min_lifetime = 30;
    double level = 0.05;
};

replay::ItmAccounting itm_mode(const std::string& s) {
    return s == "per-event" ? replay::ItmAccounting::PerEvent : replay::ItmAccounting::Daily;
}

void validate_report_options(int window, double min_value, double level) {
    if (window < 1) throw UsageError("--window must be at least 1");
    if (!(min_value >= 0.0)) throw UsageError("--min-value must be non-negative");
    if (!(level > 0.0 && level <= 1.0)) throw UsageError("--level must lie in (0, 1]");
}

Provenance replay_provenance(const char* command, const ReplayCliOptions& o) {
    Provenance prov(command);
    prov.add("events", o.events.filename().string());
    prov.add("pool", o.pool.filename().string());
    prov.add("day-anchor", o.day_anchor);
    prov.add("itm", o.itm);
    prov.add("window", o.window);
    prov.add("min-value", o.min_value);
    prov.add("min-lifetime", o.min_lifetime);
    prov.add("level", o.level);
    prov.add("schema", replay::kSchemaVersion);
    return prov;
}

replay::ReplayResult load_and_run(const ReplayCliOptions& o) {
    const PoolConfig config = load_pool_config(o.pool);
    const auto events = replay::load_events(o.events);
    return replay::run(config, events, {o.day_anchor, itm_mode(o.itm)});
}

int cmd_replay(const ReplayCliOptions& o, std::ostream& out) {
    validate_report_options(o.window, o.min_value, o.level);
    const Provenance prov = replay_provenance("replay", o);
    const std::string p = prov.str();
    const auto result = load_and_run(o);

    write_file(o.out_dir, "ledger.csv", [&](std::ostream& f) { replay::write_ledger_csv(f, result.ledgers, p); });
    write_file(o.out_dir, "positions.csv",
               [&](std::ostream& f) { replay::write_positions_csv(f, result.ledgers, itm_mode(o.itm), p); });
    write_file(o.out_dir, "swaps.csv", [&](std::ostream& f) { replay::write_swaps_csv(f, result.swaps, p); });
    write_file(o.out_dir, "days.csv", [&](std::ostream& f) { replay::write_days_csv(f, result.days, p); });
    std::vector<replay::WindowStats> stats;
    if (!result.ledgers.empty()) stats = replay::pool_stats(result.ledgers, result.days, o.window, o.min_value);
    write_file(o.out_dir, "pool_stats.csv", [&](std::ostream& f) { replay::write_pool_stats_csv(f, stats, p); });
    const auto risk =
        replay::risk_report(result.ledgers, {o.min_lifetime, o.min_value, o.level, itm_mode(o.itm)});
    write_file(o.out_dir, "risk.csv", [&](std::ostream& f) { replay::write_risk_csv(f, risk, p); });

    const TokenAmounts paid = result.pool.fees_paid_total();
    const TokenAmounts accounted = replay::fees_accounted(result);
    fmt::print(out, "positions={} swaps={} day_closes={} risk_rows={}\n", result.ledgers.size(), result.swaps.size(),
               result.days.size(), risk.size());
    fmt::print(out, "fees paid x={:.12g} y={:.12g}; accounted x={:.12g} y={:.12g}\n", paid.x, paid.y, accounted.x,
               accounted.y);
    fmt::print(out, "wrote ledger.csv positions.csv swaps.csv days.csv pool_stats.csv risk.csv to {}\n",
               o.out_dir.string());
    return kExitOk;
}

int cmd_pool_stats(const ReplayCliOptions& o, std::ostream& out) {
    validate_report_options(o.window, o.min_value, o.level);
    const Provenance prov = replay_provenance("pool-stats", o);
    const auto result = load_and_run(o);
    const auto stats = replay::pool_stats(result.ledgers, result.days, o.window, o.min_value);
    write_file(o.out_dir, "pool_stats.csv",
               [&](std::ostream& f) { replay::write_pool_stats_csv(f, stats, prov.str()); });
    fmt::print(out, "windows={} wrote {}\n", stats.size(), (o.out_dir / "pool_stats.csv").string());
    return kExitOk;
}

struct MetricsOptions {
    fs::path ledger;
    fs::path prices;
    fs::path returns;
    fs::path out_dir = ".";
    double min_value = 1e-4;
    std::int64_t min_lifetime = 30;
    double level = 0.05;
};

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

std::vector<double> values_of(const std::vector<std::pair<std::int64_t, double>>& rows) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r.second);
    return v;
}

int cmd_metrics(const MetricsOptions& o, std::ostream& out) {
    validate_report_options(1, o.min_value, o.level);
    const int given = !o.ledger.empty() + !o.prices.empty() + !o.returns.empty();
    if (given != 1) throw UsageError("give exactly one of --ledger, --prices, --returns");

    Provenance prov("metrics");
    prov.add("min-value", o.min_value);
    prov.add("min-lifetime", o.min_lifetime);
    prov.add("level", o.level);

    if (!o.ledger.empty()) {
        prov.add("ledger", o.ledger.filename().string());
        auto in = open_input(o.ledger);
        const auto ledgers = replay::read_ledger_csv(in);
        const auto rows = replay::risk_report(ledgers, {o.min_lifetime, o.min_value, o.level, replay::ItmAccounting::Daily});
        write_file(o.out_dir, "risk.csv", [&](std::ostream& f) { replay::write_risk_csv(f, rows, prov.str()); });
        fmt::print(out, "positions={} kept={} wrote {}\n", ledgers.size(), rows.size(),
                   (o.out_dir / "risk.csv").string());
    } else if (!o.prices.empty()) {
        prov.add("prices", o.prices.filename().string());
        auto in = open_input(o.prices);
        const auto rows = risk::read_day_values(in);
        risk::PriceSeries series;
        for (const auto& [d, v] : rows) {
            series.days.push_back(d);
            series.prices.push_back(v);
        }
        series.validate();
        const double vol = risk::realized_volatility(series.prices);
        write_file(o.out_dir, "volatility.csv", [&](std::ostream& f) {
            fmt::print(f, "# {}\nobservations,realized_volatility\n{},{:.12g}\n", prov.str(), rows.size(), vol);
        });
        fmt::print(out, "realized_volatility={:.6g}\n", vol);
    } else {
        prov.add("returns", o.returns.filename().string());
        auto in = open_input(o.returns);
        const auto rows = risk::read_day_values(in);
        risk::ReturnSeries series;
        for (const auto& [d, v] : rows) {
            series.days.push_back(d);
            series.returns.push_back(v);
        }
        series.validate();
        const auto r = values_of(rows);
        const auto stats = risk::return_stats(r);
        const double tail = risk::cvar(r, o.level);
        write_file(o.out_dir, "return_stats.csv", [&](std::ostream& f) {
            fmt::print(f, "# {}\nobservations,mean_daily,vol_daily,cvar\n{},{:.12g},{:.12g},{:.12g}\n", prov.str(),
                       r.size(), stats.mean_daily, stats.vol_daily, tail);
        });
        fmt::print(out, "mean_daily={:.6g} vol_daily={:.6g} cvar={:.6g}\n", stats.mean_daily, stats.vol_daily, tail);
    }
    return kExitOk;
}

// ---------------------------------------------------------- error report --

void report(std::ostream& err, const char* kind, const std::string& message,
            std::optional<std::size_t> line = std::nullopt, std::optional<std::string> field = std::nullopt) {
    nlohmann::json j{{"status", "error"}, {"kind", kind}, {"message", message}};
    if (line) j["line"] = *line;
    if (field) j["field"] = *field;
    err << j.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Concentrated-liquidity AMM simulator and LP analytics", "clmm"};
    app.set_version_flag("--version", std::string(CLMM_VERSION));
    app.set_config("--config", "", "TOML config file; sections are named after subcommands");
    app.require_subcommand(1);

    IlCurveOptions il;
    auto* il_cmd = app.add_subcommand("il-curve", "Impermanent loss against price ratio for ranged positions");
    il_cmd->add_option("--alpha", il.alphas, "Range width factors (> 1)")->delimiter(',')->capture_default_str();
    il_cmd->add_option("--entry", il.entry, "Entry price position in the range")
        ->check(CLI::IsMember({"center", "lower", "upper"}))
        ->capture_default_str();
    il_cmd->add_option("--ratio-min", il.ratio_min, "Smallest price ratio")->capture_default_str();
    il_cmd->add_option("--ratio-max", il.ratio_max, "Largest price ratio")->capture_default_str();
    il_cmd->add_option("--points", il.points, "Log-spaced grid points")->capture_default_str();
    il_cmd->add_option("--out-dir", il.out_dir, "Output directory")->capture_default_str();

    ItmOptions itm;
    auto* itm_cmd = app.add_subcommand("itm", "In-range probability, time in range and fee proxy under GBM");
    add_gbm_options(itm_cmd, itm.gbm);
    itm_cmd->add_option("--alpha", itm.alphas, "Range width factors (> 1)")->delimiter(',')->capture_default_str();
    itm_cmd->add_option("--out-dir", itm.out_dir, "Output directory")->capture_default_str();

    ItmOptions time_itm;
    auto* time_cmd = app.add_subcommand("time-itm", "Expected fraction of time in range under GBM");
    add_gbm_options(time_cmd, time_itm.gbm);
    time_cmd->add_option("--alpha", time_itm.alphas, "Range width factors (> 1)")->delimiter(',')->capture_default_str();
    time_cmd->add_option("--out-dir", time_itm.out_dir, "Output directory")->capture_default_str();

    WidthOptions width;
    auto* width_cmd = app.add_subcommand("optimal-width", "Fee-proxy maximising range width per horizon");
    add_gbm_options(width_cmd, width.gbm);
    width_cmd->add_option("--horizons", width.horizons, "Holding horizons in days")
        ->delimiter(',')
        ->capture_default_str();
    width_cmd->add_option("--alpha-min", width.alpha_min, "Smallest alpha on the grid")->capture_default_str();
    width_cmd->add_option("--alpha-max", width.alpha_max, "Largest alpha on the grid")->capture_default_str();
    width_cmd->add_option("--alpha-points", width.alpha_points, "Alpha grid size")->capture_default_str();
    width_cmd->add_option("--out-dir", width.out_dir, "Output directory")->capture_default_str();

    auto add_replay_options = [](CLI::App* sub, ReplayCliOptions& o) {
        sub->add_option("--events", o.events, "Event log (.csv or .jsonl)")->required();
        sub->add_option("--pool", o.pool, "Pool configuration (JSON)")->required();
        sub->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--day-anchor", o.day_anchor, "Unix time of a day boundary")->capture_default_str();
        sub->add_option("--itm", o.itm, "Time-in-range accounting")
            ->check(CLI::IsMember({"daily", "per-event"}))
            ->capture_default_str();
        sub->add_option("--window", o.window, "Statistics window in days")->capture_default_str();
        sub->add_option("--min-value", o.min_value, "Smallest reported position size (Y units)")
            ->capture_default_str();
        sub->add_option("--min-lifetime", o.min_lifetime, "Risk table keeps lifetimes above this many days")
            ->capture_default_str();
        sub->add_option("--level", o.level, "CVaR tail fraction")->capture_default_str();
    };
    ReplayCliOptions rp;
    auto* replay_cmd = app.add_subcommand("replay", "Replay a pool event log into position ledgers");
    add_replay_options(replay_cmd, rp);
    ReplayCliOptions ps;
    auto* stats_cmd = app.add_subcommand("pool-stats", "Windowed pool statistics from an event log");
    add_replay_options(stats_cmd, ps);

    MetricsOptions mt;
    auto* metrics_cmd = app.add_subcommand("metrics", "Risk metrics from a ledger, price or return series");
    auto* ledger_opt = metrics_cmd->add_option("--ledger", mt.ledger, "ledger.csv written by replay");
    auto* prices_opt = metrics_cmd->add_option("--prices", mt.prices, "day,price series");
    auto* returns_opt = metrics_cmd->add_option("--returns", mt.returns, "day,return series");
    ledger_opt->excludes(prices_opt)->excludes(returns_opt);
    prices_opt->excludes(returns_opt);
    metrics_cmd->add_option("--out-dir", mt.out_dir, "Output directory")->capture_default_str();
    metrics_cmd->add_option("--min-value", mt.min_value, "Smallest reported position size")->capture_default_str();
    metrics_cmd->add_option("--min-lifetime", mt.min_lifetime, "Keep lifetimes above this many days")
        ->capture_default_str();
    metrics_cmd->add_option("--level", mt.level, "CVaR tail fraction")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        report(err, "usage_error", e.what());
        return kExitUsage;
    }

    try {
        if (*il_cmd) return cmd_il_curve(il, out);
        if (*itm_cmd) return cmd_itm(itm, false, out);
        if (*time_cmd) return cmd_itm(time_itm, true, out);
        if (*width_cmd) return cmd_optimal_width(width, out);
        if (*replay_cmd) return cmd_replay(rp, out);
        if (*stats_cmd) return cmd_pool_stats(ps, out);
        if (*metrics_cmd) return cmd_metrics(mt, out);
    } catch (const UsageError& e) {
        fmt::print(err, "usage error: {}\n", e.what());
        report(err, "usage_error", e.what());
        return kExitUsage;
    } catch (const ParseError& e) {
        report(err, "parse_error", e.what(), e.line(), e.field());
        return kExitDataError;
    } catch (const OrderingError& e) {
        report(err, "ordering_error", e.what(), e.line());
        return kExitDataError;
    } catch (const replay::ReplayError& e) {
        report(err, "replay_error", e.what());
        return kExitDataError;
    } catch (const OutputError& e) {
        report(err, "output_error", e.what());
        return kExitDataError;
    } catch (const std::exception& e) {
        report(err, "data_error", e.what());
        return kExitDataError;
    }
    return kExitUsage;
}

}  // namespace clmm::cli
