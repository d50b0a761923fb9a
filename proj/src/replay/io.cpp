#include "clmm/csv.hpp"
#include "clmm/errors.hpp"
#include "clmm/replay.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <istream>
#include <ostream>
#include <unordered_map>

namespace clmm::replay {

namespace {

// Shortest representation that reads back to the same double.
std::string num(double v) { return fmt::format("{}", v); }

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

void schema_line(std::ostream& out, const char* schema, const std::string& provenance) {
    if (provenance.empty()) {
        fmt::print(out, "# schema={}\n", schema);
    } else {
        fmt::print(out, "# schema={}; {}\n", schema, provenance);
    }
}

const char* token_name(Token t) { return t == Token::X ? "X" : "Y"; }

}  // namespace

void write_ledger_csv(std::ostream& out, const std::map<PositionId, PositionLedger>& ledgers,
                      const std::string& provenance) {
    schema_line(out, "clmm-ledger/1", provenance);
    out << "position_id,day,price,position_value,hold_value,fees_to_date,daily_return,in_range,width_bps,size\n";
    for (const auto& [id, l] : ledgers) {
        for (const auto& r : l.daily) {
            fmt::print(out, "{},{},{},{},{},{},{},{},{},{}\n", id.value, r.day, num(r.price),
                       num(r.position_value), num(r.hold_value), num(r.fees_to_date), num(r.daily_return),
                       r.in_range ? 1 : 0, num(l.width_bps), num(l.size));
        }
    }
}

void write_positions_csv(std::ostream& out, const std::map<PositionId, PositionLedger>& ledgers,
                         ItmAccounting mode, const std::string& provenance) {
    schema_line(out, "clmm-positions/1", provenance);
    out << "position_id,tick_lower,tick_upper,width_bps,liquidity,entry_price,deposit_x,deposit_y,size,"
           "mint_time,burn_time,lifetime_days,itm_days,time_itm_fraction,fees_collected_x,fees_collected_y,"
           "fees_unclaimed_x,fees_unclaimed_y,exit_price,total_return,closed\n";
    for (const auto& [id, l] : ledgers) {
        fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", id.value,
                   l.ticks.lower, l.ticks.upper, num(l.width_bps), num(l.snapshot.liquidity),
                   num(l.snapshot.entry_price), num(l.snapshot.deposit.x), num(l.snapshot.deposit.y),
                   num(l.size), l.mint_time, l.burn_time ? std::to_string(*l.burn_time) : std::string(),
                   l.lifetime_days, l.itm_days, num(l.time_itm_fraction(mode)), num(l.fees_collected.x),
                   num(l.fees_collected.y), num(l.fees_unclaimed.x), num(l.fees_unclaimed.y),
                   l.closed ? num(l.exit_price) : std::string(),
                   l.closed ? num(l.total_return) : std::string(), l.closed ? 1 : 0);
    }
}

void write_swaps_csv(std::ostream& out, std::span<const SwapAudit> swaps, const std::string& provenance) {
    schema_line(out, "clmm-swaps/1", provenance);
    out << "seq,token_in,amount_in,simulated_out,logged_out,drift,fee_paid,unfilled,ticks_crossed\n";
    for (const auto& s : swaps) {
        fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", s.seq, token_name(s.token_in), num(s.amount_in),
                   num(s.simulated_out), num(s.logged_out), num(s.drift()), num(s.fee_paid), num(s.unfilled),
                   s.ticks_crossed);
    }
}

void write_days_csv(std::ostream& out, std::span<const DayClose> days, const std::string& provenance) {
    schema_line(out, "clmm-days/1", provenance);
    out << "day,price,volume_y,swaps\n";
    for (const auto& d : days) fmt::print(out, "{},{},{},{}\n", d.day, num(d.price), num(d.volume_y), d.swaps);
}

void write_pool_stats_csv(std::ostream& out, std::span<const WindowStats> stats, const std::string& provenance) {
    schema_line(out, "clmm-pool-stats/1", provenance);
    out << "first_day,last_day,active_positions,median_size,mean_size,mean_lifetime_days,mean_itm_days,"
           "median_width_bps,mean_daily_volume,realized_volatility\n";
    for (const auto& s : stats) {
        fmt::print(out, "{},{},{},{},{},{},{},{},{},{}\n", s.first_day, s.last_day, s.active_positions,
                   num(s.median_size), num(s.mean_size), num(s.mean_lifetime_days), num(s.mean_itm_days),
                   num(s.median_width_bps), num(s.mean_daily_volume), num(s.realized_volatility));
    }
}

void write_risk_csv(std::ostream& out, std::span<const RiskRow> rows, const std::string& provenance) {
    schema_line(out, "clmm-risk/1", provenance);
    out << "position_id,mean_daily,vol_daily,cvar05,lifetime_days,time_itm_fraction,width_bps\n";
    for (const auto& r : rows) {
        fmt::print(out, "{},{},{},{},{},{},{}\n", r.id.value, num(r.mean_daily), num(r.vol_daily), num(r.cvar05),
                   r.lifetime_days, num(r.time_itm_fraction), num(r.width_bps));
    }
}

std::map<PositionId, PositionLedger> read_ledger_csv(std::istream& in) {
    std::map<PositionId, PositionLedger> ledgers;
    std::unordered_map<std::string, std::size_t> column;
    std::string line;
    std::size_t line_no = 0;
    const char* required[] = {"position_id", "day",          "price",    "position_value", "hold_value",
                              "fees_to_date", "daily_return", "in_range", "width_bps",      "size"};
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (csv::trim(line).empty() || line.front() == '#') continue;
        const auto f = csv::split(line);
        if (column.empty()) {
            for (std::size_t i = 0; i < f.size(); ++i) column[f[i]] = i;
            for (const char* name : required) {
                if (!column.count(name)) throw ParseError(line_no, name, "missing column in header");
            }
            continue;
        }
        if (f.size() != column.size()) throw ParseError(line_no, "<row>", "wrong number of fields");
        auto get = [&](const char* key) -> const std::string& { return f[column.at(key)]; };

        const auto id_raw = csv::parse_int(get("position_id"), line_no, "position_id");
        if (id_raw < 0) throw ParseError(line_no, "position_id", "must be non-negative");
        const PositionId id{static_cast<std::uint64_t>(id_raw)};
        auto [it, inserted] = ledgers.try_emplace(id);
        PositionLedger& l = it->second;
        if (inserted) {
            l.id = id;
            l.width_bps = csv::parse_double(get("width_bps"), line_no, "width_bps");
            l.size = csv::parse_double(get("size"), line_no, "size");
        }
        DailyRecord r;
        r.day = csv::parse_int(get("day"), line_no, "day");
        r.price = csv::parse_double(get("price"), line_no, "price");
        r.position_value = csv::parse_double(get("position_value"), line_no, "position_value");
        r.hold_value = csv::parse_double(get("hold_value"), line_no, "hold_value");
        r.fees_to_date = csv::parse_double(get("fees_to_date"), line_no, "fees_to_date");
        const std::string& ret = get("daily_return");
        r.daily_return = (ret == "nan" || ret == "-nan") ? std::numeric_limits<double>::quiet_NaN()
                                                         : csv::parse_double(ret, line_no, "daily_return");
        r.in_range = csv::parse_int(get("in_range"), line_no, "in_range") != 0;
        if (!l.daily.empty() && r.day <= l.daily.back().day) {
            throw ParseError(line_no, "day", "days must increase within a position");
        }
        l.daily.push_back(r);
        ++l.lifetime_days;
        if (r.in_range) ++l.itm_days;
    }
    return ledgers;
}

}  // namespace clmm::replay
