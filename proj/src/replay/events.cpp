#include "clmm/csv.hpp"
#include "clmm/errors.hpp"
#include "clmm/replay.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <unordered_map>

namespace clmm::replay {

namespace {

constexpr std::array<const char*, 11> kColumns{
    "seq",       "unix_time", "kind",     "position_id",   "tick_lower",    "tick_upper",
    "liquidity", "amount_x",  "amount_y", "swap_in_token", "swap_in_amount",
};

EventKind parse_kind(std::string_view s, std::size_t line) {
    if (s == "mint") return EventKind::Mint;
    if (s == "burn") return EventKind::Burn;
    if (s == "swap") return EventKind::Swap;
    if (s == "collect") return EventKind::Collect;
    throw ParseError(line, "kind", "unknown event kind '" + std::string(s) + "'");
}

Token parse_token(std::string_view s, std::size_t line) {
    if (s == "X" || s == "x" || s == "0") return Token::X;
    if (s == "Y" || s == "y" || s == "1") return Token::Y;
    throw ParseError(line, "swap_in_token", "expected X or Y, got '" + std::string(s) + "'");
}

/// Field accessor over one row, independent of the input syntax.
struct Row {
    std::size_t line;
    std::function<std::optional<std::string>(const char*)> text;
    std::function<std::optional<double>(const char*)> number;
};

std::optional<double> optional_number(const Row& row, const char* key) { return row.number(key); }

double required_number(const Row& row, const char* key) {
    auto v = row.number(key);
    if (!v) throw ParseError(row.line, key, "missing value");
    return *v;
}

std::int64_t required_integer(const Row& row, const char* key) {
    const double v = required_number(row, key);
    if (std::trunc(v) != v || std::abs(v) > 9.0e15) throw ParseError(row.line, key, "expected an integer");
    return static_cast<std::int64_t>(v);
}

PoolEvent build_event(const Row& row) {
    PoolEvent ev;
    ev.line = row.line;
    const std::int64_t seq = required_integer(row, "seq");
    if (seq < 0) throw ParseError(row.line, "seq", "must be non-negative");
    ev.seq = static_cast<std::uint64_t>(seq);
    ev.unix_time = required_integer(row, "unix_time");
    auto kind = row.text("kind");
    if (!kind) throw ParseError(row.line, "kind", "missing value");
    ev.kind = parse_kind(*kind, row.line);
    ev.amount_x = optional_number(row, "amount_x");
    ev.amount_y = optional_number(row, "amount_y");

    if (ev.kind != EventKind::Swap) {
        const std::int64_t id = required_integer(row, "position_id");
        if (id < 0) throw ParseError(row.line, "position_id", "must be non-negative");
        ev.position = PositionId{static_cast<std::uint64_t>(id)};
    }
    switch (ev.kind) {
        case EventKind::Mint: {
            const std::int64_t lo = required_integer(row, "tick_lower");
            const std::int64_t hi = required_integer(row, "tick_upper");
            if (lo < -kDefaultTickBound || lo > kDefaultTickBound)
                throw ParseError(row.line, "tick_lower", "outside the tick bound");
            if (hi < -kDefaultTickBound || hi > kDefaultTickBound)
                throw ParseError(row.line, "tick_upper", "outside the tick bound");
            if (lo >= hi) throw ParseError(row.line, "tick_upper", "must exceed tick_lower");
            ev.tick_lower = static_cast<Tick>(lo);
            ev.tick_upper = static_cast<Tick>(hi);
            ev.liquidity = required_number(row, "liquidity");
            if (!(ev.liquidity > 0.0) || !std::isfinite(ev.liquidity))
                throw ParseError(row.line, "liquidity", "must be positive");
            break;
        }
        case EventKind::Swap: {
            auto token = row.text("swap_in_token");
            if (!token) throw ParseError(row.line, "swap_in_token", "missing value");
            ev.swap_in_token = parse_token(*token, row.line);
            ev.swap_in_amount = required_number(row, "swap_in_amount");
            if (!(ev.swap_in_amount >= 0.0) || !std::isfinite(ev.swap_in_amount))
                throw ParseError(row.line, "swap_in_amount", "must be non-negative");
            break;
        }
        case EventKind::Burn:
        case EventKind::Collect: break;
    }
    return ev;
}

}  // namespace

const char* to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::Mint: return "mint";
        case EventKind::Burn: return "burn";
        case EventKind::Swap: return "swap";
        case EventKind::Collect: return "collect";
    }
    return "?";
}

void validate_events(std::span<const PoolEvent> events) {
    std::set<PositionId> live;
    std::set<PositionId> seen;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const PoolEvent& ev = events[i];
        if (i > 0) {
            const PoolEvent& prev = events[i - 1];
            if (ev.unix_time < prev.unix_time ||
                (ev.unix_time == prev.unix_time && ev.seq <= prev.seq)) {
                throw OrderingError(ev.line, "event (time " + std::to_string(ev.unix_time) + ", seq " +
                                                 std::to_string(ev.seq) + ") is out of order");
            }
        }
        const std::string id = std::to_string(ev.position.value);
        switch (ev.kind) {
            case EventKind::Mint:
                if (seen.count(ev.position)) throw OrderingError(ev.line, "position " + id + " minted twice");
                seen.insert(ev.position);
                live.insert(ev.position);
                break;
            case EventKind::Burn:
                if (!live.count(ev.position))
                    throw OrderingError(ev.line, "burn of position " + id + " that is not live");
                live.erase(ev.position);
                break;
            case EventKind::Collect:
                if (!live.count(ev.position))
                    throw OrderingError(ev.line, "collect on position " + id + " that is not live");
                break;
            case EventKind::Swap: break;
        }
    }
}

std::vector<PoolEvent> parse_events_csv(std::istream& in) {
    std::vector<PoolEvent> events;
    std::unordered_map<std::string, std::size_t> column;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (csv::trim(line).empty() || line.front() == '#') continue;
        auto fields = csv::split(line);
        if (column.empty()) {
            for (std::size_t i = 0; i < fields.size(); ++i) column[fields[i]] = i;
            for (const char* name : kColumns) {
                if (!column.count(name)) throw ParseError(line_no, name, "missing column in header");
            }
            continue;
        }
        if (fields.size() != column.size()) {
            throw ParseError(line_no, "<row>", "expected " + std::to_string(column.size()) +
                                                   " fields, got " + std::to_string(fields.size()));
        }
        Row row{line_no,
                [&](const char* key) -> std::optional<std::string> {
                    const std::string& s = fields[column.at(key)];
                    if (s.empty()) return std::nullopt;
                    return s;
                },
                [&](const char* key) -> std::optional<double> {
                    const std::string& s = fields[column.at(key)];
                    if (s.empty()) return std::nullopt;
                    return csv::parse_double(s, line_no, key);
                }};
        events.push_back(build_event(row));
    }
    validate_events(events);
    return events;
}

std::vector<PoolEvent> parse_events_jsonl(std::istream& in) {
    std::vector<PoolEvent> events;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_no, "<row>", e.what());
        }
        if (!obj.is_object()) throw ParseError(line_no, "<row>", "expected a JSON object");
        Row row{line_no,
                [&](const char* key) -> std::optional<std::string> {
                    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
                    if (obj[key].is_string()) return obj[key].get<std::string>();
                    return obj[key].dump();
                },
                [&](const char* key) -> std::optional<double> {
                    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
                    if (obj[key].is_number()) return obj[key].get<double>();
                    if (obj[key].is_string()) return csv::parse_double(obj[key].get<std::string>(), line_no, key);
                    throw ParseError(line_no, key, "expected a number");
                }};
        events.push_back(build_event(row));
    }
    validate_events(events);
    return events;
}

std::vector<PoolEvent> load_events(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open event log " + path.string());
    const auto ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".ndjson") return parse_events_jsonl(in);
    return parse_events_csv(in);
}

}  // namespace clmm::replay
