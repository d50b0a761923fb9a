#pragma once

#include "clmm/pool.hpp"
#include "clmm/position_analytics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace clmm::replay {

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr const char* kSchemaVersion = "clmm-replay/1";

enum class EventKind { Mint, Burn, Swap, Collect };

const char* to_string(EventKind kind) noexcept;

/// One row of a pool event log. Rows are ordered by (unix_time, seq).
struct PoolEvent {
    std::uint64_t seq = 0;
    std::int64_t unix_time = 0;
    EventKind kind = EventKind::Swap;
    PositionId position;
    Tick tick_lower = 0;
    Tick tick_upper = 0;
    double liquidity = 0.0;
    /// Logged token amounts. For swaps the output side is compared with the simulator.
    std::optional<double> amount_x;
    std::optional<double> amount_y;
    Token swap_in_token = Token::X;
    double swap_in_amount = 0.0;
    std::size_t line = 0;
};

/// Parses CSV with header
/// seq,unix_time,kind,position_id,tick_lower,tick_upper,liquidity,amount_x,amount_y,swap_in_token,swap_in_amount
/// Empty fields are allowed where a kind does not use them. Validates ordering and references.
std::vector<PoolEvent> parse_events_csv(std::istream& in);

/// Same fields as JSON objects, one per line.
std::vector<PoolEvent> parse_events_jsonl(std::istream& in);

/// Dispatches on extension: .jsonl / .ndjson are JSON lines, anything else CSV.
std::vector<PoolEvent> load_events(const std::filesystem::path& path);

/// Throws OrderingError on out-of-order rows, and on burn/collect of ids that were
/// never minted or already burned, or a repeated mint id.
void validate_events(std::span<const PoolEvent> events);

enum class ItmAccounting {
    Daily,     // in range at the day's close counts the whole day
    PerEvent,  // time-weighted between events
};

struct ReplayOptions {
    /// Day boundaries fall at anchor + k * 86400 seconds (UTC midnight when 0).
    std::int64_t day_anchor = 0;
    ItmAccounting itm = ItmAccounting::Daily;
};

struct DailyRecord {
    std::int64_t day = 0;
    double price = 0.0;
    double position_value = 0.0;  // tokens in the pool valued at the close
    double hold_value = 0.0;       // deposit valued at the close
    double fees_to_date = 0.0;     // collected plus accrued, valued at the close
    double daily_return = 0.0;     // (V_pos + fees - V_hold) / V_hold over the day just closed
    bool in_range = false;
};

struct PositionLedger {
    PositionId id;
    TickRange ticks;
    double width_bps = 0.0;
    analytics::PositionSnapshot snapshot;
    double size = 0.0;  // deposit value at entry, Y units
    std::int64_t mint_time = 0;
    std::optional<std::int64_t> burn_time;
    std::vector<DailyRecord> daily;
    std::int64_t itm_days = 0;
    std::int64_t lifetime_days = 0;
    double itm_seconds = 0.0;
    double lifetime_seconds = 0.0;
    TokenAmounts fees_collected;  // burn proceeds included
    TokenAmounts fees_unclaimed;  // accrued but uncollected when the replay ended
    bool closed = false;
    double exit_price = 0.0;
    TokenAmounts exit_reserves;
    double total_return = 0.0;  // at burn, fees valued at the exit price

    /// Fraction of lifetime in range under the chosen accounting; NaN for zero lifetime.
    double time_itm_fraction(ItmAccounting mode) const;
    std::vector<double> daily_returns() const;
};

struct DayClose {
    std::int64_t day = 0;
    double price = 0.0;
    double volume_y = 0.0;  // swap input valued in Y at the pre-swap price
    std::size_t swaps = 0;
};

struct SwapAudit {
    std::uint64_t seq = 0;
    Token token_in = Token::X;
    double amount_in = 0.0;
    double simulated_out = 0.0;
    std::optional<double> logged_out;
    double fee_paid = 0.0;
    double unfilled = 0.0;
    std::size_t ticks_crossed = 0;

    /// simulated - logged; empty when the log carries no output amount.
    std::optional<double> drift() const;
};

struct ReplayResult {
    Pool pool;
    std::map<PositionId, PositionLedger> ledgers;
    std::vector<DayClose> days;
    std::vector<SwapAudit> swaps;
};

/// Replay failure annotated with the event index and input line.
class ReplayError : public std::runtime_error {
public:
    ReplayError(std::size_t index, std::size_t line, const std::string& what)
        : std::runtime_error("event " + std::to_string(index) + " (line " + std::to_string(line) +
                             "): " + what),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Drives a pool through the events in order. Each live position is recorded at
/// every whole-day close; the day holding the last event is left open.
ReplayResult run(const PoolConfig& config, std::span<const PoolEvent> events,
                 const ReplayOptions& options = {});

std::int64_t day_of(std::int64_t unix_time, std::int64_t anchor) noexcept;

/// Fees collected by ledgers plus fees still accrued in the pool, per token.
TokenAmounts fees_accounted(const ReplayResult& result);

struct WindowStats {
    std::int64_t first_day = 0;
    std::int64_t last_day = 0;
    std::size_t active_positions = 0;
    double median_size = 0.0;
    double mean_size = 0.0;
    double mean_lifetime_days = 0.0;
    double mean_itm_days = 0.0;
    double median_width_bps = 0.0;
    double mean_daily_volume = 0.0;
    double realized_volatility = 0.0;
};

/// Aggregates over consecutive windows of day closes. A position counts in a
/// window when it has a close inside it; lifetime and ITM days are measured up
/// to the window's last day. Positions smaller than min_value are left out.
/// Throws DomainError for an empty ledger set.
std::vector<WindowStats> pool_stats(const std::map<PositionId, PositionLedger>& ledgers,
                                    std::span<const DayClose> days, int window_days = 30,
                                    double min_value = 1e-4);

struct RiskRow {
    PositionId id;
    double mean_daily = 0.0;
    double vol_daily = 0.0;
    double cvar05 = 0.0;
    std::int64_t lifetime_days = 0;
    double time_itm_fraction = 0.0;
    double width_bps = 0.0;
};

struct RiskFilter {
    /// Keep positions whose lifetime exceeds this many days.
    std::int64_t min_lifetime_days = 30;
    double min_value = 1e-4;
    double cvar_level = 0.05;
    ItmAccounting itm = ItmAccounting::Daily;
};

/// Per-position return statistics; positions without daily returns are skipped.
std::vector<RiskRow> risk_report(const std::map<PositionId, PositionLedger>& ledgers,
                                 const RiskFilter& filter = {});

// Output writers. Every file starts with a "# <schema> ..." comment line.
void write_ledger_csv(std::ostream& out, const std::map<PositionId, PositionLedger>& ledgers,
                      const std::string& provenance = {});
void write_positions_csv(std::ostream& out, const std::map<PositionId, PositionLedger>& ledgers,
                         ItmAccounting mode, const std::string& provenance = {});
void write_swaps_csv(std::ostream& out, std::span<const SwapAudit> swaps, const std::string& provenance = {});
void write_days_csv(std::ostream& out, std::span<const DayClose> days, const std::string& provenance = {});
void write_pool_stats_csv(std::ostream& out, std::span<const WindowStats> stats,
                          const std::string& provenance = {});
void write_risk_csv(std::ostream& out, std::span<const RiskRow> rows, const std::string& provenance = {});

/// Rebuilds ledgers (id, width, size, daily records, day counts) from write_ledger_csv output.
std::map<PositionId, PositionLedger> read_ledger_csv(std::istream& in);

}  // namespace clmm::replay
