#include "clmm/errors.hpp"
#include "clmm/replay.hpp"

#include <cmath>
#include <limits>

namespace clmm::replay {

namespace {

TokenAmounts operator+(TokenAmounts a, TokenAmounts b) { return {a.x + b.x, a.y + b.y}; }
TokenAmounts operator-(TokenAmounts a, TokenAmounts b) { return {a.x - b.x, a.y - b.y}; }

/// Basis for the next daily return: what the position held at the previous close.
struct DayBasis {
    TokenAmounts amounts;
    TokenAmounts fees;  // collected + accrued, in tokens
};

class Replayer {
public:
    Replayer(const PoolConfig& config, const ReplayOptions& options)
        : result_{Pool(config), {}, {}, {}}, options_(options) {}

    void apply(std::size_t index, const PoolEvent& ev) {
        const std::int64_t day = day_of(ev.unix_time, options_.day_anchor);
        if (!current_day_) {
            current_day_ = day;
            last_time_ = ev.unix_time;
        }
        advance_clock(ev.unix_time);
        while (*current_day_ < day) {
            close_day(*current_day_);
            ++*current_day_;
        }
        try {
            switch (ev.kind) {
                case EventKind::Mint: mint(ev); break;
                case EventKind::Burn: burn(ev); break;
                case EventKind::Collect: collect(ev); break;
                case EventKind::Swap: swap(ev); break;
            }
        } catch (const std::exception& e) {
            throw ReplayError(index, ev.line, e.what());
        }
    }

    ReplayResult finish() && {
        for (auto& [id, basis] : live_) {
            result_.ledgers.at(id).fees_unclaimed = result_.pool.accrued_fees(id);
        }
        return std::move(result_);
    }

private:
    Pool& pool() { return result_.pool; }

    void advance_clock(std::int64_t t) {
        const double dt = static_cast<double>(t - last_time_);
        if (dt > 0.0) {
            for (auto& [id, basis] : live_) {
                PositionLedger& ledger = result_.ledgers.at(id);
                ledger.lifetime_seconds += dt;
                if (pool().in_range(id)) ledger.itm_seconds += dt;
            }
        }
        last_time_ = t;
    }

    void close_day(std::int64_t day) {
        const double price = pool().price();
        result_.days.push_back({day, price, volume_, swaps_});
        volume_ = 0.0;
        swaps_ = 0;

        for (auto& [id, basis] : live_) {
            PositionLedger& ledger = result_.ledgers.at(id);
            const TokenAmounts amounts = pool().position_amounts(id);
            const TokenAmounts fees = ledger.fees_collected + pool().accrued_fees(id);

            DailyRecord rec;
            rec.day = day;
            rec.price = price;
            rec.position_value = amounts.value_at(price);
            rec.hold_value = ledger.snapshot.deposit.value_at(price);
            rec.fees_to_date = fees.value_at(price);
            rec.in_range = pool().in_range(id);
            const double basis_value = basis.amounts.value_at(price);
            const double fees_today = (fees - basis.fees).value_at(price);
            rec.daily_return = basis_value > 0.0
                                   ? (rec.position_value + fees_today - basis_value) / basis_value
                                   : std::numeric_limits<double>::quiet_NaN();
            ledger.daily.push_back(rec);
            ++ledger.lifetime_days;
            if (rec.in_range) ++ledger.itm_days;
            basis = {amounts, fees};
        }
    }

    void mint(const PoolEvent& ev) {
        const TickRange ticks{ev.tick_lower, ev.tick_upper};
        pool().mint(ev.position, ticks, ev.liquidity);
        const Position& p = pool().position(ev.position);

        PositionLedger ledger;
        ledger.id = ev.position;
        ledger.ticks = ticks;
        ledger.width_bps = ticks.width_bps();
        ledger.snapshot = analytics::PositionSnapshot{p.liquidity, ticks.prices(pool().tick_bound()),
                                                      p.entry_price, p.deposit};
        ledger.size = p.deposit.value_at(p.entry_price);
        ledger.mint_time = ev.unix_time;
        result_.ledgers.emplace(ev.position, std::move(ledger));
        live_.emplace(ev.position, DayBasis{p.deposit, {}});
    }

    void burn(const PoolEvent& ev) {
        const BurnResult r = pool().burn(ev.position);
        PositionLedger& ledger = result_.ledgers.at(ev.position);
        ledger.fees_collected = ledger.fees_collected + r.fees;
        ledger.closed = true;
        ledger.burn_time = ev.unix_time;
        ledger.exit_price = pool().price();
        ledger.exit_reserves = r.reserves;
        const double hold = ledger.snapshot.deposit.value_at(ledger.exit_price);
        ledger.total_return =
            hold > 0.0 ? (r.reserves.value_at(ledger.exit_price) + ledger.fees_collected.value_at(ledger.exit_price) - hold) / hold
                       : std::numeric_limits<double>::quiet_NaN();
        live_.erase(ev.position);
    }

    void collect(const PoolEvent& ev) {
        const TokenAmounts f = pool().collect(ev.position);
        PositionLedger& ledger = result_.ledgers.at(ev.position);
        ledger.fees_collected = ledger.fees_collected + f;
    }

    void swap(const PoolEvent& ev) {
        const double pre_price = pool().price();
        const SwapResult r = pool().swap(ev.swap_in_token, ev.swap_in_amount);

        SwapAudit audit;
        audit.seq = ev.seq;
        audit.token_in = ev.swap_in_token;
        audit.amount_in = r.amount_in;
        audit.simulated_out = r.amount_out;
        const auto& logged = ev.swap_in_token == Token::X ? ev.amount_y : ev.amount_x;
        if (logged) audit.logged_out = std::abs(*logged);
        audit.fee_paid = r.fee_paid;
        audit.unfilled = r.remaining;
        audit.ticks_crossed = r.ticks_crossed.size();
        result_.swaps.push_back(audit);

        volume_ += ev.swap_in_token == Token::Y ? r.amount_in : r.amount_in * pre_price;
        ++swaps_;
    }

    ReplayResult result_;
    ReplayOptions options_;
    std::map<PositionId, DayBasis> live_;
    std::optional<std::int64_t> current_day_;
    std::int64_t last_time_ = 0;
    double volume_ = 0.0;
    std::size_t swaps_ = 0;
};

}  // namespace

std::int64_t day_of(std::int64_t unix_time, std::int64_t anchor) noexcept {
    const std::int64_t shifted = unix_time - anchor;
    std::int64_t d = shifted / kSecondsPerDay;
    if (shifted % kSecondsPerDay != 0 && shifted < 0) --d;
    return d;
}

double PositionLedger::time_itm_fraction(ItmAccounting mode) const {
    if (mode == ItmAccounting::Daily) {
        return lifetime_days > 0 ? static_cast<double>(itm_days) / static_cast<double>(lifetime_days)
                                 : std::numeric_limits<double>::quiet_NaN();
    }
    return lifetime_seconds > 0.0 ? itm_seconds / lifetime_seconds : std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> PositionLedger::daily_returns() const {
    std::vector<double> r;
    r.reserve(daily.size());
    for (const auto& rec : daily) {
        if (std::isfinite(rec.daily_return)) r.push_back(rec.daily_return);
    }
    return r;
}

std::optional<double> SwapAudit::drift() const {
    if (!logged_out) return std::nullopt;
    return simulated_out - *logged_out;
}

ReplayResult run(const PoolConfig& config, std::span<const PoolEvent> events, const ReplayOptions& options) {
    validate_events(events);
    Replayer replayer(config, options);
    for (std::size_t i = 0; i < events.size(); ++i) replayer.apply(i, events[i]);
    return std::move(replayer).finish();
}

TokenAmounts fees_accounted(const ReplayResult& result) {
    TokenAmounts total;
    for (const auto& [id, ledger] : result.ledgers) total = total + ledger.fees_collected;
    return total + result.pool.unclaimed_fees();
}

}  // namespace clmm::replay
