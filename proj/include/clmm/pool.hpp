#pragma once

#include "clmm/reserves.hpp"
#include "clmm/tick_math.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace clmm {

enum class Token { X, Y };

struct PositionId {
    std::uint64_t value = 0;
    auto operator<=>(const PositionId&) const = default;
};

/// Range bounds as tick indices; liquidity is active for lower <= tick < upper.
struct TickRange {
    Tick lower = 0;
    Tick upper = 0;

    PriceRange prices(Tick bound = kDefaultTickBound) const;
    /// One tick is one basis point of price.
    double width_bps() const noexcept { return static_cast<double>(upper - lower); }
};

struct PoolConfig {
    FeeTier tier;
    double initial_price = 1.0;
    Tick tick_bound = kDefaultTickBound;
};

/// Reads a JSON pool configuration: {"fee", "tick_spacing"?, "initial_price", "tick_bound"?}.
/// A missing tick_spacing falls back to the conventional spacing for the fee.
PoolConfig load_pool_config(const std::filesystem::path& path);
PoolConfig parse_pool_config(const std::string& json_text);

struct TickInfo {
    double liquidity_net = 0.0;
    double liquidity_gross = 0.0;
    // Fee growth on the side of the tick away from the current price.
    double fee_growth_outside_x = 0.0;
    double fee_growth_outside_y = 0.0;
};

struct Position {
    PositionId id;
    TickRange ticks;
    double liquidity = 0.0;
    double entry_price = 0.0;
    TokenAmounts deposit;
    double fee_growth_inside_last_x = 0.0;
    double fee_growth_inside_last_y = 0.0;
    TokenAmounts fees_owed;
};

struct SwapResult {
    Token token_in = Token::X;
    double amount_in = 0.0;   // consumed, fee included
    double amount_out = 0.0;
    double fee_paid = 0.0;    // in the input token
    double remaining = 0.0;   // unconsumed input when liquidity ran out
    bool partial_fill = false;
    std::vector<Tick> ticks_crossed;
};

struct BurnResult {
    TokenAmounts reserves;
    TokenAmounts fees;
};

/// Concentrated-liquidity pool over a tick grid. Fees accrue through global
/// fee-growth-per-unit-liquidity accumulators with per-tick outside snapshots,
/// so each position earns exactly while the price sits inside its range.
///
/// Single writer: mutate from one thread. Const members are safe to call
/// concurrently when no writer is active.
class Pool {
public:
    explicit Pool(const PoolConfig& config);

    const FeeTier& fee_tier() const noexcept { return tier_; }
    Tick tick_bound() const noexcept { return bound_; }
    double sqrt_price() const noexcept { return sqrt_price_; }
    double price() const noexcept { return sqrt_price_ * sqrt_price_; }
    Tick current_tick() const noexcept { return tick_; }
    double active_liquidity() const noexcept { return liquidity_; }
    double fee_growth_x() const noexcept { return fee_growth_x_; }
    double fee_growth_y() const noexcept { return fee_growth_y_; }
    const std::map<Tick, TickInfo>& ticks() const noexcept { return ticks_; }
    const std::map<PositionId, Position>& positions() const noexcept { return positions_; }

    /// Sum of net deltas at ticks <= current tick.
    double recompute_active_liquidity() const;
    /// Sum of all net deltas; zero for a consistent pool.
    double net_liquidity_sum() const;

    /// Real tokens backing liquidity, fees excluded.
    TokenAmounts reserves() const noexcept { return reserves_; }
    TokenAmounts fees_paid_total() const noexcept { return fees_paid_; }
    TokenAmounts fees_collected_total() const noexcept { return fees_collected_; }
    /// Fees accrued to live positions and not yet collected.
    TokenAmounts unclaimed_fees() const;

    const Position& position(PositionId id) const;
    bool in_range(PositionId id) const;
    /// Tokens a position would receive if burned now, fees excluded.
    TokenAmounts position_amounts(PositionId id) const;
    /// Uncollected fees of a live position.
    TokenAmounts accrued_fees(PositionId id) const;

    PositionId mint(const TickRange& range, double liquidity);
    /// Mint under a caller-chosen id; throws DomainError if the id is taken.
    PositionId mint(PositionId id, const TickRange& range, double liquidity);
    BurnResult burn(PositionId id);
    TokenAmounts collect(PositionId id);

    /// Exact-input swap. Crosses initialized ticks until the input is spent; if
    /// liquidity runs out first the result carries the remainder and partial_fill.
    SwapResult swap(Token token_in, double amount_in);
    SwapResult quote(Token token_in, double amount_in) const;

private:
    struct Growth {
        double x = 0.0;
        double y = 0.0;
    };

    Position& find(PositionId id);
    Growth fee_growth_inside(const TickRange& range) const;
    void settle_fees(Position& p);
    void update_tick(Tick tick, double delta_net, double delta_gross);
    void cross(Tick tick, Token token_in);
    void validate_range(const TickRange& range) const;

    FeeTier tier_;
    Tick bound_;
    double sqrt_price_;
    Tick tick_;
    double liquidity_ = 0.0;
    double fee_growth_x_ = 0.0;
    double fee_growth_y_ = 0.0;
    std::map<Tick, TickInfo> ticks_;
    std::map<PositionId, Position> positions_;
    std::uint64_t next_id_ = 1;
    TokenAmounts reserves_;
    TokenAmounts fees_paid_;
    TokenAmounts fees_collected_;
};

}  // namespace clmm
