#include "clmm/pool.hpp"

#include "clmm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clmm {

namespace {

// Liquidity below this fraction of the operands after an add/subtract is rounding residue.
constexpr double kLiquiditySnap = 1e-9;

double snap_liquidity(double before, double delta) {
    const double after = before + delta;
    const double scale = std::max(std::abs(before), std::abs(delta));
    if (std::abs(after) <= kLiquiditySnap * scale) return 0.0;
    return after;
}

std::string id_str(PositionId id) { return std::to_string(id.value); }

}  // namespace

PriceRange TickRange::prices(Tick bound) const {
    return PriceRange::checked(tick_to_price(lower, bound), tick_to_price(upper, bound));
}

Pool::Pool(const PoolConfig& config) : tier_(config.tier), bound_(config.tick_bound) {
    if (!(tier_.fee >= 0.0) || !(tier_.fee < 1.0)) throw DomainError("fee must lie in [0, 1)");
    if (tier_.tick_spacing < 1) throw DomainError("tick spacing must be >= 1");
    if (bound_ < 1) throw DomainError("tick bound must be >= 1");
    const double lo = tick_to_price(-bound_, bound_);
    const double hi = tick_to_price(bound_, bound_);
    if (!(config.initial_price >= lo) || !(config.initial_price < hi)) {
        throw RangeError("initial price outside the tick bound");
    }
    sqrt_price_ = std::sqrt(config.initial_price);
    tick_ = price_to_tick(config.initial_price, 1);
}

double Pool::recompute_active_liquidity() const {
    double sum = 0.0;
    for (auto it = ticks_.begin(); it != ticks_.end() && it->first <= tick_; ++it) {
        sum += it->second.liquidity_net;
    }
    return sum;
}

double Pool::net_liquidity_sum() const {
    double sum = 0.0;
    for (const auto& [tick, info] : ticks_) sum += info.liquidity_net;
    return sum;
}

const Position& Pool::position(PositionId id) const {
    auto it = positions_.find(id);
    if (it == positions_.end()) throw NotFoundError("unknown position " + id_str(id));
    return it->second;
}

Position& Pool::find(PositionId id) {
    auto it = positions_.find(id);
    if (it == positions_.end()) throw NotFoundError("unknown position " + id_str(id));
    return it->second;
}

bool Pool::in_range(PositionId id) const {
    const auto& p = position(id);
    return p.ticks.lower <= tick_ && tick_ < p.ticks.upper;
}

TokenAmounts Pool::position_amounts(PositionId id) const {
    const auto& p = position(id);
    return position_reserves(p.liquidity, price(), p.ticks.prices(bound_));
}

Pool::Growth Pool::fee_growth_inside(const TickRange& range) const {
    const TickInfo& lo = ticks_.at(range.lower);
    const TickInfo& hi = ticks_.at(range.upper);

    Growth below = tick_ >= range.lower
                       ? Growth{lo.fee_growth_outside_x, lo.fee_growth_outside_y}
                       : Growth{fee_growth_x_ - lo.fee_growth_outside_x,
                                fee_growth_y_ - lo.fee_growth_outside_y};
    Growth above = tick_ < range.upper
                       ? Growth{hi.fee_growth_outside_x, hi.fee_growth_outside_y}
                       : Growth{fee_growth_x_ - hi.fee_growth_outside_x,
                                fee_growth_y_ - hi.fee_growth_outside_y};
    return {fee_growth_x_ - below.x - above.x, fee_growth_y_ - below.y - above.y};
}

TokenAmounts Pool::accrued_fees(PositionId id) const {
    const auto& p = position(id);
    const Growth inside = fee_growth_inside(p.ticks);
    return {p.fees_owed.x + p.liquidity * (inside.x - p.fee_growth_inside_last_x),
            p.fees_owed.y + p.liquidity * (inside.y - p.fee_growth_inside_last_y)};
}

TokenAmounts Pool::unclaimed_fees() const {
    TokenAmounts total;
    for (const auto& [id, p] : positions_) {
        const TokenAmounts f = accrued_fees(id);
        total.x += f.x;
        total.y += f.y;
    }
    return total;
}

void Pool::settle_fees(Position& p) {
    const Growth inside = fee_growth_inside(p.ticks);
    p.fees_owed.x += p.liquidity * (inside.x - p.fee_growth_inside_last_x);
    p.fees_owed.y += p.liquidity * (inside.y - p.fee_growth_inside_last_y);
    p.fee_growth_inside_last_x = inside.x;
    p.fee_growth_inside_last_y = inside.y;
}

void Pool::validate_range(const TickRange& range) const {
    if (range.lower >= range.upper) throw DomainError("tick range requires lower < upper");
    if (range.lower < -bound_ || range.upper > bound_) {
        throw RangeError("tick range outside bound " + std::to_string(bound_));
    }
    if (range.lower % tier_.tick_spacing != 0 || range.upper % tier_.tick_spacing != 0) {
        throw DomainError("tick range [" + std::to_string(range.lower) + ", " +
                          std::to_string(range.upper) + ") not on spacing " +
                          std::to_string(tier_.tick_spacing));
    }
}

void Pool::update_tick(Tick tick, double delta_net, double delta_gross) {
    auto [it, inserted] = ticks_.try_emplace(tick);
    TickInfo& info = it->second;
    if (inserted && tick <= tick_) {
        // all growth so far happened below the current price, i.e. on the tick's outside
        info.fee_growth_outside_x = fee_growth_x_;
        info.fee_growth_outside_y = fee_growth_y_;
    }
    const double gross_before = info.liquidity_gross;
    info.liquidity_gross = snap_liquidity(info.liquidity_gross, delta_gross);
    info.liquidity_net = snap_liquidity(info.liquidity_net, delta_net);
    if (info.liquidity_gross <= kLiquiditySnap * gross_before) ticks_.erase(it);
}

PositionId Pool::mint(const TickRange& range, double liquidity) {
    while (positions_.count(PositionId{next_id_})) ++next_id_;
    return mint(PositionId{next_id_++}, range, liquidity);
}

PositionId Pool::mint(PositionId id, const TickRange& range, double liquidity) {
    validate_range(range);
    if (!(liquidity > 0.0) || !std::isfinite(liquidity)) {
        throw DomainError("minted liquidity must be positive and finite");
    }
    if (positions_.count(id)) throw DomainError("position " + id_str(id) + " already exists");

    update_tick(range.lower, liquidity, liquidity);
    update_tick(range.upper, -liquidity, liquidity);
    if (range.lower <= tick_ && tick_ < range.upper) {
        liquidity_ = snap_liquidity(liquidity_, liquidity);
    }

    Position p;
    p.id = id;
    p.ticks = range;
    p.liquidity = liquidity;
    p.entry_price = price();
    p.deposit = position_reserves(liquidity, p.entry_price, range.prices(bound_));
    const Growth inside = fee_growth_inside(range);
    p.fee_growth_inside_last_x = inside.x;
    p.fee_growth_inside_last_y = inside.y;

    reserves_.x += p.deposit.x;
    reserves_.y += p.deposit.y;
    positions_.emplace(id, p);
    if (id.value >= next_id_) next_id_ = id.value + 1;
    return id;
}

TokenAmounts Pool::collect(PositionId id) {
    Position& p = find(id);
    settle_fees(p);
    const TokenAmounts out = p.fees_owed;
    p.fees_owed = {};
    fees_collected_.x += out.x;
    fees_collected_.y += out.y;
    return out;
}

BurnResult Pool::burn(PositionId id) {
    Position& p = find(id);
    settle_fees(p);

    BurnResult result;
    result.reserves = position_reserves(p.liquidity, price(), p.ticks.prices(bound_));
    result.fees = p.fees_owed;

    if (p.ticks.lower <= tick_ && tick_ < p.ticks.upper) {
        liquidity_ = std::max(0.0, snap_liquidity(liquidity_, -p.liquidity));
    }
    update_tick(p.ticks.lower, -p.liquidity, -p.liquidity);
    update_tick(p.ticks.upper, p.liquidity, -p.liquidity);

    reserves_.x -= result.reserves.x;
    reserves_.y -= result.reserves.y;
    fees_collected_.x += result.fees.x;
    fees_collected_.y += result.fees.y;
    positions_.erase(id);
    return result;
}

void Pool::cross(Tick tick, Token token_in) {
    TickInfo& info = ticks_.at(tick);
    info.fee_growth_outside_x = fee_growth_x_ - info.fee_growth_outside_x;
    info.fee_growth_outside_y = fee_growth_y_ - info.fee_growth_outside_y;
    if (token_in == Token::X) {
        // price falls through the tick
        liquidity_ = std::max(0.0, snap_liquidity(liquidity_, -info.liquidity_net));
        tick_ = tick - 1;
    } else {
        liquidity_ = std::max(0.0, snap_liquidity(liquidity_, info.liquidity_net));
        tick_ = tick;
    }
}

SwapResult Pool::swap(Token token_in, double amount_in) {
    if (!(amount_in >= 0.0) || !std::isfinite(amount_in)) {
        throw DomainError("swap input must be non-negative and finite");
    }
    const double fee = tier_.fee;
    const double keep = 1.0 - fee;

    SwapResult result;
    result.token_in = token_in;
    double remaining = amount_in;
    double& growth = token_in == Token::X ? fee_growth_x_ : fee_growth_y_;
    double& fees_paid = token_in == Token::X ? fees_paid_.x : fees_paid_.y;

    while (remaining > 0.0) {
        // next initialized tick in the direction of travel
        std::map<Tick, TickInfo>::const_iterator next;
        if (token_in == Token::X) {
            auto it = ticks_.upper_bound(tick_);
            if (it == ticks_.begin()) break;
            next = std::prev(it);
        } else {
            next = ticks_.upper_bound(tick_);
            if (next == ticks_.end()) break;
        }
        const Tick target_tick = next->first;
        const double target_sqrt = tick_to_sqrt_price(target_tick, bound_);
        const double l = liquidity_;

        bool reached = true;
        double gross = 0.0;
        double out = 0.0;
        if (l > 0.0) {
            const double net_to_target = token_in == Token::X
                                             ? l * (1.0 / target_sqrt - 1.0 / sqrt_price_)
                                             : l * (target_sqrt - sqrt_price_);
            const double gross_to_target = std::max(0.0, net_to_target) / keep;
            if (remaining >= gross_to_target) {
                gross = gross_to_target;
                out = token_in == Token::X ? l * (sqrt_price_ - target_sqrt)
                                           : l * (1.0 / sqrt_price_ - 1.0 / target_sqrt);
                sqrt_price_ = target_sqrt;
            } else {
                reached = false;
                gross = remaining;
                const double net = gross * keep;
                const double p = sqrt_price_;
                double next_sqrt;
                if (token_in == Token::X) {
                    // 1/p' = 1/p + net/l
                    next_sqrt = l * p / (l + net * p);
                    out = l * p * (net * p) / (l + net * p);
                } else {
                    next_sqrt = p + net / l;
                    out = net / (p * next_sqrt);
                }
                sqrt_price_ = next_sqrt;
            }
            out = std::max(0.0, out);
            const double fee_amount = gross * fee;
            growth += fee_amount / l;
            fees_paid += fee_amount;
            result.fee_paid += fee_amount;
            if (token_in == Token::X) {
                reserves_.x += gross - fee_amount;
                reserves_.y -= out;
            } else {
                reserves_.y += gross - fee_amount;
                reserves_.x -= out;
            }
            remaining -= gross;
            result.amount_in += gross;
            result.amount_out += out;
        } else {
            // empty interval: the price jumps to the next initialized tick for free
            sqrt_price_ = target_sqrt;
        }

        if (reached) {
            cross(target_tick, token_in);
            result.ticks_crossed.push_back(target_tick);
        } else {
            const Tick moved = price_to_tick(sqrt_price_ * sqrt_price_, 1);
            tick_ = token_in == Token::X ? std::clamp(moved, target_tick, tick_)
                                         : std::clamp(moved, tick_, target_tick - 1);
        }
    }

    if (remaining > 0.0) {
        result.remaining = remaining;
        result.partial_fill = true;
    }
    return result;
}

SwapResult Pool::quote(Token token_in, double amount_in) const {
    Pool scratch = *this;
    return scratch.swap(token_in, amount_in);
}

}  // namespace clmm
