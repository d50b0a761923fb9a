#include "clmm/tick_math.hpp"

#include "clmm/errors.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace clmm {

namespace {

// Protocol-convention defaults; the fee fraction alone does not determine spacing.
constexpr std::array<std::pair<double, std::int32_t>, 4> kTiers{{
    {0.0001, 1},
    {0.0005, 10},
    {0.003, 60},
    {0.01, 200},
}};

bool same_fee(double a, double b) noexcept { return std::abs(a - b) <= 1e-12; }

}  // namespace

bool is_admissible_fee(double fee) noexcept {
    for (const auto& [f, spacing] : kTiers) {
        if (same_fee(f, fee)) return true;
    }
    return false;
}

std::int32_t default_tick_spacing(double fee) {
    for (const auto& [f, spacing] : kTiers) {
        if (same_fee(f, fee)) return spacing;
    }
    throw DomainError("fee " + std::to_string(fee) +
                      " is not an admissible tier (0.0001, 0.0005, 0.003, 0.01)");
}

FeeTier FeeTier::from_fee(double fee) { return FeeTier{fee, default_tick_spacing(fee)}; }

FeeTier FeeTier::from_fee(double fee, std::int32_t tick_spacing) {
    if (!is_admissible_fee(fee)) {
        throw DomainError("fee " + std::to_string(fee) + " is not an admissible tier");
    }
    if (tick_spacing < 1) {
        throw DomainError("tick spacing must be >= 1");
    }
    return FeeTier{fee, tick_spacing};
}

double tick_to_price(Tick tick, Tick bound) {
    if (tick > bound || tick < -bound) {
        throw RangeError("tick " + std::to_string(tick) + " outside bound " + std::to_string(bound));
    }
    return std::pow(kTickBase, static_cast<double>(tick));
}

double tick_to_sqrt_price(Tick tick, Tick bound) { return std::sqrt(tick_to_price(tick, bound)); }

Tick floor_to_spacing(Tick tick, std::int32_t spacing) {
    if (spacing < 1) throw DomainError("tick spacing must be >= 1");
    Tick q = tick / spacing;
    if (tick % spacing != 0 && tick < 0) --q;
    return q * spacing;
}

Tick price_to_tick(double price, std::int32_t spacing) {
    if (!(price > 0.0) || !std::isfinite(price)) {
        throw DomainError("price must be positive and finite");
    }
    auto tick = static_cast<Tick>(std::floor(std::log(price) / std::log(kTickBase)));
    // log rounding can land one tick off near grid points
    while (std::pow(kTickBase, static_cast<double>(tick)) > price) --tick;
    while (std::pow(kTickBase, static_cast<double>(tick + 1)) <= price) ++tick;
    return floor_to_spacing(tick, spacing);
}

Tick min_usable_tick(std::int32_t spacing, Tick bound) {
    return -floor_to_spacing(bound, spacing);
}

Tick max_usable_tick(std::int32_t spacing, Tick bound) { return floor_to_spacing(bound, spacing); }

}  // namespace clmm
