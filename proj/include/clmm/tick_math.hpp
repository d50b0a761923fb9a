#pragma once

#include <cstdint>

namespace clmm {

using Tick = std::int32_t;

/// Price ratio between adjacent ticks (one basis point).
inline constexpr double kTickBase = 1.0001;

/// Default guard on |tick|; prices stay within roughly [2^-128, 2^128].
inline constexpr Tick kDefaultTickBound = 887272;

/// Fee fraction charged on swap input plus the tick spacing it implies.
struct FeeTier {
    double fee = 0.003;
    std::int32_t tick_spacing = 60;

    /// Tier for an admissible fee fraction (0.0001, 0.0005, 0.003, 0.01) with the
    /// conventional spacing {1, 10, 60, 200}. Throws DomainError for other fees.
    static FeeTier from_fee(double fee);

    /// Same, with an explicit spacing override (>= 1).
    static FeeTier from_fee(double fee, std::int32_t tick_spacing);
};

/// Conventional tick spacing for an admissible fee. Throws DomainError otherwise.
std::int32_t default_tick_spacing(double fee);

bool is_admissible_fee(double fee) noexcept;

/// 1.0001^tick. Throws RangeError when |tick| > bound.
double tick_to_price(Tick tick, Tick bound = kDefaultTickBound);

double tick_to_sqrt_price(Tick tick, Tick bound = kDefaultTickBound);

/// Largest tick i with i % spacing == 0 and 1.0001^i <= price.
/// Throws DomainError for non-positive or non-finite prices.
Tick price_to_tick(double price, std::int32_t spacing = 1);

/// Rounds toward negative infinity onto the spacing grid.
Tick floor_to_spacing(Tick tick, std::int32_t spacing);

/// Outermost initializable ticks for a spacing under a bound.
Tick min_usable_tick(std::int32_t spacing, Tick bound = kDefaultTickBound);
Tick max_usable_tick(std::int32_t spacing, Tick bound = kDefaultTickBound);

}  // namespace clmm
