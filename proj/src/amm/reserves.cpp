#include "clmm/reserves.hpp"

#include "clmm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clmm {

PriceRange PriceRange::full() noexcept {
    return PriceRange{0.0, std::numeric_limits<double>::infinity()};
}

PriceRange PriceRange::checked(double lower, double upper) {
    PriceRange r{lower, upper};
    r.validate();
    return r;
}

bool PriceRange::is_full() const noexcept { return lower == 0.0 && std::isinf(upper) && upper > 0; }

void PriceRange::validate() const {
    if (is_full()) return;
    if (!(lower > 0.0) || !(upper > lower) || !std::isfinite(upper)) {
        throw DomainError("price range requires 0 < lower < upper < inf");
    }
}

TokenAmounts virtual_reserves(double liquidity, double price) {
    if (!(liquidity >= 0.0)) throw DomainError("liquidity must be non-negative");
    if (!(price > 0.0) || !std::isfinite(price)) throw DomainError("price must be positive and finite");
    const double root = std::sqrt(price);
    return {liquidity / root, liquidity * root};
}

TokenAmounts position_reserves(double liquidity, double price, const PriceRange& range) {
    if (!(liquidity >= 0.0)) throw DomainError("liquidity must be non-negative");
    if (!(price > 0.0) || !std::isfinite(price)) throw DomainError("price must be positive and finite");
    range.validate();

    // Clamping onto the range reproduces the below/inside/above branches with
    // identical expressions at the seams, so boundary values agree bit for bit.
    const double clamped = std::clamp(price, range.lower, range.upper);
    const double root = std::sqrt(clamped);
    const double inv_root_upper = 1.0 / std::sqrt(range.upper);  // 0 for the full range
    const double root_lower = std::sqrt(range.lower);
    return {liquidity * (1.0 / root - inv_root_upper), liquidity * (root - root_lower)};
}

double swap_exact_input_single_range(double x, double y, double fee, double amount_in) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("reserves must be positive");
    if (!(fee >= 0.0) || !(fee < 1.0)) throw DomainError("fee must lie in [0, 1)");
    if (!(amount_in >= 0.0)) throw DomainError("input amount must be non-negative");
    const double effective = (1.0 - fee) * amount_in;
    return y * effective / (x + effective);
}

}  // namespace clmm
