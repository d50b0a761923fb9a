#pragma once

namespace clmm {

/// Amounts of the two pool tokens. Prices are quoted as Y per X throughout.
struct TokenAmounts {
    double x = 0.0;
    double y = 0.0;

    /// Value in Y at the given price.
    double value_at(double price) const noexcept { return price * x + y; }
};

/// Price interval [lower, upper) in which a position's liquidity is active.
/// The full-range marker has lower = 0 and upper = +inf.
struct PriceRange {
    double lower = 0.0;
    double upper = 0.0;

    static PriceRange full() noexcept;

    /// Throws DomainError unless 0 < lower < upper < inf, or this is the full-range marker.
    static PriceRange checked(double lower, double upper);

    bool is_full() const noexcept;
    bool contains(double price) const noexcept { return lower <= price && price < upper; }
    void validate() const;
};

/// Virtual reserves of liquidity l at price s: x = l / sqrt(s), y = l * sqrt(s), so s = y / x.
TokenAmounts virtual_reserves(double liquidity, double price);

/// Real reserves held by liquidity l over a range at price s. Below the range the
/// position is all X, above it all Y; continuous at both bounds.
TokenAmounts position_reserves(double liquidity, double price, const PriceRange& range);

/// Output of a constant-product swap with fee f charged on the input:
/// dy = y (1 - f) dx / (x + (1 - f) dx).
double swap_exact_input_single_range(double x, double y, double fee, double amount_in);

}  // namespace clmm
