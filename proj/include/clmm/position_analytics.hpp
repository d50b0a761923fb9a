#pragma once

#include "clmm/reserves.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace clmm::analytics {

/// A position as deposited: liquidity, range and entry price, with the token
/// amounts position_reserves gives at entry.
struct PositionSnapshot {
    double liquidity = 0.0;
    PriceRange range = PriceRange::full();
    double entry_price = 1.0;
    TokenAmounts deposit;

    static PositionSnapshot open(double liquidity, const PriceRange& range, double entry_price);
};

/// Fees earned by a position, valued in Y at the evaluation price.
struct FeesEarned {
    double total = 0.0;

    static FeesEarned value_of(const TokenAmounts& fees, double price);
};

/// Impermanent loss of a full-range position: 2 sqrt(r) / (1 + r) - 1 with r = s1 / s0.
double il_v2(double s0, double s1);

/// s1 * x + y of the reserves held at s1.
double position_value(double liquidity, double s1, const PriceRange& range);

/// Value at s1 of the tokens that were deposited at s0.
double hold_value(double liquidity, double s0, double s1, const PriceRange& range);

/// (V_pos - V_hold) / V_hold. Liquidity cancels. Throws DegeneratePositionError
/// when the hold value is zero.
double il_v3(double s0, double s1, const PriceRange& range);

/// (V_pos + F - V_hold) / V_hold for a position of the given liquidity.
double position_return(double liquidity, double s0, double s1, const PriceRange& range,
                       FeesEarned fees);

enum class EntryMode {
    Center,  // [s0 / alpha, alpha * s0]
    Lower,   // s0 sits on the lower bound: [s0, alpha * s0]
    Upper,   // s0 sits on the upper bound: [s0 / alpha, s0]
};

/// Range relative to the entry price, parameterised by a width factor alpha > 1.
struct RangeSpec {
    double alpha = 2.0;
    EntryMode entry = EntryMode::Center;

    PriceRange range_at(double s0) const;
    std::string describe() const;
};

struct IlPoint {
    double price_ratio = 1.0;
    double il = 0.0;
};

/// Log-spaced s1/s0 ratios; with include_unity the exact ratio 1 is inserted in order.
std::vector<double> ratio_grid(double lo = 0.05, double hi = 20.0, std::size_t n = 400,
                               bool include_unity = true);

/// IL against s1/s0 for a ranged position (entry price normalised to 1).
/// Throws DomainError when alpha <= 1.
std::vector<IlPoint> il_curve(const RangeSpec& spec, std::span<const double> ratios);

/// Full-range baseline.
std::vector<IlPoint> il_curve_v2(std::span<const double> ratios);

/// Writes "# range: <label>" then "price_ratio,il" and one row per point.
void write_il_curve_csv(std::ostream& out, const std::string& label,
                        std::span<const IlPoint> points, const std::string& provenance = {});

}  // namespace clmm::analytics
