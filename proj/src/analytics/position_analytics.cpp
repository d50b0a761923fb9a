#include "clmm/position_analytics.hpp"

#include "clmm/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace clmm::analytics {

namespace {

void require_price(double s, const char* name) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError(std::string(name) + " must be positive and finite");
    }
}

}  // namespace

PositionSnapshot PositionSnapshot::open(double liquidity, const PriceRange& range, double entry_price) {
    return PositionSnapshot{liquidity, range, entry_price,
                            position_reserves(liquidity, entry_price, range)};
}

FeesEarned FeesEarned::value_of(const TokenAmounts& fees, double price) {
    const double total = fees.value_at(price);
    if (!(total >= 0.0)) throw DomainError("fees must be non-negative");
    return FeesEarned{total};
}

double il_v2(double s0, double s1) {
    require_price(s0, "s0");
    require_price(s1, "s1");
    const double r = s1 / s0;
    return 2.0 * std::sqrt(r) / (1.0 + r) - 1.0;
}

double position_value(double liquidity, double s1, const PriceRange& range) {
    return position_reserves(liquidity, s1, range).value_at(s1);
}

double hold_value(double liquidity, double s0, double s1, const PriceRange& range) {
    require_price(s1, "s1");
    return position_reserves(liquidity, s0, range).value_at(s1);
}

double il_v3(double s0, double s1, const PriceRange& range) {
    const double hold = hold_value(1.0, s0, s1, range);
    if (!(hold > 0.0)) throw DegeneratePositionError("hold value is zero; impermanent loss undefined");
    return (position_value(1.0, s1, range) - hold) / hold;
}

double position_return(double liquidity, double s0, double s1, const PriceRange& range,
                       FeesEarned fees) {
    if (!(fees.total >= 0.0)) throw DomainError("fees must be non-negative");
    const double hold = hold_value(liquidity, s0, s1, range);
    if (!(hold > 0.0)) throw DegeneratePositionError("hold value is zero; return undefined");
    return (position_value(liquidity, s1, range) + fees.total - hold) / hold;
}

PriceRange RangeSpec::range_at(double s0) const {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("alpha must be > 1");
    require_price(s0, "s0");
    switch (entry) {
        case EntryMode::Center: return PriceRange::checked(s0 / alpha, alpha * s0);
        case EntryMode::Lower: return PriceRange::checked(s0, alpha * s0);
        case EntryMode::Upper: return PriceRange::checked(s0 / alpha, s0);
    }
    throw DomainError("unknown entry mode");
}

std::string RangeSpec::describe() const {
    const char* mode = entry == EntryMode::Center ? "center" : entry == EntryMode::Lower ? "lower" : "upper";
    return fmt::format("alpha={:g} entry={}", alpha, mode);
}

std::vector<double> ratio_grid(double lo, double hi, std::size_t n, bool include_unity) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("ratio grid requires 0 < lo < hi and n >= 2");
    std::vector<double> grid;
    grid.reserve(n + 1);
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid.push_back(std::exp(a + step * static_cast<double>(i)));
    grid.front() = lo;
    grid.back() = hi;
    if (include_unity && lo < 1.0 && hi > 1.0 &&
        std::find(grid.begin(), grid.end(), 1.0) == grid.end()) {
        grid.insert(std::upper_bound(grid.begin(), grid.end(), 1.0), 1.0);
    }
    return grid;
}

std::vector<IlPoint> il_curve(const RangeSpec& spec, std::span<const double> ratios) {
    const PriceRange range = spec.range_at(1.0);
    std::vector<IlPoint> points;
    points.reserve(ratios.size());
    for (double r : ratios) points.push_back({r, il_v3(1.0, r, range)});
    return points;
}

std::vector<IlPoint> il_curve_v2(std::span<const double> ratios) {
    std::vector<IlPoint> points;
    points.reserve(ratios.size());
    for (double r : ratios) points.push_back({r, il_v2(1.0, r)});
    return points;
}

void write_il_curve_csv(std::ostream& out, const std::string& label, std::span<const IlPoint> points,
                        const std::string& provenance) {
    if (!provenance.empty()) fmt::print(out, "# {}\n", provenance);
    fmt::print(out, "# range: {}\nprice_ratio,il\n", label);
    for (const auto& p : points) fmt::print(out, "{:.12g},{:.12g}\n", p.price_ratio, p.il);
}

}  // namespace clmm::analytics
