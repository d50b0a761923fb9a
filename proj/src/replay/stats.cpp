#include "clmm/errors.hpp"
#include "clmm/replay.hpp"
#include "clmm/risk_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clmm::replay {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<WindowStats> pool_stats(const std::map<PositionId, PositionLedger>& ledgers,
                                    std::span<const DayClose> days, int window_days, double min_value) {
    if (ledgers.empty()) throw DomainError("pool statistics need at least one position");
    if (window_days < 1) throw DomainError("window must span at least one day");

    std::vector<WindowStats> out;
    if (days.empty()) return out;

    const std::int64_t origin = days.front().day;
    std::size_t i = 0;
    while (i < days.size()) {
        const std::int64_t w = (days[i].day - origin) / window_days;
        WindowStats s;
        s.first_day = origin + w * window_days;
        s.last_day = s.first_day + window_days - 1;

        std::vector<double> prices;
        if (i > 0) prices.push_back(days[i - 1].price);
        double volume = 0.0;
        std::size_t closes = 0;
        for (; i < days.size() && days[i].day <= s.last_day; ++i) {
            prices.push_back(days[i].price);
            volume += days[i].volume_y;
            ++closes;
        }
        s.mean_daily_volume = closes > 0 ? volume / static_cast<double>(closes) : 0.0;
        s.realized_volatility = prices.size() >= 2 ? risk::realized_volatility(prices) : 0.0;

        std::vector<double> sizes;
        std::vector<double> widths;
        double lifetime_sum = 0.0;
        double itm_sum = 0.0;
        for (const auto& [id, ledger] : ledgers) {
            if (!(ledger.size >= min_value)) continue;
            bool active = false;
            std::int64_t lifetime = 0;
            std::int64_t itm = 0;
            for (const auto& rec : ledger.daily) {
                if (rec.day > s.last_day) break;
                ++lifetime;
                if (rec.in_range) ++itm;
                if (rec.day >= s.first_day) active = true;
            }
            if (!active) continue;
            sizes.push_back(ledger.size);
            widths.push_back(ledger.width_bps);
            lifetime_sum += static_cast<double>(lifetime);
            itm_sum += static_cast<double>(itm);
        }
        s.active_positions = sizes.size();
        if (sizes.empty()) {
            s.median_size = s.mean_size = s.median_width_bps = kNaN;
            s.mean_lifetime_days = s.mean_itm_days = kNaN;
        } else {
            const double n = static_cast<double>(sizes.size());
            s.median_size = risk::median(sizes);
            s.mean_size = risk::mean(sizes);
            s.median_width_bps = risk::median(widths);
            s.mean_lifetime_days = lifetime_sum / n;
            s.mean_itm_days = itm_sum / n;
        }
        out.push_back(s);
    }
    return out;
}

std::vector<RiskRow> risk_report(const std::map<PositionId, PositionLedger>& ledgers, const RiskFilter& filter) {
    std::vector<RiskRow> rows;
    for (const auto& [id, ledger] : ledgers) {
        if (!(ledger.size >= filter.min_value)) continue;
        if (ledger.lifetime_days <= filter.min_lifetime_days) continue;
        const auto returns = ledger.daily_returns();
        if (returns.empty()) continue;
        const auto stats = risk::return_stats(returns);
        RiskRow row;
        row.id = id;
        row.mean_daily = stats.mean_daily;
        row.vol_daily = stats.vol_daily;
        row.cvar05 = risk::cvar(returns, filter.cvar_level);
        row.lifetime_days = ledger.lifetime_days;
        row.time_itm_fraction = ledger.time_itm_fraction(filter.itm);
        row.width_bps = ledger.width_bps;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace clmm::replay
