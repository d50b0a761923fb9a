#include "clmm/risk_metrics.hpp"

#include "clmm/errors.hpp"
#include "clmm/csv.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <string>

namespace clmm::risk {

void ReturnSeries::validate() const {
    if (days.size() != returns.size()) throw DomainError("day and return counts differ");
    for (double r : returns) {
        if (!(r > -1.0) || !std::isfinite(r)) throw DomainError("returns must be finite and > -1");
    }
}

void PriceSeries::validate() const {
    if (days.size() != prices.size()) throw DomainError("day and price counts differ");
    for (double s : prices) {
        if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("prices must be positive and finite");
    }
}

double realized_volatility(std::span<const double> prices) {
    if (prices.size() < 2) throw DomainError("realized volatility needs at least two prices");
    double sum_sq = 0.0;
    for (std::size_t i = 1; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !(prices[i - 1] > 0.0)) throw DomainError("prices must be positive");
        const double r = std::log(prices[i] / prices[i - 1]);
        sum_sq += r * r;
    }
    const double t = static_cast<double>(prices.size() - 1);
    return std::sqrt(365.0 / t * sum_sq);
}

double mean(std::span<const double> values) {
    if (values.empty()) throw DomainError("mean of an empty series");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median(std::span<const double> values) {
    if (values.empty()) throw DomainError("median of an empty series");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    if (v.size() % 2 == 1) return v[mid];
    const double upper = v[mid];
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

ReturnStats return_stats(std::span<const double> returns) {
    if (returns.empty()) throw DomainError("return statistics of an empty series");
    ReturnStats stats;
    stats.mean_daily = mean(returns);
    if (returns.size() < 2) {
        stats.vol_daily = std::numeric_limits<double>::quiet_NaN();
        return stats;
    }
    double ss = 0.0;
    for (double r : returns) ss += (r - stats.mean_daily) * (r - stats.mean_daily);
    stats.vol_daily = std::sqrt(ss / static_cast<double>(returns.size() - 1));
    return stats;
}

double cvar(std::span<const double> returns, double level) {
    if (returns.empty()) throw DomainError("CVaR of an empty series");
    if (!(level > 0.0) || !(level <= 1.0)) throw DomainError("CVaR level must lie in (0, 1]");
    const double n = static_cast<double>(returns.size());
    // guard against level * n landing a hair above an integer
    auto k = static_cast<std::size_t>(std::ceil(level * n - 1e-9));
    k = std::clamp<std::size_t>(k, 1, returns.size());

    std::vector<double> v(returns.begin(), returns.end());
    std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    double tail = 0.0;
    for (std::size_t i = 0; i < k; ++i) tail += v[i];
    return tail / static_cast<double>(k);
}

std::vector<std::pair<std::int64_t, double>> read_day_values(std::istream& in) {
    std::vector<std::pair<std::int64_t, double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = csv::split(line);
        if (!header_seen) {
            header_seen = true;
            if (!fields.empty() && !csv::looks_numeric(fields[0])) continue;
        }
        if (fields.size() < 2) throw ParseError(line_no, "value", "expected day,value");
        rows.emplace_back(csv::parse_int(fields[0], line_no, "day"),
                          csv::parse_double(fields[1], line_no, "value"));
    }
    return rows;
}

}  // namespace clmm::risk
