#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace clmm::risk {

/// Daily returns with their day indices. Each return must exceed -1.
struct ReturnSeries {
    std::vector<std::int64_t> days;
    std::vector<double> returns;

    void validate() const;
};

/// Daily prices with their day indices; all positive.
struct PriceSeries {
    std::vector<std::int64_t> days;
    std::vector<double> prices;

    void validate() const;
};

/// Annualised realised volatility sqrt((365 / T) * sum (ln(S_i / S_{i-1}))^2)
/// over T = prices.size() - 1 daily log returns.
/// The log return is squared; without the square the radicand can go negative.
/// Throws DomainError for fewer than two prices.
double realized_volatility(std::span<const double> prices);

struct ReturnStats {
    double mean_daily = 0.0;
    /// Sample standard deviation (n - 1); NaN for a single observation.
    double vol_daily = 0.0;
};

ReturnStats return_stats(std::span<const double> returns);

/// Empirical CVaR: mean of the ceil(level * n) smallest returns.
/// Throws DomainError for an empty series or level outside (0, 1].
double cvar(std::span<const double> returns, double level = 0.05);

double mean(std::span<const double> values);
/// Median; the midpoint of the two central values for even counts.
double median(std::span<const double> values);

/// Reads "day,value" rows (header and '#' comments allowed).
std::vector<std::pair<std::int64_t, double>> read_day_values(std::istream& in);

}  // namespace clmm::risk
