#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace clmm::stochastic {

inline constexpr double kDaysPerYear = 365.0;

struct GbmParams {
    double mu = 0.0;        // drift per year
    double sigma = 0.7;     // volatility per sqrt(year)
    int horizon_days = 30;
    double step_days = 1.0;
    std::size_t n_paths = 40000;
    std::uint64_t seed = 20220401;

    /// Throws DomainError on sigma <= 0, horizon < 1, step <= 0 or zero paths.
    void validate() const;
    std::size_t step_count() const;
};

struct PricePath {
    std::vector<double> prices;
    std::vector<double> times_days;
};

/// Simulated paths stored path-major. Alongside prices each path keeps
/// ln(S(t) / S(0)), which makes range statistics independent of the price scale.
class PathSet {
public:
    PathSet(double s0, std::vector<double> times_days, std::size_t n_paths);

    double initial_price() const noexcept { return s0_; }
    std::size_t path_count() const noexcept { return n_paths_; }
    /// Time points per path, t = 0 included.
    std::size_t point_count() const noexcept { return times_.size(); }
    const std::vector<double>& times_days() const noexcept { return times_; }

    std::span<const double> prices(std::size_t path) const;
    std::span<const double> log_ratios(std::size_t path) const;
    PricePath path(std::size_t i) const;

    /// Index of the time point closest to t_days; throws DomainError if t is off the grid.
    std::size_t index_of(double t_days) const;

private:
    friend PathSet simulate_paths(const GbmParams&, double, unsigned);

    std::span<double> mutable_prices(std::size_t path);
    std::span<double> mutable_log_ratios(std::size_t path);

    double s0_;
    std::vector<double> times_;
    std::size_t n_paths_;
    std::vector<double> prices_;
    std::vector<double> log_ratios_;
};

/// Exact lognormal stepping: ln S(t + dt) - ln S(t) ~ N((mu - sigma^2 / 2) dt, sigma^2 dt).
/// Every path draws from its own generator keyed by (seed, path index), so the
/// result does not depend on the thread count (0 = hardware concurrency).
PathSet simulate_paths(const GbmParams& params, double s0, unsigned threads = 0);

/// Symmetric range around the entry price: (s0 / alpha, alpha * s0).
struct WidthSpec {
    double alpha = 2.0;

    void validate() const;
    double lower(double s0) const { return s0 / alpha; }
    double upper(double s0) const { return alpha * s0; }
};

enum class ItmMode {
    Marginal,      // price inside the range at time t
    FirstPassage,  // price inside the range at every grid time up to t
};

struct TimePoint {
    double t_days = 0.0;
    double value = 0.0;
};

/// Fraction of paths strictly inside (s0 / alpha, alpha * s0) at each grid time.
std::vector<TimePoint> p_itm(const PathSet& paths, WidthSpec width, ItmMode mode = ItmMode::Marginal);

/// Lognormal interval probability P(s0 / alpha < S(t) < alpha * s0).
double p_itm_closed_form(double mu, double sigma, double t_days, double alpha);

/// Expected fraction of elapsed time spent in range: trapezoid average of p_itm
/// over [0, t_n]. Equals 1 at t = 0.
std::vector<TimePoint> expected_time_itm(const PathSet& paths, WidthSpec width,
                                         ItmMode mode = ItmMode::Marginal);
std::vector<TimePoint> expected_time_itm(std::span<const TimePoint> p_itm_curve);

/// Unit-free fee proxy E[T_ITM(t; alpha)] / alpha.
double fee_proxy(const PathSet& paths, WidthSpec width, double t_days,
                 ItmMode mode = ItmMode::Marginal);

/// Log-spaced alpha grid.
std::vector<double> alpha_grid(double lo = 1.01, double hi = 20.0, std::size_t n = 200);

struct WidthOptimum {
    double horizon_days = 0.0;
    double alpha_star = 0.0;
    std::size_t argmax_index = 0;
    std::vector<double> alphas;
    std::vector<double> proxy;

    bool interior() const noexcept { return argmax_index > 0 && argmax_index + 1 < alphas.size(); }
};

/// Grid search of the fee proxy per horizon. One path set covers every alpha and
/// horizon (common random numbers), so the argmax is deterministic given the seed.
/// Throws DomainError for an empty or non-positive horizon list.
std::vector<WidthOptimum> optimal_width(const GbmParams& params, std::span<const double> horizons_days,
                                        std::span<const double> alphas,
                                        ItmMode mode = ItmMode::Marginal, unsigned threads = 0);

std::vector<WidthOptimum> optimal_width(const PathSet& paths, std::span<const double> horizons_days,
                                        std::span<const double> alphas,
                                        ItmMode mode = ItmMode::Marginal);

}  // namespace clmm::stochastic
