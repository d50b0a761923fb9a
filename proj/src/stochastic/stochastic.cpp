#include "clmm/stochastic.hpp"

#include "clmm/errors.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

namespace clmm::stochastic {

namespace {

// splitmix64 finaliser; spreads (seed, path) onto well separated generator seeds
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t path_seed(std::uint64_t seed, std::size_t path) {
    return mix(mix(seed) ^ mix(static_cast<std::uint64_t>(path) + 0x632be59bd9b4e019ULL));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

void GbmParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
    if (!std::isfinite(mu)) throw DomainError("mu must be finite");
    if (horizon_days < 1) throw DomainError("horizon must be at least one day");
    if (!(step_days > 0.0) || !std::isfinite(step_days)) throw DomainError("step must be positive");
    if (n_paths < 1) throw DomainError("at least one path is required");
    const double steps = horizon_days / step_days;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps) {
        throw DomainError("horizon must be a whole number of steps");
    }
}

std::size_t GbmParams::step_count() const {
    return static_cast<std::size_t>(std::llround(horizon_days / step_days));
}

PathSet::PathSet(double s0, std::vector<double> times_days, std::size_t n_paths)
    : s0_(s0), times_(std::move(times_days)), n_paths_(n_paths),
      prices_(n_paths * times_.size(), s0), log_ratios_(n_paths * times_.size(), 0.0) {}

std::span<const double> PathSet::prices(std::size_t path) const {
    return {prices_.data() + path * times_.size(), times_.size()};
}

std::span<const double> PathSet::log_ratios(std::size_t path) const {
    return {log_ratios_.data() + path * times_.size(), times_.size()};
}

std::span<double> PathSet::mutable_prices(std::size_t path) {
    return {prices_.data() + path * times_.size(), times_.size()};
}

std::span<double> PathSet::mutable_log_ratios(std::size_t path) {
    return {log_ratios_.data() + path * times_.size(), times_.size()};
}

PricePath PathSet::path(std::size_t i) const {
    auto s = prices(i);
    return PricePath{{s.begin(), s.end()}, times_};
}

std::size_t PathSet::index_of(double t_days) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t_days - 1e-9);
    if (it == times_.end() || std::abs(*it - t_days) > 1e-9) {
        throw DomainError("time " + std::to_string(t_days) + " days is not on the simulation grid");
    }
    return static_cast<std::size_t>(it - times_.begin());
}

PathSet simulate_paths(const GbmParams& params, double s0, unsigned threads) {
    params.validate();
    if (!(s0 > 0.0) || !std::isfinite(s0)) throw DomainError("initial price must be positive");

    const std::size_t steps = params.step_count();
    std::vector<double> times(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) times[i] = params.step_days * static_cast<double>(i);

    PathSet set(s0, std::move(times), params.n_paths);

    const double dt = params.step_days / kDaysPerYear;
    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    const double diffusion = params.sigma * std::sqrt(dt);

    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            std::mt19937_64 engine(path_seed(params.seed, p));
            boost::random::normal_distribution<double> normal(0.0, 1.0);
            auto logs = set.mutable_log_ratios(p);
            auto prices = set.mutable_prices(p);
            double z = 0.0;
            for (std::size_t i = 1; i <= steps; ++i) {
                z += drift + diffusion * normal(engine);
                logs[i] = z;
                prices[i] = s0 * std::exp(z);
            }
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, params.n_paths));
    if (workers <= 1) {
        fill(0, params.n_paths);
        return set;
    }
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (params.n_paths + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(params.n_paths, begin + chunk);
            if (begin < end) pool.emplace_back(fill, begin, end);
        }
    }
    return set;
}

void WidthSpec::validate() const {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("alpha must be > 1");
}

std::vector<TimePoint> p_itm(const PathSet& paths, WidthSpec width, ItmMode mode) {
    width.validate();
    if (paths.path_count() == 0) throw DomainError("empty path set");
    const double bound = std::log(width.alpha);
    const std::size_t n = paths.point_count();

    std::vector<std::size_t> inside(n, 0);
    for (std::size_t p = 0; p < paths.path_count(); ++p) {
        auto z = paths.log_ratios(p);
        for (std::size_t i = 0; i < n; ++i) {
            const bool in = z[i] > -bound && z[i] < bound;
            if (in) {
                ++inside[i];
            } else if (mode == ItmMode::FirstPassage) {
                break;
            }
        }
    }

    std::vector<TimePoint> out(n);
    const double total = static_cast<double>(paths.path_count());
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = {paths.times_days()[i], static_cast<double>(inside[i]) / total};
    }
    return out;
}

double p_itm_closed_form(double mu, double sigma, double t_days, double alpha) {
    WidthSpec{alpha}.validate();
    if (!(t_days >= 0.0)) throw DomainError("time must be non-negative");
    if (!(sigma >= 0.0)) throw DomainError("sigma must be non-negative");
    const double bound = std::log(alpha);
    const double t = t_days / kDaysPerYear;
    const double mean = (mu - 0.5 * sigma * sigma) * t;
    const double sd = sigma * std::sqrt(t);
    if (sd == 0.0) return (mean > -bound && mean < bound) ? 1.0 : 0.0;
    return normal_cdf((bound - mean) / sd) - normal_cdf((-bound - mean) / sd);
}

std::vector<TimePoint> expected_time_itm(std::span<const TimePoint> curve) {
    std::vector<TimePoint> out;
    out.reserve(curve.size());
    double area = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (i == 0) {
            out.push_back({curve[0].t_days, curve[0].value});
            continue;
        }
        const double dt = curve[i].t_days - curve[i - 1].t_days;
        area += 0.5 * (curve[i - 1].value + curve[i].value) * dt;
        const double elapsed = curve[i].t_days - curve[0].t_days;
        out.push_back({curve[i].t_days, std::clamp(area / elapsed, 0.0, 1.0)});
    }
    return out;
}

std::vector<TimePoint> expected_time_itm(const PathSet& paths, WidthSpec width, ItmMode mode) {
    const auto curve = p_itm(paths, width, mode);
    return expected_time_itm(curve);
}

double fee_proxy(const PathSet& paths, WidthSpec width, double t_days, ItmMode mode) {
    const std::size_t idx = paths.index_of(t_days);
    const auto fraction = expected_time_itm(paths, width, mode);
    return fraction[idx].value / width.alpha;
}

std::vector<double> alpha_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 1.0) || !(hi > lo) || n < 2) throw DomainError("alpha grid requires 1 < lo < hi and n >= 2");
    std::vector<double> grid(n);
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = std::exp(a + step * static_cast<double>(i));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<WidthOptimum> optimal_width(const PathSet& paths, std::span<const double> horizons_days,
                                        std::span<const double> alphas, ItmMode mode) {
    if (horizons_days.empty()) throw DomainError("at least one horizon is required");
    if (alphas.empty()) throw DomainError("alpha grid is empty");
    std::vector<std::size_t> idx;
    for (double h : horizons_days) {
        if (!(h > 0.0)) throw DomainError("horizons must be positive");
        idx.push_back(paths.index_of(h));
    }

    std::vector<WidthOptimum> out(horizons_days.size());
    for (std::size_t k = 0; k < horizons_days.size(); ++k) {
        out[k].horizon_days = horizons_days[k];
        out[k].alphas.assign(alphas.begin(), alphas.end());
        out[k].proxy.reserve(alphas.size());
    }
    for (double alpha : alphas) {
        const auto fraction = expected_time_itm(paths, WidthSpec{alpha}, mode);
        for (std::size_t k = 0; k < idx.size(); ++k) out[k].proxy.push_back(fraction[idx[k]].value / alpha);
    }
    for (auto& o : out) {
        // first maximum wins, so ties resolve toward the narrower range
        auto best = std::max_element(o.proxy.begin(), o.proxy.end());
        o.argmax_index = static_cast<std::size_t>(best - o.proxy.begin());
        o.alpha_star = o.alphas[o.argmax_index];
    }
    return out;
}

std::vector<WidthOptimum> optimal_width(const GbmParams& params, std::span<const double> horizons_days,
                                        std::span<const double> alphas, ItmMode mode, unsigned threads) {
    if (horizons_days.empty()) throw DomainError("at least one horizon is required");
    GbmParams sim = params;
    const double longest = *std::max_element(horizons_days.begin(), horizons_days.end());
    if (!(longest > 0.0)) throw DomainError("horizons must be positive");
    sim.horizon_days = std::max(sim.horizon_days, static_cast<int>(std::ceil(longest)));
    const PathSet paths = simulate_paths(sim, 1.0, threads);
    return optimal_width(paths, horizons_days, alphas, mode);
}

}  // namespace clmm::stochastic
