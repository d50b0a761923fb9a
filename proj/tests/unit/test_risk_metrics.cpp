#include "clmm/errors.hpp"
#include "clmm/risk_metrics.hpp"
#include "clmm/stochastic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace clmm;
using namespace clmm::risk;
using doctest::Approx;

TEST_CASE("realized volatility") {
    CHECK(realized_volatility(std::vector<double>{2.0, 2.0, 2.0}) == 0.0);
    std::vector<double> alt;
    for (int i = 0; i < 31; ++i) alt.push_back(i % 2 ? 5.0 * std::exp(0.01) : 5.0);
    CHECK(realized_volatility(alt) == Approx(std::sqrt(365.0 * 0.0001)).epsilon(1e-12));
    CHECK(realized_volatility(alt) == Approx(0.1910).epsilon(1e-3));
    std::vector<double> scaled = alt;
    for (double& s : scaled) s *= 37.0;
    CHECK(realized_volatility(scaled) == Approx(realized_volatility(alt)).epsilon(1e-12));
    CHECK_THROWS_AS(realized_volatility(std::vector<double>{1.0}), DomainError);
    CHECK_THROWS_AS(realized_volatility(std::vector<double>{1.0, -1.0}), DomainError);
}

TEST_CASE("realized volatility recovers the simulated sigma") {
    stochastic::GbmParams p;
    p.n_paths = 1000;
    p.horizon_days = 365;
    p.seed = 8;
    const auto set = stochastic::simulate_paths(p, 100.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < set.path_count(); ++i) sum += realized_volatility(set.prices(i));
    CHECK(sum / 1000.0 == Approx(0.7).epsilon(0.1));
}

TEST_CASE("return statistics") {
    auto s = return_stats(std::vector<double>{0.02, 0.02, 0.02});
    CHECK(s.mean_daily == Approx(0.02));
    CHECK(s.vol_daily == 0.0);
    s = return_stats(std::vector<double>{0.01, -0.01});
    CHECK(s.mean_daily == Approx(0.0));
    CHECK(s.vol_daily == Approx(0.01414).epsilon(1e-3));
    s = return_stats(std::vector<double>{0.02, 0.0, 0.01, -0.01});
    CHECK(s.mean_daily == Approx(0.005).epsilon(1e-12));
    CHECK(s.vol_daily == Approx(0.01291).epsilon(1e-3));
    CHECK(std::isnan(return_stats(std::vector<double>{0.3}).vol_daily));
    CHECK_THROWS_AS(return_stats(std::vector<double>{}), DomainError);
}

TEST_CASE("empirical CVaR") {
    std::vector<double> r(19, 0.01);
    r.push_back(-0.10);
    CHECK(cvar(r, 0.05) == -0.10);
    CHECK(cvar(std::vector<double>{0.3, 0.3, 0.3}, 0.2) == Approx(0.3));
    CHECK(cvar(r, 1.0) == Approx(mean(r)).epsilon(1e-14));
    // ceil(0.05 * 40) = 2 worst of 40
    std::vector<double> r40(38, 0.0);
    r40.push_back(-0.2);
    r40.push_back(-0.1);
    CHECK(cvar(r40, 0.05) == Approx(-0.15));
    CHECK_THROWS_AS(cvar(std::vector<double>{}, 0.05), DomainError);
    CHECK_THROWS_AS(cvar(r, 0.0), DomainError);
    CHECK_THROWS_AS(cvar(r, 1.5), DomainError);
}

TEST_CASE("CVaR properties on random series") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> z(0.0, 0.02);
    std::uniform_int_distribution<int> len(1, 200);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> r(static_cast<std::size_t>(len(rng)));
        for (double& v : r) v = z(rng);
        const double m = mean(r);
        REQUIRE(cvar(r, 0.05) <= m + 1e-15);
        REQUIRE(cvar(r, 0.01) <= cvar(r, 0.05) + 1e-15);
        REQUIRE(cvar(r, 0.05) <= cvar(r, 0.5) + 1e-15);
        auto shuffled = r;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        REQUIRE(cvar(shuffled, 0.05) == cvar(r, 0.05));
        REQUIRE(return_stats(shuffled).mean_daily == Approx(return_stats(r).mean_daily).epsilon(1e-12));
        auto shifted = r;
        for (double& v : shifted) v += 0.003;
        REQUIRE(cvar(shifted, 0.05) == Approx(cvar(r, 0.05) + 0.003).epsilon(1e-12));
        REQUIRE(mean(shifted) == Approx(m + 0.003).epsilon(1e-12));
        if (r.size() > 1) {
            REQUIRE(return_stats(shifted).vol_daily == Approx(return_stats(r).vol_daily).epsilon(1e-9));
        }
    }
}

TEST_CASE("mean and median") {
    CHECK(median(std::vector<double>{1.0, 2.0, 97.0}) == 2.0);
    CHECK(mean(std::vector<double>{1.0, 2.0, 97.0}) == Approx(100.0 / 3.0).epsilon(1e-14));
    CHECK(median(std::vector<double>{4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK_THROWS_AS(median(std::vector<double>{}), DomainError);
}

TEST_CASE("series validation") {
    ReturnSeries r{{1, 2}, {0.1, -1.0}};
    CHECK_THROWS_AS(r.validate(), DomainError);
    PriceSeries p{{1}, {1.0, 2.0}};
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("day-value reader") {
    std::istringstream in("# comment\nday,price\n1,2.5\n2,2.75\n");
    const auto rows = read_day_values(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].first == 2);
    CHECK(rows[1].second == 2.75);
    std::istringstream bad("day,price\n1,abc\n");
    try {
        read_day_values(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}
