#include "clmm/errors.hpp"
#include "clmm/replay.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace clmm;
using namespace clmm::replay;
using doctest::Approx;

namespace {

const std::filesystem::path kData = CLMM_TEST_DATA;
const std::string kHeader =
    "seq,unix_time,kind,position_id,tick_lower,tick_upper,liquidity,amount_x,amount_y,swap_in_token,swap_in_amount\n";
constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kT0 = 1650000000 - 1650000000 % kDay;  // a UTC midnight

std::vector<PoolEvent> parse(const std::string& body) {
    std::istringstream in(kHeader + body);
    return parse_events_csv(in);
}

PoolConfig pool_config(double price = 1.0) { return PoolConfig{FeeTier::from_fee(0.003), price, kDefaultTickBound}; }

std::string row(int seq, std::int64_t t, const std::string& rest) {
    return std::to_string(seq) + "," + std::to_string(t) + "," + rest + "\n";
}

ReplayResult run_file(const std::string& name) {
    const auto config = load_pool_config(kData / "pool.json");
    const auto events = load_events(kData / name);
    return run(config, events);
}

}  // namespace

TEST_CASE("parsing the event schema") {
    CHECK(parse("").empty());
    std::istringstream empty("");
    CHECK(parse_events_csv(empty).empty());

    const auto one = parse(row(1, kT0, "mint,5,-120,60,250.5,,,,"));
    REQUIRE(one.size() == 1);
    CHECK(one[0].kind == EventKind::Mint);
    CHECK(one[0].position.value == 5);
    CHECK(one[0].tick_lower == -120);
    CHECK(one[0].tick_upper == 60);
    CHECK(one[0].liquidity == 250.5);
    CHECK(one[0].line == 2);
    CHECK(std::string(to_string(one[0].kind)) == "mint");

    const auto sw = parse(row(1, kT0, "swap,,,,,,-3.5,Y,4"));
    CHECK(sw[0].swap_in_token == Token::Y);
    CHECK(sw[0].swap_in_amount == 4.0);
    CHECK(*sw[0].amount_y == -3.5);
    CHECK_FALSE(sw[0].amount_x.has_value());
}

TEST_CASE("schema violations name the line and field") {
    auto failure = [](const std::string& body) -> std::pair<std::size_t, std::string> {
        try {
            parse(body);
        } catch (const ParseError& e) {
            return {e.line(), e.field()};
        }
        return {0, "<none>"};
    };
    CHECK(failure(row(1, kT0, "mint,1,-60,60,abc,,,,")) == std::make_pair(std::size_t{2}, std::string("liquidity")));
    CHECK(failure(row(1, kT0, "mint,1,-60,60,,,,,")) == std::make_pair(std::size_t{2}, std::string("liquidity")));
    CHECK(failure(row(1, kT0, "mint,1,60,-60,1,,,,")).second == "tick_upper");
    CHECK(failure(row(1, kT0, "melt,1,-60,60,1,,,,")).second == "kind");
    CHECK(failure(row(1, kT0, "swap,,,,,,,Z,1")).second == "swap_in_token");
    CHECK(failure(row(1, kT0, "swap,,,,,,,X,-1")).second == "swap_in_amount");
    CHECK(failure(row(1, kT0, "swap,,,,,,,X")).second == "<row>");
    CHECK(failure("\n\n" + row(1, kT0, "burn,x,,,,,,,")) == std::make_pair(std::size_t{4}, std::string("position_id")));

    std::istringstream missing("seq,unix_time,kind\n1,2,swap\n");
    CHECK_THROWS_AS(parse_events_csv(missing), ParseError);
}

TEST_CASE("ordering and reference validation") {
    CHECK_THROWS_AS(parse(row(1, kT0, "burn,1,,,,,,,") + row(2, kT0 + 5, "mint,1,-60,60,1,,,,")), OrderingError);
    CHECK_THROWS_AS(parse(row(1, kT0 + 10, "mint,1,-60,60,1,,,,") + row(2, kT0, "swap,,,,,,,X,1")), OrderingError);
    CHECK_THROWS_AS(parse(row(2, kT0, "mint,1,-60,60,1,,,,") + row(1, kT0, "swap,,,,,,,X,1")), OrderingError);
    CHECK_THROWS_AS(parse(row(1, kT0, "mint,1,-60,60,1,,,,") + row(2, kT0, "mint,1,-60,60,1,,,,")), OrderingError);
    CHECK_THROWS_AS(parse(row(1, kT0, "mint,1,-60,60,1,,,,") + row(2, kT0, "burn,1,,,,,,,") +
                          row(3, kT0, "collect,1,,,,,,,")),
                    OrderingError);
    try {
        parse(row(1, kT0, "mint,1,-60,60,1,,,,") + row(2, kT0 + 1, "collect,2,,,,,,,"));
    } catch (const OrderingError& e) {
        CHECK(e.line() == 3);
    }
    // ties in time are fine when the sequence increases
    CHECK(parse(row(1, kT0, "mint,1,-60,60,1,,,,") + row(2, kT0, "swap,,,,,,,X,1")).size() == 2);
}

TEST_CASE("JSON lines carry the same events as CSV") {
    std::istringstream jl(
        R"({"seq":1,"unix_time":1650000000,"kind":"mint","position_id":1,"tick_lower":-600,"tick_upper":600,"liquidity":1000})"
        "\n"
        R"({"seq":2,"unix_time":1650003600,"kind":"swap","swap_in_token":"Y","swap_in_amount":20,"amount_x":null})"
        "\n\n");
    const auto a = parse_events_jsonl(jl);
    const auto b = parse(row(1, 1650000000, "mint,1,-600,600,1000,,,,") + row(2, 1650003600, "swap,,,,,,,Y,20"));
    REQUIRE(a.size() == 2);
    CHECK(a[0].liquidity == b[0].liquidity);
    CHECK(a[1].swap_in_amount == b[1].swap_in_amount);
    CHECK(a[1].swap_in_token == b[1].swap_in_token);
    std::istringstream bad("{\"seq\":1,\n");
    CHECK_THROWS_AS(parse_events_jsonl(bad), ParseError);
}

TEST_CASE("day indexing") {
    CHECK(day_of(0, 0) == 0);
    CHECK(day_of(86399, 0) == 0);
    CHECK(day_of(86400, 0) == 1);
    CHECK(day_of(-1, 0) == -1);
    CHECK(day_of(86400 + 3600, 3600) == 1);
    CHECK(day_of(3599, 3600) == -1);
}

TEST_CASE("mint, no swaps, burn: flat returns") {
    const auto events = parse(row(1, kT0 + 100, "mint,1,-600,600,1000,,,,") +
                              row(2, kT0 + 100, "mint,2,600,1200,1000,,,,") +
                              row(3, kT0 + 5 * kDay, "burn,1,,,,,,,") + row(4, kT0 + 5 * kDay + 1, "burn,2,,,,,,,"));
    const auto r = run(pool_config(), events);
    const auto& a = r.ledgers.at(PositionId{1});
    const auto& b = r.ledgers.at(PositionId{2});
    CHECK(a.lifetime_days == 5);
    CHECK(a.itm_days == 5);
    CHECK(b.itm_days == 0);
    CHECK(a.time_itm_fraction(ItmAccounting::Daily) == 1.0);
    CHECK(b.time_itm_fraction(ItmAccounting::Daily) == 0.0);
    CHECK(b.time_itm_fraction(ItmAccounting::PerEvent) == 0.0);
    CHECK(a.time_itm_fraction(ItmAccounting::PerEvent) == 1.0);
    for (const auto* l : {&a, &b}) {
        for (double ret : l->daily_returns()) CHECK(ret == 0.0);
        CHECK(l->closed);
        CHECK(l->total_return == Approx(0.0).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("one full-range provider and one swap") {
    const Tick lo = min_usable_tick(60), hi = max_usable_tick(60);
    const auto events = parse(row(1, kT0, "mint,1," + std::to_string(lo) + "," + std::to_string(hi) + ",5000,,,,") +
                              row(2, kT0 + 3600, "swap,,,,,,,X,40") + row(3, kT0 + 7200, "burn,1,,,,,,,"));
    const auto r = run(pool_config(), events);
    const auto& l = r.ledgers.at(PositionId{1});
    CHECK(l.fees_collected.x == Approx(0.003 * 40).epsilon(1e-12));
    CHECK(l.fees_collected.y == 0.0);
    // return by hand: exit reserves plus fee against the deposit at the exit price
    const double s1 = r.pool.price();
    const double v_pos = l.exit_reserves.x * s1 + l.exit_reserves.y;
    const double v_hold = l.snapshot.deposit.x * s1 + l.snapshot.deposit.y;
    CHECK(l.total_return == Approx((v_pos + 0.12 * s1 - v_hold) / v_hold).epsilon(1e-12));
    const auto x0 = 5000.0, y0 = 5000.0;
    CHECK(v_hold == Approx(x0 * s1 + y0).epsilon(1e-6));
    const auto paid = r.pool.fees_paid_total();
    CHECK(paid.x == Approx(0.12).epsilon(1e-12));
}

TEST_CASE("time in range matches a day-by-day recount") {
    std::string body = row(1, kT0 + 10, "mint,1,-120,120,4000,,,,") + row(2, kT0 + 20, "mint,2,0,600,2500,,,,") +
                       row(3, kT0 + 30, "mint,3,-6000,6000,500,,,,");
    int seq = 4;
    const char* moves[] = {"Y,30", "Y,25", "X,90", "X,40", "Y,70", "Y,10", "X,5", "X,60", "Y,120", "X,30"};
    for (int d = 0; d < 10; ++d) {
        body += row(seq++, kT0 + d * kDay + 5000, std::string("swap,,,,,,,") + moves[d]);
    }
    body += row(seq++, kT0 + 10 * kDay + 100, "swap,,,,,,,X,1");
    const auto events = parse(body);
    const auto r = run(pool_config(), events);
    REQUIRE(r.days.size() == 10);
    std::size_t crossings = 0;
    for (const auto& s : r.swaps) crossings += s.ticks_crossed;
    CHECK(crossings >= 2);

    for (const auto& [id, ledger] : r.ledgers) {
        const double lo = tick_to_price(ledger.ticks.lower), hi = tick_to_price(ledger.ticks.upper);
        std::int64_t itm = 0;
        REQUIRE(ledger.daily.size() == r.days.size());
        for (std::size_t i = 0; i < r.days.size(); ++i) {
            const bool in = r.days[i].price >= lo && r.days[i].price < hi;
            REQUIRE(ledger.daily[i].in_range == in);
            itm += in ? 1 : 0;
        }
        CHECK(ledger.itm_days == itm);
        CHECK(ledger.lifetime_days == static_cast<std::int64_t>(r.days.size()));
    }
    CHECK(r.ledgers.at(PositionId{3}).itm_days == 10);
    CHECK(r.ledgers.at(PositionId{1}).itm_days < 10);
    CHECK(r.ledgers.at(PositionId{2}).itm_days < 10);
}

TEST_CASE("fixtures conserve fees and keep time accounting exact") {
    for (const char* name : {"events_small.csv", "events_replay.csv"}) {
        const auto r = run_file(name);
        const auto paid = r.pool.fees_paid_total();
        const auto acc = fees_accounted(r);
        CHECK(oracle::rel_err(paid.x, acc.x) < 1e-9);
        CHECK(oracle::rel_err(paid.y, acc.y) < 1e-9);
        for (const auto& [id, l] : r.ledgers) {
            std::int64_t out_of_range = 0;
            for (const auto& d : l.daily) out_of_range += d.in_range ? 0 : 1;
            CHECK(l.itm_days + out_of_range == l.lifetime_days);
            CHECK(l.itm_days <= l.lifetime_days);
            CHECK(l.width_bps == l.ticks.upper - l.ticks.lower);
            CHECK(l.itm_seconds <= l.lifetime_seconds);
        }
    }
}

TEST_CASE("replaying a prefix yields ledger prefixes") {
    const auto config = load_pool_config(kData / "pool.json");
    const auto events = load_events(kData / "events_replay.csv");
    const auto full = run(config, events);
    for (std::size_t cut : {std::size_t{10}, events.size() / 3, events.size() / 2, events.size() - 7}) {
        const auto part = run(config, std::span(events).first(cut));
        for (const auto& [id, l] : part.ledgers) {
            const auto& f = full.ledgers.at(id);
            REQUIRE(l.daily.size() <= f.daily.size());
            for (std::size_t i = 0; i < l.daily.size(); ++i) {
                REQUIRE(l.daily[i].day == f.daily[i].day);
                REQUIRE(l.daily[i].position_value == f.daily[i].position_value);
                REQUIRE(l.daily[i].daily_return == f.daily[i].daily_return);
            }
        }
    }
}

TEST_CASE("burned ledgers are frozen") {
    const auto r = run_file("events_replay.csv");
    const auto& burned = r.ledgers.at(PositionId{5});
    CHECK(burned.closed);
    REQUIRE(burned.burn_time.has_value());
    CHECK(burned.daily.back().day < day_of(*burned.burn_time, 0) + 1);
    CHECK(burned.fees_unclaimed.x == 0.0);
}

TEST_CASE("replay errors carry the event index") {
    auto events = parse(row(1, kT0, "mint,1,-30,60,1,,,,"));
    try {
        run(pool_config(), events);
        FAIL("expected a replay error");
    } catch (const ReplayError& e) {
        CHECK(e.index() == 0);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("pool statistics") {
    auto make = [](std::uint64_t id, double size, std::int64_t first, std::int64_t days) {
        PositionLedger l;
        l.id = PositionId{id};
        l.size = size;
        l.width_bps = 100.0 * static_cast<double>(id);
        for (std::int64_t d = 0; d < days; ++d) l.daily.push_back({first + d, 1.0, size, size, 0.0, 0.0, d % 2 == 0});
        l.lifetime_days = days;
        return l;
    };
    std::vector<DayClose> days;
    for (std::int64_t d = 0; d < 60; ++d) days.push_back({d, 1.0 + 0.01 * static_cast<double>(d % 3), 5.0, 1});

    std::map<PositionId, PositionLedger> one{{PositionId{1}, make(1, 42.0, 0, 10)}};
    const auto s1 = pool_stats(one, days);
    CHECK(s1[0].median_size == 42.0);
    CHECK(s1[0].mean_size == 42.0);

    std::map<PositionId, PositionLedger> three{{PositionId{1}, make(1, 1.0, 0, 10)},
                                               {PositionId{2}, make(2, 2.0, 0, 40)},
                                               {PositionId{3}, make(3, 97.0, 5, 20)}};
    const auto s3 = pool_stats(three, days);
    REQUIRE(s3.size() == 2);
    CHECK(s3[0].active_positions == 3);
    CHECK(s3[0].median_size == 2.0);
    CHECK(std::abs(s3[0].mean_size - 100.0 / 3.0) < 1e-9);
    CHECK(s3[0].median_width_bps == 200.0);
    CHECK(s3[0].mean_daily_volume == 5.0);
    CHECK(s3[1].active_positions == 1);
    CHECK(s3[1].mean_lifetime_days == 40.0);

    std::vector<DayClose> quiet{{0, 2.0, 0.0, 0}, {1, 2.0, 0.0, 0}, {2, 2.0, 0.0, 0}};
    const auto sq = pool_stats(one, quiet);
    CHECK(sq[0].mean_daily_volume == 0.0);
    CHECK(sq[0].realized_volatility == 0.0);

    // positions below the value floor are left out of the aggregates
    std::map<PositionId, PositionLedger> dust{{PositionId{1}, make(1, 5e-5, 0, 10)}, {PositionId{2}, make(2, 8.0, 0, 10)}};
    CHECK(pool_stats(dust, days)[0].active_positions == 1);

    CHECK_THROWS_AS(pool_stats({}, days), DomainError);
    CHECK_THROWS_AS(pool_stats(one, days, 0), DomainError);
}

TEST_CASE("risk report filters") {
    const auto r = run_file("events_replay.csv");
    const auto rows = risk_report(r.ledgers);
    for (const auto& row : rows) CHECK(row.lifetime_days > 30);
    // position 5 lived 19 days
    CHECK(std::none_of(rows.begin(), rows.end(), [](const RiskRow& x) { return x.id.value == 5; }));
    RiskFilter loose;
    loose.min_lifetime_days = 0;
    CHECK(risk_report(r.ledgers, loose).size() == r.ledgers.size());
    RiskFilter exact;
    exact.min_lifetime_days = r.ledgers.at(PositionId{2}).lifetime_days;
    const auto strict = risk_report(r.ledgers, exact);
    CHECK(std::none_of(strict.begin(), strict.end(), [](const RiskRow& x) { return x.id.value == 2; }));
    RiskFilter rich;
    rich.min_lifetime_days = 0;
    rich.min_value = 1e12;
    CHECK(risk_report(r.ledgers, rich).empty());
    for (const auto& row : rows) CHECK(row.cvar05 <= row.mean_daily);
}

TEST_CASE("ledger CSV round trip") {
    const auto r = run_file("events_replay.csv");
    std::ostringstream out;
    write_ledger_csv(out, r.ledgers, "test");
    std::istringstream in(out.str());
    const auto back = read_ledger_csv(in);
    REQUIRE(back.size() == r.ledgers.size());
    for (const auto& [id, l] : r.ledgers) {
        const auto& b = back.at(id);
        CHECK(b.lifetime_days == l.lifetime_days);
        CHECK(b.itm_days == l.itm_days);
        CHECK(b.width_bps == l.width_bps);
        REQUIRE(b.daily.size() == l.daily.size());
        for (std::size_t i = 0; i < l.daily.size(); ++i) {
            CHECK(b.daily[i].daily_return == Approx(l.daily[i].daily_return).epsilon(1e-10));
        }
    }
    const auto rows_a = risk_report(r.ledgers);
    const auto rows_b = risk_report(back);
    REQUIRE(rows_a.size() == rows_b.size());
    for (std::size_t i = 0; i < rows_a.size(); ++i) {
        CHECK(rows_b[i].cvar05 == Approx(rows_a[i].cvar05).epsilon(1e-9));
    }
}

TEST_CASE("replay outputs match the golden files and are byte-stable") {
    struct Writer {
        const char* file;
        std::string (*render)(const ReplayResult&);
    };
    const Writer writers[] = {
        {"ledger.csv", [](const ReplayResult& r) { std::ostringstream o; write_ledger_csv(o, r.ledgers); return o.str(); }},
        {"positions.csv", [](const ReplayResult& r) { std::ostringstream o; write_positions_csv(o, r.ledgers, ItmAccounting::Daily); return o.str(); }},
        {"swaps.csv", [](const ReplayResult& r) { std::ostringstream o; write_swaps_csv(o, r.swaps); return o.str(); }},
        {"days.csv", [](const ReplayResult& r) { std::ostringstream o; write_days_csv(o, r.days); return o.str(); }},
    };
    for (const auto& [fixture, dir] : {std::pair{"events_small.csv", "small"}, std::pair{"events_replay.csv", "replay"}}) {
        const auto a = run_file(fixture);
        const auto b = run_file(fixture);
        for (const auto& w : writers) {
            CAPTURE(fixture);
            CAPTURE(w.file);
            const std::string first = w.render(a);
            CHECK(first == w.render(b));
            CHECK(oracle::data_lines_of(first) == oracle::data_lines(kData / "golden" / dir / w.file));
        }
    }
}
