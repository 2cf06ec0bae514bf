#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "contagion/error.hpp"
#include "contagion/firesale.hpp"
#include "contagion/netgen.hpp"
#include "support.hpp"

using namespace contagion;
using support::bank;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// bank1: 100 of X1, equity e1; bank2: 50 of X1 + 50 of X2, equity 10.
BipartiteNetwork two_banks(double e1, double depth1 = 200.0) {
    Eigen::MatrixXd units(2, 2);
    units << 100, 0, 50, 50;
    return BipartiteNetwork::with_marked_holdings({bank("b1", 0, 100 - e1), bank("b2", 0, 90)},
                                                  {{"X1", depth1, 1.0}, {"X2", 200.0, 1.0}}, units);
}

FiresaleConfig linear(Shock shock) {
    FiresaleConfig c;
    c.impact = ImpactKind::Linear;
    c.shock = std::move(shock);
    return c;
}

BipartiteParams small_params(Engine& eng) {
    BipartiteParams p;
    p.n_banks = 2 + uniform_index(eng, 15);
    p.n_assets = 1 + uniform_index(eng, 6);
    p.bank_avg_degree = 1.0 + uniform01(eng) * static_cast<double>(p.n_assets - 1);
    p.capital_ratio = 0.02 + 0.2 * uniform01(eng);
    p.depth_factor = 0.2 + 3.0 * uniform01(eng);
    p.liquid_fraction = 0.2 * uniform01(eng);
    if (bernoulli(eng, 0.5)) p.size_dist = SizeDistribution::power_law(2.0);
    p.seed = eng();
    return p;
}

Shock random_shock(Engine& eng, const BipartiteNetwork& net) {
    if (bernoulli(eng, 0.5)) return Shock::random_bank();
    return Shock::asset(net.asset(uniform_index(eng, net.num_assets())).id, 0.05 + 0.95 * uniform01(eng));
}

} // namespace

TEST_CASE("price impact") {
    CHECK(price_impact(0.8, 0.0, 10.0, ImpactKind::Exponential) == 0.8);
    CHECK(price_impact(0.8, 0.0, 10.0, ImpactKind::Linear) == 0.8);
    CHECK(price_impact(1.0, 10.0, 10.0, ImpactKind::Exponential) == doctest::Approx(0.36788).epsilon(1e-5));
    CHECK(price_impact(0.5, 25.0, 10.0, ImpactKind::Linear) == doctest::Approx(0.5 * kPriceFloor));
    CHECK(price_impact(1.0, 5.0, 10.0, ImpactKind::Linear) == doctest::Approx(0.5));
    CHECK(price_impact(1.0, 1e9, kInf, ImpactKind::Exponential) == 1.0);
    CHECK_THROWS_AS(price_impact(1.0, -1.0, 10.0, ImpactKind::Linear), ValidationError);
    CHECK_THROWS_AS(price_impact(1.0, 1.0, 0.0, ImpactKind::Linear), ValidationError);

    Eigen::Vector2d p(1.0, 0.5), v(0.0, 1.0), d(1.0, 1.0);
    const auto moved = price_impact(p, v, d, ImpactKind::Exponential);
    CHECK(moved[0] == 1.0);
    CHECK(moved[1] == doctest::Approx(0.5 * std::exp(-1.0)));
}

TEST_CASE("price multiplier stays in (0, 1]") {
    auto eng = make_engine(1);
    for (int t = 0; t < 2000; ++t) {
        const double v = 100 * uniform01(eng), depth = 0.01 + 10 * uniform01(eng);
        for (auto kind : {ImpactKind::Linear, ImpactKind::Exponential}) {
            const double m = price_impact(1.0, v, depth, kind);
            CHECK(m > 0.0);
            CHECK(m <= 1.0);
            CHECK(price_impact(1.0, v + 1.0, depth, kind) <= m);
        }
    }
}

TEST_CASE("apply shock") {
    const auto net = two_banks(10);
    auto s = apply_shock(net, Shock::asset("X2", 0.3));
    CHECK(s.equity(0) == doctest::Approx(10.0));
    CHECK(s.equity(1) == doctest::Approx(10.0 - 15.0));
    CHECK(s.prices[1] == doctest::Approx(0.7));

    Eigen::MatrixXd units(2, 2);
    units << 100, 0, 50, 0;
    const auto unheld = BipartiteNetwork::with_marked_holdings({bank("a", 0, 90), bank("b", 0, 40)},
                                                               {{"X1", 1.0, 1.0}, {"X2", 1.0, 1.0}}, units);
    const auto u = apply_shock(unheld, Shock::asset("X2", 0.3));
    CHECK((u.equities() - u.initial_equity).cwiseAbs().maxCoeff() == 0.0);

    const auto wiped = apply_shock(net, Shock::asset("X2", 1.0));
    CHECK(wiped.prices[1] > 0.0);
    CHECK(wiped.prices[1] <= kPriceFloor);
    CHECK(wiped.equity(1) == doctest::Approx(10.0 - 50.0).epsilon(1e-5));

    const auto defaulted = apply_shock(net, Shock::bank("b1"));
    CHECK(defaulted.status[0] == BankStatus::Defaulted);
    CHECK(defaulted.shock_defaults == 1);

    CHECK_THROWS_AS(apply_shock(net, Shock::asset("nope", 0.3)), ValidationError);
    CHECK_THROWS_AS(apply_shock(net, Shock::bank("nope")), ValidationError);
    CHECK_THROWS_AS(apply_shock(net, Shock::asset("X1", 0.0)), ValidationError);
}

TEST_CASE("two-bank fire sale") {
    const auto r = run_firesale(two_banks(10), linear(Shock::asset("X2", 0.3)));
    CHECK(r.defaulted == std::vector<std::size_t>{0, 1});
    CHECK(r.fraction_defaulted == 1.0);
    CHECK(r.rounds == 2);
    CHECK(r.per_round_defaults == std::vector<std::size_t>{1, 1, 0});
    CHECK(r.converged);

    const auto net = two_banks(10);
    FiresaleState state = apply_shock(net, Shock::asset("X2", 0.3));
    firesale_round(state, linear({}));
    CHECK(state.prices[0] == doctest::Approx(0.75));
    CHECK(state.equity(0) == doctest::Approx(-15.0));

    const auto robust = run_firesale(two_banks(30), linear(Shock::asset("X2", 0.3)));
    CHECK(robust.defaulted == std::vector<std::size_t>{1});
    CHECK(robust.fraction_defaulted == 0.5);

    auto capped = linear(Shock::asset("X2", 0.3));
    capped.max_rounds = 1;
    CHECK_FALSE(run_firesale(two_banks(10), capped).converged);
}

TEST_CASE("bank default shock liquidates the portfolio") {
    const auto r = run_firesale(two_banks(10), linear(Shock::bank("b2")));
    // b2 sells 50 of X1 at depth 200: b1 loses 25 > 10.
    CHECK(r.defaulted == std::vector<std::size_t>{0, 1});
    CHECK(r.per_round_defaults.front() == 1);
    const auto deep = run_firesale(two_banks(10, kInf), linear(Shock::bank("b2")));
    CHECK(deep.defaulted == std::vector<std::size_t>{1});
}

TEST_CASE("leverage targeting") {
    Eigen::MatrixXd units(1, 1);
    units << 100;
    const auto net = BipartiteNetwork::with_marked_holdings({bank("b", 0, 95)}, {{"X", kInf, 1.0}}, units);
    FiresaleConfig c;
    c.policy = LiquidationPolicy::leverage_target(10.0);
    auto state = initial_state(net);
    const auto r = run_firesale(state, c);
    CHECK(r.defaulted.empty());
    CHECK(state.units(0, 0) == doctest::Approx(50.0));
    CHECK(state.total_assets(0) / state.equity(0) == doctest::Approx(10.0));
    CHECK(state.liabilities[0] == doctest::Approx(45.0));

    c.policy = LiquidationPolicy::leverage_target(1.0);
    CHECK_THROWS_AS(run_firesale(net, c), ValidationError);
}

TEST_CASE("infinite depth reduces to direct-shock insolvency") {
    auto eng = make_engine(8);
    for (int t = 0; t < 1000; ++t) {
        auto p = small_params(eng);
        p.depth_factor = kInf;
        const auto net = gen_bipartite(p);
        FiresaleConfig c;
        c.shock = random_shock(eng, net);
        c.seed = eng();
        const auto shocked = apply_shock(net, c.shock, c.seed);
        std::vector<std::size_t> direct;
        for (std::size_t i = 0; i < net.num_banks(); ++i)
            if (shocked.status[i] == BankStatus::Defaulted ||
                shocked.equity(i) < -tolerance(shocked.total_assets(i)))
                direct.push_back(i);
        const auto r = run_firesale(net, c);
        CHECK(r.defaulted == direct);
        CHECK(r.rounds <= 1);
    }
}

TEST_CASE("round invariants: monotone prices and equity, conservation, fixed point") {
    auto eng = make_engine(12);
    for (int t = 0; t < 1000; ++t) {
        const auto net = gen_bipartite(small_params(eng));
        FiresaleConfig c;
        c.impact = bernoulli(eng, 0.5) ? ImpactKind::Linear : ImpactKind::Exponential;
        if (bernoulli(eng, 0.3)) c.policy = LiquidationPolicy::leverage_target(5.0 + 20.0 * uniform01(eng));
        c.shock = random_shock(eng, net);
        c.seed = eng();
        auto state = apply_shock(net, c.shock, c.seed);
        for (std::size_t round = 0; round < 200; ++round) {
            const Eigen::VectorXd prices = state.prices;
            const Eigen::VectorXd eq = state.equities();
            const auto outcome = firesale_round(state, c);
            const Eigen::VectorXd dp = state.prices - prices;
            CHECK(dp.maxCoeff() <= 0.0);
            const Eigen::VectorXd de = state.equities() - eq;
            const Eigen::VectorXd expected = state.units * dp;
            for (Eigen::Index i = 0; i < de.size(); ++i) {
                const double scale = std::max(1.0, state.total_assets(static_cast<std::size_t>(i)));
                CHECK(de[i] <= 1e-9 * scale);
                CHECK(std::abs(de[i] - expected[i]) <= 1e-9 * scale);
            }
            if (!outcome.active()) break;
        }
        const auto before = state.prices;
        const auto status = state.status;
        CHECK_FALSE(firesale_round(state, c).active());
        CHECK(state.prices == before);
        CHECK(state.status == status);
    }
}

TEST_CASE("deeper markets never add defaults") {
    auto eng = make_engine(21);
    for (int t = 0; t < 1000; ++t) {
        auto p = small_params(eng);
        const auto shallow = gen_bipartite(p);
        p.depth_factor *= 1.0 + 4.0 * uniform01(eng);
        const auto deep = gen_bipartite(p);
        FiresaleConfig c;
        c.impact = bernoulli(eng, 0.5) ? ImpactKind::Linear : ImpactKind::Exponential;
        c.shock = random_shock(eng, shallow);
        c.seed = eng();
        const auto a = run_firesale(shallow, c).defaulted;
        const auto b = run_firesale(deep, c).defaulted;
        CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
    }
}

TEST_CASE("fire sale is deterministic") {
    BipartiteParams p;
    p.capital_ratio = 0.03;
    p.seed = 5;
    const auto net = gen_bipartite(p);
    FiresaleConfig c;
    c.shock = Shock::random_asset(0.5);
    c.seed = 9;
    const auto a = run_firesale(net, c);
    const auto b = run_firesale(net, c);
    CHECK(a.defaulted == b.defaulted);
    CHECK(a.total_equity_loss == b.total_equity_loss);
    CHECK(a.per_round_defaults == b.per_round_defaults);
}

TEST_CASE("critical leverage") {
    BipartiteParams p;
    p.n_banks = 50;
    p.n_assets = 10;
    p.bank_avg_degree = 3;
    FiresaleConfig base;
    CriticalLeverageOptions o;
    o.trials = 40;
    o.seed = 3;
    const auto r = critical_leverage(p, {1, 2, 40, 80}, base, o);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].probability == 0.0);
    CHECK(r.rows[3].probability > 0.0);
    REQUIRE(r.critical.has_value());

    o.jobs = 3;
    const auto parallel = critical_leverage(p, {1, 2, 40, 80}, base, o);
    for (std::size_t i = 0; i < 4; ++i) CHECK(parallel.rows[i].probability == r.rows[i].probability);

    p.depth_factor = kInf;
    const auto immune = critical_leverage(p, {1, 50, 100}, base, o);
    for (const auto& row : immune.rows) CHECK(row.probability == 0.0);
    CHECK_FALSE(immune.critical.has_value());

    CHECK_THROWS_AS(critical_leverage(p, {5, 2}, base, o), ValidationError);
    CHECK_THROWS_AS(critical_leverage(p, {0.5}, base, o), ValidationError);
    CHECK_THROWS_AS(critical_leverage(p, {}, base, o), ValidationError);
}
