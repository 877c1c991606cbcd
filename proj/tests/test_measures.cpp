#include <cmath>
#include <random>

#include "bamot/black.hpp"
#include "bamot/error.hpp"
#include "bamot/fixtures.hpp"
#include "bamot/measures.hpp"
#include "doctest.h"

using namespace bamot;

TEST_CASE("discrete measure basics") {
    const Marginal d1 = DiscreteMeasure::dirac(1.0);
    CHECK(d1.call_price(0.5) == doctest::Approx(0.5));
    CHECK(d1.call_price(0.0) == doctest::Approx(1.0));
    CHECK(d1.cdf(0.99) == 0.0);
    CHECK(d1.cdf(1.0) == 1.0);
    CHECK(d1.potential(3.0) == doctest::Approx(2.0));
    CHECK(d1.barycenter() == 1.0);

    const Marginal two = DiscreteMeasure({0.0, 2.0}, {0.5, 0.5});
    CHECK(two.barycenter() == 1.0);

    CHECK_THROWS_AS(DiscreteMeasure({1.0, 0.5}, {0.5, 0.5}), InputError);
    CHECK_THROWS_AS(DiscreteMeasure({1.0, 2.0}, {0.5, 0.6}), InputError);
    CHECK_THROWS_AS(DiscreteMeasure({-1.0}, {1.0}), InputError);
}

TEST_CASE("mixture validation") {
    CHECK_THROWS_AS(MixtureMarginal({{1.0, 0.2, 0.5}}), InputError);
    CHECK_THROWS_AS(MixtureMarginal({{1.0, 0.0, 1.0}}), InputError);
    CHECK_THROWS_AS(MixtureMarginal({{1.0, 0.2, 1.0}}, 1.1), InputError);
    CHECK_NOTHROW(MixtureMarginal({{1.0, 0.2, 1.0}}, 1.0));
}

TEST_CASE("log-normal median and call at zero") {
    const Marginal m = MixtureMarginal({{1.0, 0.2, 1.0}});
    CHECK(m.cdf(std::exp(-0.02)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.call_price(0.0) == doctest::Approx(1.0));
    CHECK(m.quantile(0.5) == doctest::Approx(std::exp(-0.02)).epsilon(1e-10));
}

TEST_CASE("S&P bid and ask mixtures") {
    const Marginal ask = fixtures::spx_ask();
    const Marginal bid = fixtures::spx_bid();
    CHECK(std::abs(ask.barycenter() - 5861.0) < 0.5);
    CHECK(ask.barycenter() == doctest::Approx(bid.barycenter()).epsilon(1e-14));
    const auto r = convex_order_leq(bid, ask, default_order_tol(ask));
    CHECK(r.holds);
    CHECK_FALSE(convex_order_leq(ask, bid, default_order_tol(ask)).holds);

    const Marginal mid = fixtures::spx_mid();
    const double digital = 100.0 * (1.0 - mid.cdf(fixtures::spx_digital_strike));
    CHECK(std::abs(digital - 37.14) <= 0.05);

    for (int i = 0; i < 200; ++i) {
        const double x = 3000.0 + 20.0 * i;
        CHECK(bid.potential(x) <= ask.potential(x) + 1e-9);
    }
}

TEST_CASE("convex order witness on barycenter mismatch") {
    const auto r = convex_order_leq(DiscreteMeasure::dirac(1.0), DiscreteMeasure::dirac(2.0), 1e-9);
    CHECK_FALSE(r.holds);
    CHECK(r.witness_strike == 0.0);
    const Marginal d = DiscreteMeasure::dirac(1.0);
    CHECK(convex_order_leq(d, d, 1e-9).holds);
}

TEST_CASE("call curve laws and potential identity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<LogNormalComponent> cs;
        for (int j = 0; j < 3; ++j) cs.push_back({0.5 + u(rng), 0.05 + 0.4 * u(rng), 0.1 + u(rng)});
        const Marginal m = MixtureMarginal::normalized(cs);
        const double f = m.barycenter();
        CHECK(m.call_price(0.0) == doctest::Approx(f).epsilon(1e-13));
        for (int i = 0; i < 100; ++i) {
            const double x = 3.0 * u(rng);
            CHECK(std::abs(m.potential(x) - 2.0 * m.call_price(x) - x + f) < 1e-10);
            CHECK(m.call_price(x) >= std::max(f - x, 0.0) - 1e-12);
            const double h = 1e-3;
            CHECK(m.call_price(x + h) - 2.0 * m.call_price(x + 2 * h) + m.call_price(x + 3 * h) >= -1e-10);
            const double hh = 1e-4 * f;
            if (x > hh) {
                const double fd = (m.call_price(x + hh) - m.call_price(x - hh)) / (2 * hh) + 1.0;
                CHECK(std::abs(fd - m.cdf(x)) <= 1e-6 + m.density(x) * hh);
            }
        }
    }
}

TEST_CASE("partial moments add up") {
    const Marginal m = fixtures::spx_ask();
    const auto all = m.partial_moments(-1.0, INFINITY);
    CHECK(all.mass == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(all.moment == doctest::Approx(m.barycenter()).epsilon(1e-13));
    const auto lo = m.partial_moments(-1.0, 5800.0);
    const auto hi = m.partial_moments(5800.0, INFINITY);
    CHECK(lo.mass + hi.mass == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lo.mass == doctest::Approx(m.cdf(5800.0)).epsilon(1e-13));
    // E[X; X > K] - K P(X > K) = call
    CHECK(hi.moment - 5800.0 * hi.mass == doctest::Approx(m.call_price(5800.0)).epsilon(1e-10));
}

TEST_CASE("discretize") {
    const Marginal m = MixtureMarginal({{1.0, 0.2, 1.0}});
    const Grid g = Grid::quantile(m, GridSpec{});
    const DiscreteMeasure d = discretize(m, g);
    CHECK(d.barycenter() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(convex_order_leq(d, m, 1e-9).holds);

    const Marginal four = DiscreteMeasure({0.0, 1.0, 2.0, 3.0}, {0.25, 0.25, 0.25, 0.25});
    const DiscreteMeasure two = discretize(four, Grid{{0.5, 2.5}, {}});
    REQUIRE(two.size() == 2);
    CHECK(two.atoms()[0] == doctest::Approx(0.5));
    CHECK(two.atoms()[1] == doctest::Approx(2.5));

    const DiscreteMeasure same = discretize(four, Grid{{0.0, 1.0, 2.0, 3.0}, {}});
    CHECK(same.atoms() == std::vector<double>{0.0, 1.0, 2.0, 3.0});

    CHECK_THROWS_AS(discretize(m, Grid{{0.9, 1.0, 1.1}, {}}), InputError);
}

TEST_CASE("deform") {
    const Marginal bid = fixtures::bs(1.0, 0.15, 1.0);
    const Marginal ask = fixtures::bs(1.0, 0.20, 1.0);
    const std::pair<double, Marginal> parts[] = {{0.5, bid}, {0.5, ask}};
    const Marginal mid = Marginal::combine(parts);
    const Marginal d0 = deform(ask, mid, 0.0);
    const Marginal d1 = deform(ask, mid, 1.0);
    CHECK(d0.call_price(1.1) == ask.call_price(1.1));
    CHECK(d1.call_price(1.1) == mid.call_price(1.1));
    const Marginal half = deform(ask, mid, 0.5);
    CHECK(half.call_price(0.9) == doctest::Approx(0.5 * ask.call_price(0.9) + 0.5 * mid.call_price(0.9)));
    CHECK_THROWS_AS(deform(ask, mid, 1.5), InputError);
}

TEST_CASE("meet and join") {
    const CallCurve lo = CallCurve::of(fixtures::bs(1.0, 0.17, 1.0));
    const CallCurve hi = CallCurve::of(fixtures::bs(1.0, 0.18, 1.0));
    const CallCurve one[] = {lo};
    CHECK(convex_meet(one)(1.0) == lo(1.0));
    const CallCurve pair[] = {lo, hi};
    const CallCurve meet = convex_meet(pair);
    const CallCurve join = convex_join(pair);
    for (double k = 0.5; k < 1.6; k += 0.01) {
        CHECK(meet(k) == doctest::Approx(lo(k)).epsilon(1e-5));
        CHECK(join(k) == doctest::Approx(hi(k)).epsilon(1e-12));
    }

    // crossing curves
    const CallCurve a = CallCurve::piecewise_linear({0.0, 1.0, 2.0}, {1.0, 0.3, 0.0});
    const CallCurve b = CallCurve::piecewise_linear({0.0, 0.5, 1.5, 3.0}, {1.0, 0.5, 0.1, 0.0});
    const CallCurve ab[] = {a, b};
    const CallCurve m = convex_meet(ab);
    double prev2 = m(0.0), prev1 = m(0.003);
    for (int i = 2; i < 1000; ++i) {
        const double k = 0.003 * i;
        const double v = m(k);
        CHECK(v <= a(k) + 1e-12);
        CHECK(v <= b(k) + 1e-12);
        CHECK(v - 2 * prev1 + prev2 >= -1e-12);
        prev2 = prev1;
        prev1 = v;
    }
    const CallCurve c = CallCurve::piecewise_linear({0.0, 1.0}, {2.0, 1.0});
    const CallCurve ac[] = {a, c};
    CHECK_THROWS_AS(convex_meet(ac), InputError);
    CHECK_THROWS_AS(convex_join(ac), InputError);
}

TEST_CASE("to_measure reprices the knots") {
    const CallCurve c = CallCurve::piecewise_linear({0.0, 1.0, 2.0}, {1.2, 0.5, 0.1});
    const DiscreteMeasure d = c.to_measure();
    double total = 0.0;
    for (double w : d.weights()) total += w;
    CHECK(total == doctest::Approx(1.0));
    CHECK(d.barycenter() == doctest::Approx(1.2));
    CHECK(d.call_price(1.0) == doctest::Approx(0.5));
    CHECK(d.call_price(2.0) == doctest::Approx(0.1));
}

TEST_CASE("term structure check") {
    const std::vector<Marginal> bids{fixtures::bs(100, 0.19, 0.5), fixtures::bs(100, 0.17, 1.0)};
    const std::vector<Marginal> asks{fixtures::bs(100, 0.20, 0.5), fixtures::bs(100, 0.18, 1.0)};
    CHECK_FALSE(check_bid_ask_order(bids, asks, 1e-6).has_value());
    const std::vector<Marginal> bad_asks{fixtures::bs(100, 0.20, 0.5), fixtures::bs(100, 0.10, 1.0)};
    const auto v = check_bid_ask_order(bids, bad_asks, 1e-6);
    REQUIRE(v.has_value());
    CHECK(v->ask_maturity == 1);
}
