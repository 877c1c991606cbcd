#include <cmath>
#include <random>

#include "bamot/error.hpp"
#include "bamot/fixtures.hpp"
#include "bamot/metrics.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace bamot;

TEST_CASE("distance of a measure to itself") {
    const Marginal m = fixtures::spx_ask();
    CHECK(directed_distance(m, m).value == 0.0);
    CHECK(bid_ask_distance(m, m).value == 0.0);
    const auto d = DiscreteMeasure({1.0, 2.0}, {0.5, 0.5});
    CHECK(directed_distance_lp(d, d).value == doctest::Approx(0.0));
    CHECK(wasserstein1(d, d) == 0.0);
    CHECK(wasserstein1(m, m) == 0.0);
}

TEST_CASE("counterexample family") {
    const auto [mu1, nu1] = counterexample_pair(1);
    CHECK(mu1.size() == 3);
    CHECK(nu1.size() == 4);
    CHECK(nu1.weights()[0] == doctest::Approx(1.0 / 6));
    CHECK(nu1.weights()[1] == doctest::Approx(1.0 / 3));
    CHECK(directed_distance(nu1, mu1).value == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(directed_distance(mu1, nu1).value == 0.0);
    const auto lp = directed_distance_lp(nu1, mu1);
    CHECK(lp.value == doctest::Approx(1.0 / 3).epsilon(1e-12));

    // the strangle around the centre of mu_1 attains the value
    const double centre = mu1.barycenter();
    const auto strangle = [&](double x) { return std::max(centre - 2.0 - x, 0.0) + std::max(x - centre - 2.0, 0.0); };
    double gain = 0.0;
    for (std::size_t i = 0; i < nu1.size(); ++i) gain += nu1.weights()[i] * strangle(nu1.atoms()[i]);
    for (std::size_t i = 0; i < mu1.size(); ++i) gain -= mu1.weights()[i] * strangle(mu1.atoms()[i]);
    CHECK(gain == doctest::Approx(1.0 / 3));

    for (int n = 1; n <= 5; ++n) {
        const auto [mu, nu] = counterexample_pair(n);
        const double c = 1.0 / (2 * n + 1);
        CHECK(std::abs(directed_distance(nu, mu).value - c) < 1e-12);
        CHECK(directed_distance(mu, nu).value < 1e-14);
        // the symmetrised distance averages the two directions
        CHECK(std::abs(bid_ask_distance(mu, nu).value - 0.5 * c) < 1e-12);
        CHECK(std::abs(wasserstein1(mu, nu) - 1.0) < 1e-12);
        if (n <= 3) CHECK(convex_order_leq(mu, nu, 1e-12).holds);
    }
}

TEST_CASE("closed form and LP oracle agree on random equal-mean pairs") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto a = gen::discrete(rng, 3 + t % 5);
        const auto b = gen::with_mean(gen::discrete(rng, 2 + t % 6), a.barycenter());
        const double closed = directed_distance(a, b).value;
        const double viaLp = directed_distance_lp(a, b).value;
        CHECK(std::abs(closed - viaLp) < 1e-8);
    }
}

TEST_CASE("zero directed distance iff convex order") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 100; ++t) {
        const auto a = gen::discrete(rng, 4);
        const auto b = t % 2 == 0 ? gen::spread(rng, a, 0.8) : gen::with_mean(gen::discrete(rng, 4), a.barycenter());
        const bool ordered = convex_order_leq(a, b, 1e-12).holds;
        const bool zero = directed_distance(a, b).value <= 1e-12;
        CHECK(ordered == zero);
    }
}

TEST_CASE("triangle inequality and domination by W1") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; ++t) {
        const auto a = gen::discrete(rng, 4);
        const auto b = gen::with_mean(gen::discrete(rng, 5), a.barycenter());
        const auto c = gen::with_mean(gen::discrete(rng, 3), a.barycenter());
        const double ab = directed_distance(a, b).value;
        const double bc = directed_distance(b, c).value;
        const double ac = directed_distance(a, c).value;
        CHECK(ac <= ab + bc + 1e-9);
        CHECK(bid_ask_distance(a, b).value <= wasserstein1(a, b) + 1e-12);
        CHECK(bid_ask_distance(a, b).value == bid_ask_distance(b, a).value);
    }
}

TEST_CASE("unequal barycenters need the LP path") {
    const Marginal a = DiscreteMeasure::dirac(1.0);
    const Marginal b = DiscreteMeasure::dirac(2.0);
    CHECK_THROWS_AS(directed_distance(a, b), InputError);
    // psi(x) = -x: (delta_1 - delta_2)(psi) = 1
    CHECK(directed_distance_lp(DiscreteMeasure::dirac(1.0), DiscreteMeasure::dirac(2.0)).value ==
          doctest::Approx(1.0));
}

TEST_CASE("wasserstein1 basics") {
    CHECK(wasserstein1(DiscreteMeasure::dirac(0.0), DiscreteMeasure::dirac(2.5)) == doctest::Approx(2.5));
    // shifted log-normal vs its discretisation: small
    const Marginal m = fixtures::bs(1.0, 0.2, 1.0);
    const auto d = discretize(m, Grid::quantile(m, GridSpec{}));
    const double w = wasserstein1(m, d);
    CHECK(w > 0.0);
    CHECK(w < 0.01);
    // W1 between two Diracs computed through the quadrature path
    const Marginal l1 = MixtureMarginal({{1.0, 0.1, 1.0}});
    const Marginal l2 = MixtureMarginal({{2.0, 0.1, 1.0}});
    // comonotone coupling: E|X2 - X1| = 1 for scaled log-normals
    CHECK(wasserstein1(l1, l2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("black-scholes pair") {
    const Marginal bid = fixtures::bs(1.0, 0.15, 1.0);
    const Marginal ask = fixtures::bs(1.0, 0.20, 1.0);
    const auto r = directed_distance(ask, bid);
    REQUIRE(r.argmax_strike);
    CHECK(std::abs(*r.argmax_strike - 1.0) < 0.05);
    CHECK(r.value == doctest::Approx(2.0 * (ask.call_price(*r.argmax_strike) - bid.call_price(*r.argmax_strike))));
    CHECK(directed_distance(bid, ask).value == 0.0);

    const std::pair<double, Marginal> parts[] = {{0.5, bid}, {0.5, ask}};
    const Marginal mid = Marginal::combine(parts);
    const double full = bid_ask_distance(bid, ask).value;
    const double half = bid_ask_distance(deform(bid, mid, 0.5), deform(ask, mid, 0.5)).value;
    CHECK(std::abs(half - 0.5 * full) < 1e-9);
}
