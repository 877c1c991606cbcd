#include <doctest.h>

#include <random>
#include <sstream>

#include "bamot/error.hpp"
#include "bamot/quotes.hpp"
#include "generators.hpp"

using namespace bamot;

namespace {

QuoteChain full_chain() {
    QuoteChain c;
    c.forward = 100.0;
    c.strikes = {90.0, 100.0, 110.0};
    c.put_bid = {1.0, 4.0, 10.0};
    c.put_ask = {2.0, 5.0, 11.5};
    c.call_bid = {11.0, 4.0, 1.0};
    c.call_ask = {12.0, 5.0, 1.5};
    c.add_zero_strike();
    return c;
}

CallChain zero_spread(const Marginal& m, std::vector<double> strikes) {
    CallChain c;
    c.forward = m.barycenter();
    c.strikes = std::move(strikes);
    for (double k : c.strikes) {
        c.bid.push_back(m.call_price(k));
        c.ask.push_back(m.call_price(k));
    }
    return c;
}

}  // namespace

TEST_CASE("imputation") {
    const auto full = full_chain();
    const auto same = impute(full);
    CHECK(same.call_ask == full.call_ask);
    CHECK(same.put_bid == full.put_bid);

    auto gaps = full;
    gaps.call_ask[2].reset();
    gaps.put_ask[3].reset();
    gaps.call_bid[1].reset();
    const auto im = impute(gaps);
    CHECK(*im.call_ask[2] == 100.0);
    CHECK(*im.put_ask[3] == 110.0);
    CHECK(*im.call_bid[1] == 0.0);
    CHECK(!gaps.call_ask[2]);
}

TEST_CASE("put-call combination") {
    SUBCASE("imputed puts leave call bids alone") {
        auto c = full_chain();
        for (auto& p : c.put_bid) p.reset();
        for (auto& p : c.put_ask) p.reset();
        const auto calls = combine_put_call(impute(c));
        for (std::size_t m = 0; m < calls.strikes.size(); ++m) CHECK(calls.bid[m] == *impute(c).call_bid[m]);
    }
    SUBCASE("parity tightens the call quotes") {
        const auto calls = combine_put_call(impute(full_chain()));
        // strike 110: put bid 10 -> call bid max(1, 0) = 1; put ask 11.5 -> call ask min(1.5, 1.5)
        CHECK(calls.bid[3] == doctest::Approx(1.0));
        CHECK(calls.ask[3] == doctest::Approx(1.5));
        // strike 90: put ask 2 -> call ask min(12, 12)
        CHECK(calls.ask[1] == doctest::Approx(12.0));
        CHECK(calls.bid[1] == doctest::Approx(11.0));
    }
    SUBCASE("zero spreads are unchanged") {
        std::mt19937_64 rng(3);
        const Marginal m = gen::mixture(rng, 2, 100.0);
        QuoteChain c;
        c.forward = 100.0;
        for (double k : {80.0, 100.0, 120.0}) {
            c.strikes.push_back(k);
            const double call = m.call_price(k);
            c.call_bid.push_back(call);
            c.call_ask.push_back(call);
            c.put_bid.push_back(call - 100.0 + k);
            c.put_ask.push_back(call - 100.0 + k);
        }
        c.add_zero_strike();
        const auto calls = combine_put_call(impute(c));
        for (std::size_t i = 1; i < 4; ++i) {
            CHECK(calls.bid[i] == doctest::Approx(m.call_price(calls.strikes[i])).epsilon(1e-12));
            CHECK(calls.ask[i] == doctest::Approx(m.call_price(calls.strikes[i])).epsilon(1e-12));
        }
    }
    SUBCASE("synthetic chains still bracket the generating prices") {
        std::mt19937_64 rng(4);
        for (int t = 0; t < 20; ++t) {
            const auto calls = gen::calls(rng);
            CHECK(calls.bid.front() == 100.0);
            for (std::size_t m = 0; m < calls.strikes.size(); ++m) CHECK(calls.bid[m] <= calls.ask[m]);
        }
    }
    SUBCASE("crossing after tightening is arbitrage") {
        auto c = full_chain();
        c.put_bid[2] = 6.5;  // call bid becomes 6.5 > call ask 5
        c.put_ask[2] = 7.0;
        CHECK_THROWS_AS(combine_put_call(impute(c)), ArbitrageError);
    }
}

TEST_CASE("enhancement of a zero-spread chain is the identity") {
    const Marginal m(DiscreteMeasure({60.0, 95.0, 130.0}, {0.2, 0.5, 0.3}));
    const auto c = zero_spread(m, {0.0, 60.0, 80.0, 95.0, 110.0, 130.0, 140.0});
    const auto e = enhance(c);
    for (std::size_t i = 0; i < c.strikes.size(); ++i) {
        CHECK(e.enhanced_ask[i] == doctest::Approx(c.ask[i]).epsilon(1e-9));
        CHECK(e.enhanced_bid[i] == doctest::Approx(c.bid[i]).epsilon(1e-9));
    }
    SUBCASE("and the ask marginal recovers the measure") {
        const auto mu = ask_marginal(e);
        REQUIRE(mu.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(mu.atoms()[i] == doctest::Approx(m.atoms()[i]).epsilon(1e-12));
            CHECK(mu.weights()[i] == doctest::Approx(m.atom_weights()[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("an overpriced ask drops to the butterfly bound") {
    CallChain c;
    c.forward = 100.0;
    c.strikes = {0.0, 90.0, 100.0, 110.0};
    c.bid = {100.0, 0.0, 0.0, 0.0};
    c.ask = {100.0, 12.0, 9.0, 4.0};
    const auto e = enhance(c);
    CHECK(e.enhanced_ask[2] == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(e.enhanced_ask[1] == doctest::Approx(12.0).epsilon(1e-10));
    CHECK(e.enhanced_ask[3] == doctest::Approx(4.0).epsilon(1e-10));
    // without cash the forward alone cannot subhedge a call, so zero bids stay
    CHECK(e.enhanced_bid[1] == 0.0);
    CHECK(validate_enhanced(e).ok());
}

TEST_CASE("enhancement properties on random chains") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        const auto c = gen::calls(rng);
        const auto e = enhance(c);
        const auto rep = validate_enhanced(e);
        CHECK(rep.ok());
        for (std::size_t m = 0; m < c.strikes.size(); ++m) {
            CHECK(c.bid[m] <= e.enhanced_bid[m]);
            CHECK(e.enhanced_bid[m] <= e.enhanced_ask[m] + 1e-8);
            CHECK(e.enhanced_ask[m] <= c.ask[m]);
        }
        const auto again = enhance(e.as_calls());
        for (std::size_t m = 0; m < c.strikes.size(); ++m) {
            CHECK(std::abs(again.enhanced_ask[m] - e.enhanced_ask[m]) <= 1e-9);
            CHECK(std::abs(again.enhanced_bid[m] - e.enhanced_bid[m]) <= 1e-9);
        }
        const auto mu = ask_marginal(e);
        double mass = 0.0;
        for (double w : mu.weights()) mass += w;
        CHECK(std::abs(mass - 1.0) <= 1e-12);
        CHECK(std::abs(mu.barycenter() - c.forward) <= 1e-10 * c.forward);
        for (int m = 0; m <= e.truncation; ++m) {
            CHECK(std::abs(mu.call_price(e.strikes[m]) - e.enhanced_ask[m]) <= 1e-10 * c.forward);
            CHECK(mu.call_price(e.strikes[m]) >= e.enhanced_bid[m] - 1e-10);
        }
    }
}

TEST_CASE("ask marginal of a two-strike chain") {
    EnhancedChain e;
    e.forward = 100.0;
    e.strikes = {0.0, 100.0};
    e.bid = e.enhanced_bid = {100.0, 5.0};
    e.ask = e.enhanced_ask = {100.0, 8.0};
    e.truncation = 1;
    const auto mu = ask_marginal(e);
    // slope -0.92 on [0, 100] continues to zero at 100 + 8 / 0.92
    REQUIRE(mu.size() == 2);
    CHECK(mu.atoms()[0] == 0.0);
    CHECK(mu.weights()[0] == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(mu.atoms()[1] == doctest::Approx(100.0 + 8.0 / 0.92).epsilon(1e-12));
    CHECK(mu.call_price(100.0) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(mu.weights()[0] < 1.0);

    e.enhanced_ask = {100.0, 100.0};
    e.truncation = -1;
    CHECK_THROWS_AS(ask_marginal(e), InputError);
}

TEST_CASE("validation flags a non-convex ask") {
    EnhancedChain e;
    e.forward = 100.0;
    e.strikes = {0.0, 90.0, 100.0, 110.0};
    e.bid = e.enhanced_bid = {100.0, 10.0, 3.0, 0.0};
    e.ask = e.enhanced_ask = {100.0, 12.0, 9.0, 4.0};
    const auto rep = validate_enhanced(e);
    CHECK(rep.consistent);
    CHECK(rep.monotone);
    CHECK_FALSE(rep.ask_convex);
    REQUIRE(rep.violating_triple);
    CHECK((*rep.violating_triple)[1] == 2);
    CHECK(rep.convexity_violation == doctest::Approx(1.0));
}

TEST_CASE("arbitrage in the call chain is caught by the pre-check") {
    CallChain c;
    c.forward = 100.0;
    c.strikes = {0.0, 90.0, 100.0, 110.0};
    c.bid = {100.0, 11.0, 8.0, 9.0};  // the 110 call bids above the 100 call ask
    c.ask = {100.0, 11.5, 8.5, 9.5};
    try {
        enhance(c);
        FAIL("expected ArbitrageError");
    } catch (const ArbitrageError& e) {
        CHECK(e.witness_strike() > 0.0);
    }
}

TEST_CASE("chain CSV round trip") {
    auto c = full_chain();
    c.put_ask[2].reset();
    std::stringstream ss;
    write_chain_csv(c, ss);
    const auto back = read_chain_csv(ss);
    CHECK(back.forward == 100.0);
    CHECK(back.strikes == c.strikes);
    CHECK(!back.put_ask[2]);
    CHECK(*back.call_bid[1] == 11.0);

    std::stringstream no_zero("# forward: 50\nstrike,put_bid,put_ask,call_bid,call_ask\n40,,1,10,11\n");
    const auto z = read_chain_csv(no_zero);
    CHECK(z.strikes.size() == 2);
    CHECK(*z.call_ask[0] == 50.0);

    std::stringstream bad("strike,put_bid\n1,2\n");
    CHECK_THROWS_AS(read_chain_csv(bad, 10.0), InputError);
    std::stringstream nofwd("strike,put_bid,put_ask,call_bid,call_ask\n40,,1,10,11\n");
    CHECK_THROWS_AS(read_chain_csv(nofwd), InputError);
}
