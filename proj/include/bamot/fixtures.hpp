#pragma once

#include "bamot/measures.hpp"

// Reference market data used by the examples, the CLI defaults and the tests.
namespace bamot::fixtures {

/// S&P 500 log-normal mixture parameters (one maturity, forward ~5861).
/// The published weights are rounded and are renormalised to sum to one.
MixtureMarginal spx_ask();
MixtureMarginal spx_bid();
/// Componentwise average of the bid and ask mixtures.
Marginal spx_mid();
inline constexpr double spx_digital_strike = 6154.05;

/// Two-maturity Black-Scholes market of the forward-start example: spot 100,
/// bid/ask vols 0.19/0.20 at T = 0.5 and 0.17/0.18 at T = 1.
struct BsBidAsk {
    double bid_vol;
    double ask_vol;
    double maturity;
};
inline constexpr double forward_start_spot = 100.0;
inline constexpr BsBidAsk forward_start_market[2] = {{0.19, 0.20, 0.5}, {0.17, 0.18, 1.0}};

/// Black-Scholes marginal at maturity `t` (zero rates).
inline MixtureMarginal bs(double spot, double vol, double t) {
    return MixtureMarginal::black_scholes(spot, vol, t);
}

}  // namespace bamot::fixtures
