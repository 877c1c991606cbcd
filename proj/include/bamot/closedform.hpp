#pragma once

#include "bamot/measures.hpp"

namespace bamot {

/// Closed-form superhedge of the digital 1{x >= K} when only the ask side
/// of the market is informative (bid = Dirac at the forward).
struct OneSidedDigitalResult {
    double strike = 0.0;            // K
    double critical_strike = 0.0;   // L*
    /// Price per unit notional: 1 - F^a(L*) = c^a(L*) / (K - L*).
    double price = 0.0;
    /// Digital priced under the ask marginal itself, 1 - F^a(K), for comparison.
    double ask_price = 0.0;
    /// Hedge profile (x - L*)^+ / (K - L*).
    double lower_strike = 0.0;
    double upper_strike = 0.0;
    double slope = 0.0;
    /// Ask restricted to [0, L*], locally concentrated, plus an atom at K.
    DiscreteMeasure optimal_measure = DiscreteMeasure::dirac(0.0);
};

struct IvTouchReport {
    bool call_matches = false;
    double call_residual = 0.0;  // |c*(L*) - c^a(L*)|
    bool gap_empty = false;
    double gap_mass = 0.0;       // mass of the optimal measure on (L*, K)
};

/// Root of c(L) - (K - L)(1 - F(L)) on [0, K] by bisection to 1e-12 K.
/// Requires an atomless ask with barycenter x0 < K; throws InputError when the
/// ask is supported in [0, K] or the root coincides with K.
double critical_strike(const Marginal& ask, double strike, double x0);

/// `cells` is the number of equal-probability concentration cells on [0, L*].
OneSidedDigitalResult one_sided_digital(const Marginal& ask, double strike, double x0, std::size_t cells = 256);

/// The optimal measure reprices the ask call at L* and puts no mass on (L*, K).
IvTouchReport primal_dual_iv_touch(const OneSidedDigitalResult& result, const Marginal& ask);

}  // namespace bamot
