#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bamot/hedging.hpp"
#include "bamot/measures.hpp"
#include "bamot/payoff.hpp"

namespace bamot {

/// E_m[h] for a single-maturity payoff, in closed form from call prices.
double expectation(const Payoff& h, const Marginal& m);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
};

/// Least squares of log(y) on log(x) over the `count` smallest x, skipping
/// pairs with x < 1e-12 or y <= 0.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, std::size_t count = 10);

struct ConvergencePoint {
    double gamma = 0.0;
    double distance = 0.0;
    double superhedge = 0.0;
    double mid_price = 0.0;
    /// superhedge - mid_price
    double premium = 0.0;
};

struct ConvergenceConfig {
    std::vector<double> gammas;
    HedgeConfig hedge;
    std::size_t fit_points = 10;
};

/// Gammas 0, 0.3, 0.5, ... with 1 - gamma falling geometrically to 0.02.
std::vector<double> default_gammas();

/// Constraint grid refinement for the sweeps: 400 quantile points of the ask
/// plus a uniform step of 0.002 * x0 on [0.75 x0, 1.25 x0], dense strikes.
HedgeConfig convergence_hedge_config(double x0);

struct ConvergenceSweep {
    std::vector<ConvergencePoint> points;
    LogLogFit fit;
};

/// Deforms bid and ask toward the mid (bid + ask) / 2 and records the
/// bid-ask distance and the superhedging premium over the mid price.
ConvergenceSweep convergence_sweep(const Payoff& h, const Marginal& bid, const Marginal& ask,
                                   const ConvergenceConfig& config);

/// sup of the mid-marginal density, scanned on a fine quantile grid.
double max_density(const Marginal& m);

struct ForwardStartRow {
    double k = 0.0;
    double bamot_super = 0.0;
    double bamot_sub = 0.0;
    double mot_super = 0.0;
    double mot_sub = 0.0;
};

struct ForwardStartConfig {
    std::vector<double> ks;       // default 0.8, 0.85, ..., 1.2
    std::vector<double> strikes;  // default 60, 65, ..., 140, both maturities
    HedgeConfig hedge;
};

ForwardStartConfig default_forward_start_config();

/// Super/subhedges of (x2 - k x1)^+ under the bid/ask marginals and under the
/// mid marginals with zero spreads.
std::vector<ForwardStartRow> forward_start_sweep(std::span<const MaturityMarginals> marginals,
                                                 const ForwardStartConfig& config);

/// Lower and upper strikes of a two-leg call spread: the legs with the two
/// largest absolute weights, in increasing strike order.
std::pair<double, double> call_spread_strikes(const HedgePortfolio& p);

}  // namespace bamot
