#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "bamot/lp.hpp"
#include "bamot/measures.hpp"
#include "bamot/payoff.hpp"

namespace bamot {

/// Call bid/ask prices at a set of strikes for one maturity.
struct CallQuotes {
    std::vector<double> strikes;
    std::vector<double> bid;
    std::vector<double> ask;

    /// Prices taken from a bid and an ask marginal.
    static CallQuotes from_marginals(const Marginal& bid, const Marginal& ask, std::vector<double> strikes);
    /// Checks lengths, bid <= ask and (x0 - K)^+ <= c <= x0 up to `tol`.
    void validate(double x0, double tol) const;
};

/// Discretised single-maturity problem, shared by the dual and primal LPs.
///
/// Dual variables, in order: a (cash), b (forward), c^a_m (m < M), c^b_m.
/// Primal variables: p_i on the grid, then (with a tail slope) the mass that
/// escapes to infinity, measured by its first moment.
struct SingleMaturitySpec {
    CallQuotes quotes;
    double x0 = 0.0;
    std::vector<double> grid;
    std::vector<double> payoff;  // h(grid[i])
    /// Slope of h at infinity; adds the asymptotic row b + sum(c^a - c^b) >= slope.
    std::optional<double> tail_slope;
};
using DualSpecSingle = SingleMaturitySpec;
using PrimalSpecSingle = SingleMaturitySpec;

/// Two maturities on a product grid.
///
/// Dual variables: a, b_1, b_2, c^a_{1,m}, c^b_{1,m}, c^a_{2,m}, c^b_{2,m},
/// then Delta(y_i) for each first-maturity grid point.
/// Primal variables: p_ij in row-major order (i over grid1).
struct TwoMaturitySpec {
    std::array<CallQuotes, 2> quotes;
    double x0 = 0.0;
    std::vector<double> grid1;
    std::vector<double> grid2;
    std::vector<double> payoff;  // h(grid1[i], grid2[j]) at i * grid2.size() + j
};
using DualSpecTwo = TwoMaturitySpec;
using PrimalSpecTwo = TwoMaturitySpec;

lp::LinearProgram build_dual_single(const DualSpecSingle& spec);
/// Maximisation of sum p_i h(y_i), emitted as minimisation of the negation.
lp::LinearProgram build_primal_single(const PrimalSpecSingle& spec);
lp::LinearProgram build_dual_two(const DualSpecTwo& spec);
lp::LinearProgram build_primal_two(const PrimalSpecTwo& spec);

enum class PriceSide { ask, bid };

struct OptionLeg {
    int maturity = 0;
    double strike = 0.0;
    /// Signed number of calls held.
    double weight = 0.0;
    /// Quote the leg is paid or valued at.
    PriceSide priced_at = PriceSide::ask;
};

/// Cash + forward positions + calls (+ a first-maturity delta for N = 2).
struct HedgePortfolio {
    double cash = 0.0;
    /// Forward positions per maturity, each paying forward[i] * (X_i - spot).
    std::vector<double> forward;
    double spot = 0.0;
    std::vector<OptionLeg> legs;
    std::vector<double> delta_grid;
    std::vector<double> delta;
    double cost = 0.0;

    /// Terminal value for a single maturity.
    double value(double x) const;
    /// Terminal value for two maturities; the delta is read at the nearest
    /// first-maturity grid point at or below x1.
    double value(double x1, double x2) const;
};

enum class BoundSide { super, sub };

struct Coupling {
    std::vector<double> grid1;
    std::vector<double> grid2;
    std::vector<double> mass;  // row-major
};

struct PriceBound {
    BoundSide side = BoundSide::super;
    /// The bound itself: the dual (hedging) value.
    double value = 0.0;
    double dual_value = 0.0;
    std::optional<double> primal_value;
    /// dual - primal for superhedges, primal - dual for subhedges.
    std::optional<double> gap;
    HedgePortfolio portfolio;
    std::optional<DiscreteMeasure> measure;  // N = 1
    std::optional<Coupling> coupling;        // N = 2
    /// Mass escaping to infinity in the N = 1 primal, as a first moment.
    double escaping_moment = 0.0;

    // audits
    /// min over a 10x finer grid of (portfolio - h) for super, (h - portfolio) for sub.
    double hedge_min_pnl = 0.0;
    bool hedge_audit_ok = true;
    /// Largest violation of the call-price bands by the primal optimiser.
    double primal_band_violation = 0.0;
    /// Largest |E[X2 - X1 | X1 = y_i]| * p_i of the coupling.
    double martingale_residual = 0.0;
    long iterations = 0;
};

enum class StrikeMode { quoted, dense };

struct HedgeConfig {
    GridSpec grid{};
    /// Quantile points per axis of the product grid (N = 2).
    std::size_t product_points = 150;
    StrikeMode strike_mode = StrikeMode::quoted;
    /// Quoted strikes per maturity (quoted mode).
    std::vector<std::vector<double>> strikes;
    /// Additional constraint-grid points, first maturity for N = 2.
    std::vector<double> extra_points;
    bool with_primal = true;
    lp::SimplexOptions lp{};
};

struct MaturityMarginals {
    Marginal bid;
    Marginal ask;
};

/// Cheapest superhedge of `h` given one or two maturities of bid/ask
/// marginals. Checks the bid/ask convex order first and throws
/// ArbitrageError with a witness on violation.
PriceBound superhedge(const Payoff& h, std::span<const MaturityMarginals> marginals, const HedgeConfig& config);
/// -superhedge(-h), with the portfolio negated.
PriceBound subhedge(const Payoff& h, std::span<const MaturityMarginals> marginals, const HedgeConfig& config);

/// Constraint grid for a single maturity: quantile grid of the ask marginal
/// merged with 0, the payoff kinks, the strikes and `extra`.
Grid hedging_grid(const Marginal& ask, const GridSpec& spec, const Payoff& h, std::span<const double> strikes,
                  std::span<const double> extra);

}  // namespace bamot
