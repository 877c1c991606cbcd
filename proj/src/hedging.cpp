#include "bamot/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bamot/error.hpp"

namespace bamot {

using lp::inf;
using lp::Relation;

namespace {

constexpr double jump_width = 1e-6;

double pos(double x) { return x > 0.0 ? x : 0.0; }

void require_increasing(const std::vector<double>& g, const char* what) {
    if (g.size() < 3) throw InputError(std::string(what) + ": need at least 3 grid points");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(g[i]) || g[i] < 0.0) throw InputError(std::string(what) + ": grid points must be >= 0");
        if (i > 0 && !(g[i] > g[i - 1])) throw InputError(std::string(what) + ": grid must be strictly increasing");
    }
}

void check_quotes(const CallQuotes& q, double x0) {
    q.validate(x0, 1e-9 * std::max(1.0, x0));
}

}  // namespace

// ---------------------------------------------------------------- quotes

CallQuotes CallQuotes::from_marginals(const Marginal& bid, const Marginal& ask, std::vector<double> strikes) {
    CallQuotes q;
    for (double k : strikes) {
        q.bid.push_back(bid.call_price(k));
        q.ask.push_back(ask.call_price(k));
    }
    q.strikes = std::move(strikes);
    return q;
}

void CallQuotes::validate(double x0, double tol) const {
    if (bid.size() != strikes.size() || ask.size() != strikes.size())
        throw InputError("call quotes: strikes, bids and asks differ in length");
    for (std::size_t m = 0; m < strikes.size(); ++m) {
        const double k = strikes[m];
        if (!std::isfinite(k) || k < 0.0) throw InputError("call quotes: strikes must be >= 0");
        if (m > 0 && !(k > strikes[m - 1])) throw InputError("call quotes: strikes must be increasing");
        if (bid[m] > ask[m] + tol)
            throw ArbitrageError("call quotes: bid above ask at strike " + std::to_string(k), k);
        if (ask[m] < pos(x0 - k) - tol || bid[m] > x0 + tol)
            throw ArbitrageError("call quotes: price outside [(x0 - K)^+, x0] at strike " + std::to_string(k), k);
    }
}

// ---------------------------------------------------------------- builders

lp::LinearProgram build_dual_single(const DualSpecSingle& s) {
    require_increasing(s.grid, "dual LP");
    if (s.payoff.size() != s.grid.size()) throw InputError("dual LP: payoff and grid differ in length");
    check_quotes(s.quotes, s.x0);
    const auto& k = s.quotes.strikes;
    if (s.tail_slope && !k.empty() && k.back() > s.grid.back())
        throw InputError("dual LP: strikes must lie inside the constraint grid");
    const std::size_t nm = k.size();

    lp::LinearProgram prog;
    const int a = prog.add_variable(1.0, -inf, inf, "a");
    const int b = prog.add_variable(s.x0, -inf, inf, "b");
    std::vector<int> ca(nm), cb(nm);
    for (std::size_t m = 0; m < nm; ++m) ca[m] = prog.add_variable(s.quotes.ask[m], 0.0, inf);
    for (std::size_t m = 0; m < nm; ++m) cb[m] = prog.add_variable(-s.quotes.bid[m], 0.0, inf);

    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        const double y = s.grid[i];
        if (!std::isfinite(s.payoff[i])) throw InputError("dual LP: payoff not finite on the grid");
        std::vector<std::pair<int, double>> row{{a, 1.0}, {b, y}};
        for (std::size_t m = 0; m < nm; ++m) {
            const double c = pos(y - k[m]);
            if (c == 0.0) continue;
            row.emplace_back(ca[m], c);
            row.emplace_back(cb[m], -c);
        }
        prog.add_row(std::move(row), Relation::ge, s.payoff[i]);
    }
    if (s.tail_slope) {
        std::vector<std::pair<int, double>> row{{b, 1.0}};
        for (std::size_t m = 0; m < nm; ++m) {
            row.emplace_back(ca[m], 1.0);
            row.emplace_back(cb[m], -1.0);
        }
        prog.add_row(std::move(row), Relation::ge, *s.tail_slope, "tail");
    }
    return prog;
}

lp::LinearProgram build_primal_single(const PrimalSpecSingle& s) {
    require_increasing(s.grid, "primal LP");
    if (s.payoff.size() != s.grid.size()) throw InputError("primal LP: payoff and grid differ in length");
    check_quotes(s.quotes, s.x0);
    const auto& k = s.quotes.strikes;
    const std::size_t n = s.grid.size();

    lp::LinearProgram prog;
    for (std::size_t i = 0; i < n; ++i) prog.add_variable(-s.payoff[i], 0.0, inf);
    int q = -1;
    if (s.tail_slope) q = prog.add_variable(-*s.tail_slope, 0.0, inf, "tail");

    std::vector<std::pair<int, double>> mass, mean;
    for (std::size_t i = 0; i < n; ++i) {
        mass.emplace_back(static_cast<int>(i), 1.0);
        if (s.grid[i] != 0.0) mean.emplace_back(static_cast<int>(i), s.grid[i]);
    }
    if (q >= 0) mean.emplace_back(q, 1.0);
    prog.add_row(std::move(mass), Relation::eq, 1.0, "mass");
    prog.add_row(std::move(mean), Relation::eq, s.x0, "mean");
    for (std::size_t m = 0; m < k.size(); ++m) {
        std::vector<std::pair<int, double>> row;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = pos(s.grid[i] - k[m]);
            if (c != 0.0) row.emplace_back(static_cast<int>(i), c);
        }
        if (q >= 0) row.emplace_back(q, 1.0);
        prog.add_row(row, Relation::le, s.quotes.ask[m]);
        prog.add_row(std::move(row), Relation::ge, s.quotes.bid[m]);
    }
    return prog;
}

namespace {

void check_two(const TwoMaturitySpec& s, const char* what) {
    require_increasing(s.grid1, what);
    require_increasing(s.grid2, what);
    if (s.payoff.size() != s.grid1.size() * s.grid2.size())
        throw InputError(std::string(what) + ": payoff size does not match the product grid");
    for (const auto& q : s.quotes) check_quotes(q, s.x0);
}

}  // namespace

lp::LinearProgram build_dual_two(const DualSpecTwo& s) {
    check_two(s, "two-maturity dual LP");
    const std::size_t n1 = s.grid1.size();
    const std::size_t n2 = s.grid2.size();

    lp::LinearProgram prog;
    const int a = prog.add_variable(1.0, -inf, inf, "a");
    const int b1 = prog.add_variable(s.x0, -inf, inf, "b1");
    const int b2 = prog.add_variable(s.x0, -inf, inf, "b2");
    std::array<std::vector<int>, 2> ca, cb;
    for (int t = 0; t < 2; ++t) {
        const auto& q = s.quotes[t];
        for (std::size_t m = 0; m < q.strikes.size(); ++m) ca[t].push_back(prog.add_variable(q.ask[m], 0.0, inf));
        for (std::size_t m = 0; m < q.strikes.size(); ++m) cb[t].push_back(prog.add_variable(-q.bid[m], 0.0, inf));
    }
    std::vector<int> delta(n1);
    for (std::size_t i = 0; i < n1; ++i) delta[i] = prog.add_variable(0.0, -inf, inf);

    prog.rows.reserve(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
        const double y = s.grid1[i];
        std::vector<std::pair<int, double>> base{{a, 1.0}, {b1, y}};
        for (std::size_t m = 0; m < ca[0].size(); ++m) {
            const double c = pos(y - s.quotes[0].strikes[m]);
            if (c == 0.0) continue;
            base.emplace_back(ca[0][m], c);
            base.emplace_back(cb[0][m], -c);
        }
        for (std::size_t j = 0; j < n2; ++j) {
            const double z = s.grid2[j];
            auto row = base;
            row.emplace_back(b2, z);
            for (std::size_t m = 0; m < ca[1].size(); ++m) {
                const double c = pos(z - s.quotes[1].strikes[m]);
                if (c == 0.0) continue;
                row.emplace_back(ca[1][m], c);
                row.emplace_back(cb[1][m], -c);
            }
            row.emplace_back(delta[i], z - y);
            const double h = s.payoff[i * n2 + j];
            if (!std::isfinite(h)) throw InputError("two-maturity dual LP: payoff not finite on the grid");
            prog.add_row(std::move(row), Relation::ge, h);
        }
    }
    return prog;
}

lp::LinearProgram build_primal_two(const PrimalSpecTwo& s) {
    check_two(s, "two-maturity primal LP");
    const std::size_t n1 = s.grid1.size();
    const std::size_t n2 = s.grid2.size();

    lp::LinearProgram prog;
    for (std::size_t idx = 0; idx < n1 * n2; ++idx) prog.add_variable(-s.payoff[idx], 0.0, inf);
    const auto var = [n2](std::size_t i, std::size_t j) { return static_cast<int>(i * n2 + j); };

    std::vector<std::pair<int, double>> mass, mean1, mean2;
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            mass.emplace_back(var(i, j), 1.0);
            if (s.grid1[i] != 0.0) mean1.emplace_back(var(i, j), s.grid1[i]);
            if (s.grid2[j] != 0.0) mean2.emplace_back(var(i, j), s.grid2[j]);
        }
    prog.add_row(std::move(mass), Relation::eq, 1.0, "mass");
    prog.add_row(std::move(mean1), Relation::eq, s.x0, "mean1");
    prog.add_row(std::move(mean2), Relation::eq, s.x0, "mean2");

    for (int t = 0; t < 2; ++t) {
        const auto& q = s.quotes[t];
        for (std::size_t m = 0; m < q.strikes.size(); ++m) {
            std::vector<std::pair<int, double>> row;
            for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j) {
                    const double x = t == 0 ? s.grid1[i] : s.grid2[j];
                    const double c = pos(x - q.strikes[m]);
                    if (c != 0.0) row.emplace_back(var(i, j), c);
                }
            prog.add_row(row, Relation::le, q.ask[m]);
            prog.add_row(std::move(row), Relation::ge, q.bid[m]);
        }
    }
    for (std::size_t i = 0; i < n1; ++i) {
        std::vector<std::pair<int, double>> row;
        for (std::size_t j = 0; j < n2; ++j) {
            const double d = s.grid2[j] - s.grid1[i];
            if (d != 0.0) row.emplace_back(var(i, j), d);
        }
        prog.add_row(std::move(row), Relation::eq, 0.0, "martingale");
    }
    return prog;
}

// ---------------------------------------------------------------- portfolio

double HedgePortfolio::value(double x) const {
    double v = cash;
    if (!forward.empty()) v += forward[0] * (x - spot);
    for (const auto& l : legs) v += l.weight * pos(x - l.strike);
    return v;
}

double HedgePortfolio::value(double x1, double x2) const {
    double v = cash;
    if (forward.size() > 0) v += forward[0] * (x1 - spot);
    if (forward.size() > 1) v += forward[1] * (x2 - spot);
    for (const auto& l : legs) v += l.weight * pos((l.maturity == 0 ? x1 : x2) - l.strike);
    if (!delta_grid.empty()) {
        auto it = std::upper_bound(delta_grid.begin(), delta_grid.end(), x1);
        const std::size_t i = it == delta_grid.begin() ? 0 : static_cast<std::size_t>(it - delta_grid.begin()) - 1;
        v += delta[i] * (x2 - x1);
    }
    return v;
}

// ---------------------------------------------------------------- drivers

Grid hedging_grid(const Marginal& ask, const GridSpec& spec, const Payoff& h, std::span<const double> strikes,
                  std::span<const double> extra) {
    std::vector<double> pts(strikes.begin(), strikes.end());
    pts.insert(pts.end(), extra.begin(), extra.end());
    if (h.maturities() == 1) {
        const auto k = h.kinks();
        pts.insert(pts.end(), k.begin(), k.end());
        // a left neighbour confines the ramp across a jump
        for (double j : h.jumps()) pts.push_back(j * (1.0 - jump_width));
    }
    Grid g = Grid::quantile(ask, spec, pts);
    // keep strikes strictly inside so the tail row sees linear payoffs beyond
    const double top = g.points.back();
    double need = top;
    for (double p : pts) need = std::max(need, p);
    if (need >= top) {
        const double ext = need * (1.0 + spec.upper_extension);
        g = g.merged(std::span<const double>(&ext, 1));
    }
    return g;
}

namespace {

/// True inside the ramp a piecewise-linear hedge needs across a jump.
bool in_ramp(const Payoff& h, double x) {
    for (double j : h.jumps())
        if (x > j * (1.0 - jump_width) && x < j) return true;
    return false;
}

std::vector<double> finer(const std::vector<double>& g, int factor, double beyond) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        for (int k = 0; k < factor; ++k) out.push_back(g[i] + (g[i + 1] - g[i]) * k / factor);
    out.push_back(g.back());
    for (int k = 1; k <= factor; ++k) out.push_back(g.back() + beyond * k / factor);
    return out;
}

void check_solution(const lp::Solution& s, const char* what) {
    switch (s.status) {
        case lp::Status::optimal: return;
        case lp::Status::infeasible:
            throw InfeasibleError(std::string(what) + ": LP infeasible (grid too coarse or quotes admit arbitrage)",
                                  s.infeasible_row);
        case lp::Status::unbounded:
            throw InfeasibleError(std::string(what) + ": LP unbounded; the transposed problem has no feasible point",
                                  -1);
        case lp::Status::audit_failure:
            throw NumericalError(std::string(what) + ": solution failed the post-solve audit (residual " +
                                 std::to_string(s.max_violation) + ")");
    }
}

double common_forward(std::span<const MaturityMarginals> ms) {
    const double x0 = ms[0].ask.barycenter();
    for (const auto& m : ms)
        for (const Marginal* p : {&m.bid, &m.ask})
            if (std::abs(p->barycenter() - x0) > 1e-9 * std::max(1.0, x0))
                throw InputError("marginals have different barycenters");
    return x0;
}

std::vector<double> strikes_for(const HedgeConfig& cfg, std::size_t t) {
    if (cfg.strike_mode == StrikeMode::dense) return {};
    if (cfg.strikes.size() <= t || cfg.strikes[t].empty())
        throw InputError("quoted strike mode needs a strike list for maturity " + std::to_string(t + 1));
    auto k = cfg.strikes[t];
    std::sort(k.begin(), k.end());
    return sorted_unique(std::move(k), 0.0);
}

std::vector<double> dense_strikes(const std::vector<double>& grid) {
    return std::vector<double>(grid.begin() + 1, grid.end() - 1);
}

void add_legs(HedgePortfolio& pf, int maturity, const CallQuotes& q, const std::vector<double>& x, int ca0,
              int cb0) {
    for (std::size_t m = 0; m < q.strikes.size(); ++m) {
        const double wa = x[ca0 + m];
        const double wb = x[cb0 + m];
        if (wa > 1e-12) pf.legs.push_back({maturity, q.strikes[m], wa, PriceSide::ask});
        if (wb > 1e-12) pf.legs.push_back({maturity, q.strikes[m], -wb, PriceSide::bid});
    }
}

PriceBound super_single(const Payoff& h, const MaturityMarginals& mm, const HedgeConfig& cfg) {
    const double x0 = mm.ask.barycenter();
    auto strikes = strikes_for(cfg, 0);
    const Grid grid = hedging_grid(mm.ask, cfg.grid, h, strikes, cfg.extra_points);
    if (cfg.strike_mode == StrikeMode::dense) strikes = dense_strikes(grid.points);

    SingleMaturitySpec spec;
    spec.quotes = CallQuotes::from_marginals(mm.bid, mm.ask, strikes);
    spec.x0 = x0;
    spec.grid = grid.points;
    for (double y : grid.points) spec.payoff.push_back(h(y));
    spec.tail_slope = h.slope_at_infinity();

    PriceBound out;
    const auto dual = lp::solve(build_dual_single(spec), cfg.lp);
    check_solution(dual, "superhedge dual");
    out.dual_value = out.value = dual.value;
    out.iterations = dual.iterations;

    const std::size_t nm = strikes.size();
    HedgePortfolio& pf = out.portfolio;
    pf.spot = x0;
    pf.cash = dual.primal[0] + dual.primal[1] * x0;
    pf.forward = {dual.primal[1]};
    add_legs(pf, 0, spec.quotes, dual.primal, 2, 2 + static_cast<int>(nm));
    pf.cost = dual.value;

    // P&L audit on a 10x finer grid reaching beyond the last grid point
    const auto fine = finer(grid.points, 10, grid.points.back());
    out.hedge_min_pnl = inf;
    for (double x : fine)
        if (!in_ramp(h, x)) out.hedge_min_pnl = std::min(out.hedge_min_pnl, pf.value(x) - h(x));
    out.hedge_audit_ok = out.hedge_min_pnl >= -1e-6 * x0;

    if (cfg.with_primal) {
        const auto primal = lp::solve(build_primal_single(spec), cfg.lp);
        check_solution(primal, "superhedge primal");
        out.primal_value = -primal.value;
        out.gap = out.dual_value - *out.primal_value;
        out.iterations += primal.iterations;
        const std::size_t n = grid.points.size();
        std::vector<double> w(primal.primal.begin(), primal.primal.begin() + static_cast<long>(n));
        out.escaping_moment = primal.primal[n];
        out.measure = DiscreteMeasure::canonical(grid.points, w);
        for (std::size_t m = 0; m < nm; ++m) {
            double c = out.escaping_moment;
            for (std::size_t i = 0; i < n; ++i) c += w[i] * pos(grid.points[i] - strikes[m]);
            out.primal_band_violation =
                std::max({out.primal_band_violation, c - spec.quotes.ask[m], spec.quotes.bid[m] - c});
        }
    }
    return out;
}

PriceBound super_two(const Payoff& h, std::span<const MaturityMarginals> mm, const HedgeConfig& cfg) {
    const double x0 = mm[0].ask.barycenter();
    GridSpec gs = cfg.grid;
    gs.points = cfg.product_points;
    std::array<std::vector<double>, 2> strikes{strikes_for(cfg, 0), strikes_for(cfg, 1)};
    const Payoff none;
    const Grid g1 = hedging_grid(mm[0].ask, gs, none, strikes[0], cfg.extra_points);
    // second-maturity kinks, including those of the forward-start terms on each row
    std::vector<double> kinks2 = h.kinks();
    for (double j : h.jumps()) kinks2.push_back(j * (1.0 - jump_width));
    for (double k : h.forward_start_strikes())
        for (double y : g1.points)
            if (k * y > 0.0) kinks2.push_back(k * y);
    const Grid g2 = hedging_grid(mm[1].ask, gs, none, strikes[1], kinks2);
    if (cfg.strike_mode == StrikeMode::dense) {
        strikes[0] = dense_strikes(g1.points);
        strikes[1] = dense_strikes(g2.points);
    }

    TwoMaturitySpec spec;
    spec.x0 = x0;
    spec.grid1 = g1.points;
    spec.grid2 = g2.points;
    for (int t = 0; t < 2; ++t) spec.quotes[t] = CallQuotes::from_marginals(mm[t].bid, mm[t].ask, strikes[t]);
    const std::size_t n1 = spec.grid1.size();
    const std::size_t n2 = spec.grid2.size();
    spec.payoff.resize(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) spec.payoff[i * n2 + j] = h(spec.grid1[i], spec.grid2[j]);

    PriceBound out;
    const auto dual = lp::solve(build_dual_two(spec), cfg.lp);
    check_solution(dual, "two-maturity superhedge dual");
    out.dual_value = out.value = dual.value;
    out.iterations = dual.iterations;

    const auto& x = dual.primal;
    HedgePortfolio& pf = out.portfolio;
    pf.spot = x0;
    pf.cash = x[0] + (x[1] + x[2]) * x0;
    pf.forward = {x[1], x[2]};
    int at = 3;
    for (int t = 0; t < 2; ++t) {
        const int nm = static_cast<int>(strikes[t].size());
        add_legs(pf, t, spec.quotes[t], x, at, at + nm);
        at += 2 * nm;
    }
    pf.delta_grid = spec.grid1;
    pf.delta.assign(x.begin() + at, x.begin() + at + static_cast<long>(n1));
    pf.cost = dual.value;

    // the delta is only defined on the first-maturity grid; refine in x2
    const auto fine2 = finer(spec.grid2, 10, 0.0);
    out.hedge_min_pnl = inf;
    for (double y : spec.grid1)
        for (double z : fine2)
            if (!in_ramp(h, z)) out.hedge_min_pnl = std::min(out.hedge_min_pnl, pf.value(y, z) - h(y, z));
    out.hedge_audit_ok = out.hedge_min_pnl >= -1e-6 * x0;

    if (cfg.with_primal) {
        const auto primal = lp::solve(build_primal_two(spec), cfg.lp);
        check_solution(primal, "two-maturity superhedge primal");
        out.primal_value = -primal.value;
        out.gap = out.dual_value - *out.primal_value;
        out.iterations += primal.iterations;
        Coupling c{spec.grid1, spec.grid2, primal.primal};
        for (std::size_t i = 0; i < n1; ++i) {
            double r = 0.0;
            for (std::size_t j = 0; j < n2; ++j) r += c.mass[i * n2 + j] * (spec.grid2[j] - spec.grid1[i]);
            out.martingale_residual = std::max(out.martingale_residual, std::abs(r));
        }
        for (int t = 0; t < 2; ++t) {
            for (std::size_t m = 0; m < strikes[t].size(); ++m) {
                double v = 0.0;
                for (std::size_t i = 0; i < n1; ++i)
                    for (std::size_t j = 0; j < n2; ++j)
                        v += c.mass[i * n2 + j] * pos((t == 0 ? spec.grid1[i] : spec.grid2[j]) - strikes[t][m]);
                out.primal_band_violation = std::max(
                    {out.primal_band_violation, v - spec.quotes[t].ask[m], spec.quotes[t].bid[m] - v});
            }
        }
        out.coupling = std::move(c);
    }
    return out;
}

void check_assumption(std::span<const MaturityMarginals> mm) {
    std::vector<Marginal> bids, asks;
    for (const auto& m : mm) {
        bids.push_back(m.bid);
        asks.push_back(m.ask);
    }
    const double tol = default_order_tol(mm[0].ask);
    if (const auto v = check_bid_ask_order(bids, asks, tol))
        throw ArbitrageError("bid marginal of maturity " + std::to_string(v->bid_maturity + 1) +
                                 " is not below the ask marginal of maturity " +
                                 std::to_string(v->ask_maturity + 1) + " in convex order",
                             v->strike, v->bid_maturity, v->ask_maturity);
}

}  // namespace

PriceBound superhedge(const Payoff& h, std::span<const MaturityMarginals> marginals, const HedgeConfig& config) {
    if (marginals.empty() || marginals.size() > 2) throw InputError("superhedge: one or two maturities supported");
    if (h.maturities() > static_cast<int>(marginals.size()))
        throw InputError("superhedge: payoff needs two maturities");
    common_forward(marginals);
    check_assumption(marginals);
    PriceBound b = marginals.size() == 1 ? super_single(h, marginals[0], config) : super_two(h, marginals, config);
    b.side = BoundSide::super;
    return b;
}

PriceBound subhedge(const Payoff& h, std::span<const MaturityMarginals> marginals, const HedgeConfig& config) {
    PriceBound b = superhedge(-h, marginals, config);
    b.side = BoundSide::sub;
    b.value = -b.value;
    b.dual_value = -b.dual_value;
    if (b.primal_value) b.primal_value = -*b.primal_value;
    auto& pf = b.portfolio;
    pf.cash = -pf.cash;
    for (auto& f : pf.forward) f = -f;
    for (auto& l : pf.legs) l.weight = -l.weight;
    for (auto& d : pf.delta) d = -d;
    pf.cost = -pf.cost;
    return b;
}

}  // namespace bamot
