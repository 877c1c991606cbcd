#include "bamot/closedform.hpp"

#include <cmath>
#include <vector>

#include "bamot/error.hpp"

namespace bamot {

namespace {

void check_inputs(const Marginal& ask, double strike, double x0) {
    if (!ask.atomless()) throw InputError("one-sided digital: ask must be atomless; use the LP for discrete marginals");
    if (!(strike > x0)) throw InputError("one-sided digital: strike must exceed the forward");
    if (std::abs(ask.barycenter() - x0) > 1e-9 * std::max(1.0, x0))
        throw InputError("one-sided digital: x0 differs from the ask barycenter");
}

}  // namespace

double critical_strike(const Marginal& ask, double strike, double x0) {
    check_inputs(ask, strike, x0);
    const auto b = [&](double l) { return ask.call_price(l) - (strike - l) * (1.0 - ask.cdf(l)); };
    if (b(strike) <= 0.0) throw InputError("one-sided digital: ask supported in [0, K], the problem is trivial");
    double lo = 0.0, hi = strike;
    if (b(lo) >= 0.0) throw NumericalError("one-sided digital: b(0) is not negative");
    while (hi - lo > 1e-12 * strike) {
        const double mid = 0.5 * (lo + hi);
        (b(mid) < 0.0 ? lo : hi) = mid;
    }
    const double l = 0.5 * (lo + hi);
    if (l >= strike * (1.0 - 1e-12)) throw InputError("one-sided digital: critical strike equals K");
    return l;
}

OneSidedDigitalResult one_sided_digital(const Marginal& ask, double strike, double x0, std::size_t cells) {
    if (cells == 0) throw InputError("one-sided digital: need at least one cell");
    OneSidedDigitalResult r;
    r.strike = strike;
    const double l = critical_strike(ask, strike, x0);
    r.critical_strike = r.lower_strike = l;
    r.upper_strike = strike;
    r.slope = 1.0 / (strike - l);
    const double fl = ask.cdf(l);
    r.price = 1.0 - fl;
    r.ask_price = 1.0 - ask.cdf(strike);

    std::vector<double> atoms, weights;
    double a = 0.0;
    for (std::size_t i = 1; i <= cells; ++i) {
        const double b = i == cells ? l : std::min(l, ask.quantile(fl * static_cast<double>(i) / cells));
        if (b <= a) continue;
        const auto pm = ask.partial_moments(a, b);
        if (pm.mass > 0.0) {
            atoms.push_back(pm.moment / pm.mass);
            weights.push_back(pm.mass);
        }
        a = b;
    }
    atoms.push_back(strike);
    weights.push_back(1.0 - fl);
    r.optimal_measure = DiscreteMeasure::canonical(std::move(atoms), std::move(weights));
    return r;
}

IvTouchReport primal_dual_iv_touch(const OneSidedDigitalResult& result, const Marginal& ask) {
    IvTouchReport rep;
    const double l = result.critical_strike;
    const double c = ask.call_price(l);
    rep.call_residual = std::abs(result.optimal_measure.call_price(l) - c);
    rep.call_matches = rep.call_residual <= 1e-8 * std::max(1.0, c);
    const auto& x = result.optimal_measure.atoms();
    const auto& w = result.optimal_measure.weights();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > l && x[i] < result.strike) rep.gap_mass += w[i];
    rep.gap_empty = rep.gap_mass == 0.0;
    return rep;
}

}  // namespace bamot
