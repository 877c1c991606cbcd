#include "bamot/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bamot/error.hpp"
#include "bamot/metrics.hpp"

namespace bamot {

namespace {

double atom_at(const Marginal& m, double x) {
    const auto& a = m.atoms();
    const auto it = std::lower_bound(a.begin(), a.end(), x);
    if (it == a.end() || *it != x) return 0.0;
    return m.atom_weights()[static_cast<std::size_t>(it - a.begin())];
}

double put_price(const Marginal& m, double k) { return m.call_price(k) - m.barycenter() + k; }

}  // namespace

double expectation(const Payoff& h, const Marginal& m) {
    double v = 0.0;
    for (const auto& t : h.terms()) {
        double e = 0.0;
        switch (t.kind) {
            case Payoff::Kind::constant: e = 1.0; break;
            case Payoff::Kind::linear: e = m.barycenter(); break;
            case Payoff::Kind::call: e = m.call_price(t.k1); break;
            case Payoff::Kind::put: e = put_price(m, t.k1); break;
            case Payoff::Kind::digital: e = 1.0 - m.cdf(t.k1) + atom_at(m, t.k1); break;
            case Payoff::Kind::risk_reversal: e = m.call_price(t.k2) - put_price(m, t.k1); break;
            case Payoff::Kind::forward_start: throw InputError("expectation: forward-start payoffs need a coupling");
        }
        v += t.coef * e;
    }
    return v;
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, std::size_t count) {
    if (x.size() != y.size()) throw InputError("log-log fit: length mismatch");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] >= 1e-12 && y[i] > 0.0) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    if (idx.size() > count) idx.resize(count);
    if (idx.size() < 2) throw InputError("log-log fit: fewer than two usable points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto i : idx) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(idx.size());
    LogLogFit f;
    f.points = idx.size();
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

std::vector<double> default_gammas() {
    return {0.0, 0.3, 0.5, 0.65, 0.75, 0.82, 0.875, 0.91, 0.9375, 0.955, 0.97, 0.98};
}

HedgeConfig convergence_hedge_config(double x0) {
    HedgeConfig c;
    c.grid.points = 400;
    c.strike_mode = StrikeMode::dense;
    c.with_primal = false;
    for (double x = 0.75; x <= 1.25 + 1e-12; x += 0.002) c.extra_points.push_back(x * x0);
    return c;
}

ConvergenceSweep convergence_sweep(const Payoff& h, const Marginal& bid, const Marginal& ask,
                                   const ConvergenceConfig& config) {
    if (h.maturities() != 1) throw InputError("convergence sweep: single-maturity payoffs only");
    const std::pair<double, Marginal> parts[] = {{0.5, bid}, {0.5, ask}};
    const Marginal mid = Marginal::combine(parts);
    const double mid_price = expectation(h, mid);
    ConvergenceSweep out;
    for (double g : config.gammas.empty() ? default_gammas() : config.gammas) {
        if (g < 0.0 || g > 1.0) throw InputError("convergence sweep: gamma outside [0, 1]");
        const Marginal b = deform(bid, mid, g);
        const Marginal a = deform(ask, mid, g);
        ConvergencePoint p;
        p.gamma = g;
        p.distance = bid_ask_distance(b, a).value;
        const MaturityMarginals mm[] = {{b, a}};
        p.superhedge = superhedge(h, mm, config.hedge).value;
        p.mid_price = mid_price;
        p.premium = p.superhedge - mid_price;
        out.points.push_back(p);
    }
    std::vector<double> d, prem;
    for (const auto& p : out.points) {
        d.push_back(p.distance);
        prem.push_back(p.premium);
    }
    out.fit = fit_loglog(d, prem, config.fit_points);
    return out;
}

double max_density(const Marginal& m) {
    double best = 0.0;
    const std::size_t n = 20000;
    for (std::size_t i = 1; i < n; ++i) best = std::max(best, m.density(m.quantile(static_cast<double>(i) / n)));
    // refine around the best grid point by golden section on the density
    double lo = m.quantile(1e-4), hi = m.quantile(1 - 1e-4);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = m.quantile(static_cast<double>(i) / n);
        if (m.density(x) == best) {
            lo = m.quantile(static_cast<double>(i - 1) / n);
            hi = m.quantile(static_cast<double>(i + 1) / n);
            break;
        }
    }
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
        const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
        if (m.density(a) > m.density(b))
            hi = b;
        else
            lo = a;
    }
    return std::max(best, m.density(0.5 * (lo + hi)));
}

ForwardStartConfig default_forward_start_config() {
    ForwardStartConfig c;
    for (int i = 0; i <= 8; ++i) c.ks.push_back(0.8 + 0.05 * i);
    for (int k = 60; k <= 140; k += 5) c.strikes.push_back(k);
    c.hedge.product_points = 150;
    c.hedge.with_primal = false;
    return c;
}

std::vector<ForwardStartRow> forward_start_sweep(std::span<const MaturityMarginals> mm,
                                                 const ForwardStartConfig& config) {
    if (mm.size() != 2) throw InputError("forward-start sweep: two maturities required");
    HedgeConfig hc = config.hedge;
    if (hc.strike_mode == StrikeMode::quoted) hc.strikes = {config.strikes, config.strikes};
    std::vector<MaturityMarginals> mid;
    for (const auto& m : mm) {
        const std::pair<double, Marginal> parts[] = {{0.5, m.bid}, {0.5, m.ask}};
        const Marginal c = Marginal::combine(parts);
        mid.push_back({c, c});
    }
    std::vector<ForwardStartRow> rows;
    for (double k : config.ks) {
        const auto h = Payoff::forward_start(k);
        ForwardStartRow r;
        r.k = k;
        r.bamot_super = superhedge(h, mm, hc).value;
        r.bamot_sub = subhedge(h, mm, hc).value;
        r.mot_super = superhedge(h, mid, hc).value;
        r.mot_sub = subhedge(h, mid, hc).value;
        rows.push_back(r);
    }
    return rows;
}

std::pair<double, double> call_spread_strikes(const HedgePortfolio& p) {
    if (p.legs.size() < 2) throw InputError("call spread: portfolio has fewer than two legs");
    std::vector<OptionLeg> legs = p.legs;
    std::sort(legs.begin(), legs.end(), [](const auto& a, const auto& b) { return std::abs(a.weight) > std::abs(b.weight); });
    return std::minmax(legs[0].strike, legs[1].strike);
}

}  // namespace bamot
