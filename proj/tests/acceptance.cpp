// Acceptance suite: one PASS/FAIL line per criterion. Exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bamot/calibration.hpp"
#include "bamot/closedform.hpp"
#include "bamot/error.hpp"
#include "bamot/experiments.hpp"
#include "bamot/fixtures.hpp"
#include "bamot/hedging.hpp"
#include "bamot/metrics.hpp"
#include "bamot/quotes.hpp"
#include "generators.hpp"
#include "tiny.hpp"

using namespace bamot;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Marginal mid_of(const Marginal& bid, const Marginal& ask) {
    const std::pair<double, Marginal> parts[] = {{0.5, bid}, {0.5, ask}};
    return Marginal::combine(parts);
}

Outcome c1() {
    const Marginal ask = fixtures::bs(1.0, 0.2, 1.0 / 12);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = one_sided_digital(ask, 1.05, 1.0);
    const double secs = seconds_since(t0);
    const bool ok = std::abs(r.price - 0.46) <= 0.005 && std::abs(r.critical_strike - 1.004) <= 0.002 && secs < 0.1;
    return {ok, fmt("price %.5f (0.46 +- 0.005), L* %.5f (1.004 +- 0.002), %.4f s (< 0.1 s)", r.price,
                    r.critical_strike, secs)};
}

Outcome c2() {
    const MaturityMarginals mm[] = {{fixtures::spx_bid(), fixtures::spx_ask()}};
    HedgeConfig cfg;
    cfg.grid.points = 400;
    cfg.strike_mode = StrikeMode::dense;
    const auto h = Payoff::digital(fixtures::spx_digital_strike) * 100.0;
    const auto t0 = std::chrono::steady_clock::now();
    const auto b = superhedge(h, mm, cfg);
    const double secs = seconds_since(t0);
    const double mid = expectation(h, fixtures::spx_mid());
    const double premium = b.value - mid;
    const auto [lo, hi] = call_spread_strikes(b.portfolio);
    const bool ok = std::abs(b.value - 46.84) <= 0.3 && std::abs(mid - 37.14) <= 0.1 &&
                    std::abs(premium - 9.70) <= 0.4 && std::abs(lo - 6032.0) <= 10.0 &&
                    std::abs(hi - fixtures::spx_digital_strike) <= 1e-6 && secs < 30.0;
    return {ok, fmt("superhedge %.4f (46.84 +- 0.3), mid %.4f (37.14 +- 0.1), premium %.4f (9.70 +- 0.4), "
                    "spread %.2f/%.2f (6032 +- 10 / 6154.05), %.2f s (< 30 s)",
                    b.value, mid, premium, lo, hi, secs)};
}

Outcome c3() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst400 = 0.0, worst800 = 0.0;
    int shrink_fail = 0;
    for (int t = 0; t < 20; ++t) {
        const MixtureMarginal ask = gen::mixture(rng, 1 + t % 3, 100.0);
        std::vector<LogNormalComponent> bc = ask.components();
        for (auto& c : bc) c.vol *= 0.6 + 0.35 * u(rng);
        const MixtureMarginal bid(bc, ask.forward());
        const Marginal am(ask);
        std::vector<double> strikes;
        for (int i = 1; i <= 7; ++i) strikes.push_back(am.quantile(i / 8.0));
        Payoff h = Payoff::constant(0.0);
        for (int i = 0; i < 3; ++i) {
            const double k = am.quantile(0.05 + 0.9 * u(rng));
            const double c = 2.0 * u(rng) - 1.0;
            h = h + (u(rng) < 0.5 ? Payoff::call(k) : Payoff::put(k)) * c;
        }
        const MaturityMarginals mm[] = {{bid, ask}};
        double gaps[2];
        for (int r = 0; r < 2; ++r) {
            HedgeConfig cfg;
            cfg.grid.points = r == 0 ? 400 : 800;
            cfg.strikes = {strikes};
            const auto b = t % 2 == 0 ? superhedge(h, mm, cfg) : subhedge(h, mm, cfg);
            gaps[r] = std::abs(*b.gap) / std::max(1.0, std::abs(b.dual_value));
        }
        worst400 = std::max(worst400, gaps[0]);
        worst800 = std::max(worst800, gaps[1]);
        if (gaps[1] > std::max(gaps[0], 1e-9)) ++shrink_fail;
    }
    const bool ok = worst400 <= 1e-3 && worst800 <= 1e-3 && shrink_fail == 0;
    return {ok, fmt("20 instances: max relative gap %.2e at 400 points, %.2e at 800 (<= 1e-3), "
                    "%d not shrinking",
                    worst400, worst800, shrink_fail)};
}

Outcome c4() {
    std::vector<MaturityMarginals> mm;
    for (const auto& q : fixtures::forward_start_market)
        mm.push_back({fixtures::bs(fixtures::forward_start_spot, q.bid_vol, q.maturity),
                      fixtures::bs(fixtures::forward_start_spot, q.ask_vol, q.maturity)});
    const ForwardStartConfig fc = default_forward_start_config();
    HedgeConfig cfg;
    cfg.product_points = 150;
    cfg.strikes = {fc.strikes, fc.strikes};
    double worst_weak = -1e300, worst_gap = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (double k : fc.ks) {
        for (int side = 0; side < 2; ++side) {
            const auto h = Payoff::forward_start(k);
            const auto b = side == 0 ? superhedge(h, mm, cfg) : subhedge(h, mm, cfg);
            // super: primal - dual; sub: dual - primal. Both must be <= 1e-7.
            const double excess = side == 0 ? *b.primal_value - b.dual_value : b.dual_value - *b.primal_value;
            worst_weak = std::max(worst_weak, excess);
            worst_gap = std::max(worst_gap, std::abs(*b.gap));
        }
    }
    const double x0 = fixtures::forward_start_spot;
    const bool ok = worst_weak <= 1e-7 && worst_gap <= 1e-3 * x0;
    return {ok, fmt("%zu strikes x super/sub at 150x150: max(primal - dual) %.2e (<= 1e-7), max gap %.2e "
                    "(<= %.2g), %.1f s",
                    fc.ks.size(), worst_weak, worst_gap, 1e-3 * x0, seconds_since(t0))};
}

struct Sweeps {
    ConvergenceSweep rr, dig;
    double m = 0.0;
    double secs = 0.0;
};

const Sweeps& sweeps() {
    static const Sweeps s = [] {
        Sweeps out;
        const Marginal b = fixtures::bs(1.0, 0.15, 1.0), a = fixtures::bs(1.0, 0.2, 1.0);
        ConvergenceConfig c;
        c.gammas = default_gammas();
        c.hedge = convergence_hedge_config(1.0);
        const auto t0 = std::chrono::steady_clock::now();
        out.rr = convergence_sweep(Payoff::risk_reversal(0.95, 1.05), b, a, c);
        out.dig = convergence_sweep(Payoff::digital(1.0), b, a, c);
        out.secs = seconds_since(t0);
        out.m = max_density(mid_of(b, a));
        return out;
    }();
    return s;
}

Outcome c5() {
    const auto& s = sweeps();
    const bool ok = std::abs(s.rr.fit.slope - 1.0) <= 0.15 && std::abs(s.dig.fit.slope - 0.5) <= 0.1 &&
                    s.rr.points.size() >= 12 && s.dig.points.size() >= 12 && s.secs < 300.0;
    return {ok, fmt("risk reversal slope %.4f (1.0 +- 0.15), digital slope %.4f (0.5 +- 0.1), %zu gammas, "
                    "%.1f s (< 300 s)",
                    s.rr.fit.slope, s.dig.fit.slope, s.rr.points.size(), s.secs)};
}

Outcome c6() {
    const auto& s = sweeps();
    double rr_ratio = 0.0, dig_ratio = 0.0;
    for (const auto& p : s.rr.points) rr_ratio = std::max(rr_ratio, p.premium / p.distance);
    for (const auto& p : s.dig.points) dig_ratio = std::max(dig_ratio, p.premium / std::sqrt(p.distance));
    const double c_dig = std::sqrt(2.0 * s.m);
    const bool ok = rr_ratio <= 2.0 && dig_ratio <= c_dig;
    return {ok, fmt("max premium/d %.4f (<= 2), max premium/sqrt(d) %.4f (<= sqrt(2M) = %.4f, M = %.4f)",
                    rr_ratio, dig_ratio, c_dig, s.m)};
}

Outcome c7() {
    double worst_d = 0.0, worst_w = 0.0;
    std::string measured;
    for (int n = 1; n <= 5; ++n) {
        const auto [mu, nu] = counterexample_pair(n);
        const double d = bid_ask_distance(mu, nu).value;
        worst_d = std::max(worst_d, std::abs(d - 1.0 / (2 * n + 1)));
        worst_w = std::max(worst_w, std::abs(wasserstein1(mu, nu) - 1.0));
        if (n == 2) measured = fmt("n=2: d %.6f, directed %.6f", d, directed_distance(nu, mu).value);
    }
    std::mt19937_64 rng(77);
    int iff_fail = 0;
    for (int t = 0; t < 100; ++t) {
        const auto a = gen::discrete(rng, 4);
        const auto b = t % 2 == 0 ? gen::spread(rng, a, 0.8) : gen::with_mean(gen::discrete(rng, 4), a.barycenter());
        const bool ordered = convex_order_leq(a, b, 1e-12).holds;
        const bool zero = directed_distance(a, b).value <= 1e-12;
        if (ordered != zero) ++iff_fail;
    }
    int tri_fail = 0;
    for (int t = 0; t < 30; ++t) {
        const auto a = gen::discrete(rng, 4);
        const auto b = gen::with_mean(gen::discrete(rng, 5), a.barycenter());
        const auto c = gen::with_mean(gen::discrete(rng, 3), a.barycenter());
        if (bid_ask_distance(a, c).value > bid_ask_distance(a, b).value + bid_ask_distance(b, c).value + 1e-12)
            ++tri_fail;
    }
    const bool ok = worst_d <= 1e-12 && worst_w <= 1e-12 && iff_fail == 0 && tri_fail == 0;
    return {ok, fmt("max |d - 1/(2n+1)| %.3e (<= 1e-12; %s), max |W1 - 1| %.1e, iff failures %d/100, "
                    "triangle failures %d/30",
                    worst_d, measured.c_str(), worst_w, iff_fail, tri_fail)};
}

Outcome c8() {
    std::mt19937_64 rng(8);
    int fail_props = 0, fail_inside = 0, fail_idem = 0, fail_marg = 0;
    double worst_reprice = 0.0, worst_mass = 0.0, worst_bary = 0.0;
    for (int t = 0; t < 100; ++t) {
        const auto c = gen::calls(rng);
        const auto e = enhance(c);
        if (!validate_enhanced(e, 1e-8).ok()) ++fail_props;
        for (std::size_t m = 0; m < c.strikes.size(); ++m)
            if (e.enhanced_bid[m] < c.bid[m] || e.enhanced_ask[m] > c.ask[m]) {
                ++fail_inside;
                break;
            }
        const auto again = enhance(e.as_calls());
        for (std::size_t m = 0; m < c.strikes.size(); ++m)
            if (std::abs(again.enhanced_ask[m] - e.enhanced_ask[m]) > 1e-9 ||
                std::abs(again.enhanced_bid[m] - e.enhanced_bid[m]) > 1e-9) {
                ++fail_idem;
                break;
            }
        const auto mu = ask_marginal(e);
        double mass = 0.0;
        for (double w : mu.weights()) mass += w;
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
        worst_bary = std::max(worst_bary, std::abs(mu.barycenter() - c.forward));
        for (int m = 0; m <= e.truncation; ++m)
            worst_reprice = std::max(worst_reprice, std::abs(mu.call_price(e.strikes[m]) - e.enhanced_ask[m]));
    }
    if (worst_reprice > 1e-10 || worst_mass > 1e-10 || worst_bary > 1e-10) fail_marg = 1;
    const bool ok = fail_props == 0 && fail_inside == 0 && fail_idem == 0 && fail_marg == 0;
    return {ok, fmt("100 chains (forward 100): property failures %d, outside spread %d, not idempotent %d; "
                    "ask marginal max reprice error %.2e, |mass - 1| %.2e, |barycenter - F| %.2e (<= 1e-10)",
                    fail_props, fail_inside, fail_idem, worst_reprice, worst_mass, worst_bary)};
}

Outcome c9() {
    std::mt19937_64 rng(99);
    double worst = 0.0;
    int failures = 0;
    for (int t = 0; t < 25; ++t) {
        double ref_p, ref_d, p, d;
        if (t < 17) {
            const auto s = tiny::single(rng, 3 + t % 6, 1 + t % 3);
            const auto rp = tiny::reference_primal(s), rd = tiny::reference_dual(s);
            const auto sp = lp::solve(build_primal_single(s)), sd = lp::solve(build_dual_single(s));
            if (!rp || !rd || sp.status != lp::Status::optimal || sd.status != lp::Status::optimal) {
                ++failures;
                continue;
            }
            ref_p = *rp, ref_d = *rd, p = -sp.value, d = sd.value;
        } else {
            const auto s = tiny::two(rng, 3 + t % 2, 3 + (t / 2) % 2, 1 + t % 2);
            const auto rp = tiny::reference_primal(s), rd = tiny::reference_dual(s);
            const auto sp = lp::solve(build_primal_two(s)), sd = lp::solve(build_dual_two(s));
            if (!rp || !rd || sp.status != lp::Status::optimal || sd.status != lp::Status::optimal) {
                ++failures;
                continue;
            }
            ref_p = *rp, ref_d = *rd, p = -sp.value, d = sd.value;
        }
        const double e = std::max(std::abs(p - ref_p), std::abs(d - ref_d)) / std::max(1.0, std::abs(ref_d));
        worst = std::max(worst, e);
    }
    const bool ok = failures == 0 && worst <= 1e-8;
    return {ok, fmt("25 instances (17 one-maturity, 8 two-maturity): max deviation from dense tableau "
                    "reference %.2e (<= 1e-8), solver failures %d",
                    worst, failures)};
}

Outcome c10() {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Marginal bid = fixtures::bs(100.0, 0.15, 1.0), ask = fixtures::bs(100.0, 0.2, 1.0);
    const MaturityMarginals mm[] = {{bid, ask}};
    HedgeConfig cfg;
    cfg.strike_mode = StrikeMode::dense;
    cfg.with_primal = false;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        Payoff h = Payoff::linear() * (2.0 * u(rng) - 1.0) + Payoff::constant(u(rng));
        for (int i = 0; i < 3; ++i) {
            const double k = 60.0 + 80.0 * u(rng);
            h = h + (u(rng) < 0.5 ? Payoff::call(k) : Payoff::put(k)) * u(rng);
        }
        const double sup = superhedge(h, mm, cfg).value;
        const double concave = superhedge(-h, mm, cfg).value;
        worst = std::max(worst, std::abs(sup - expectation(h, ask)));
        worst = std::max(worst, std::abs(concave - expectation(-h, bid)));
    }
    const bool ok = worst <= 1e-6 * 100.0;
    return {ok, fmt("10 convex payoffs (vs ask) and their negations (vs bid), dense strikes: max |superhedge - price| %.2e "
                    "(<= 1e-6 x0)",
                    worst)};
}

Outcome c11() {
    const auto fit_side = [](const MixtureMarginal& m, const Marginal& grid_of, int n) {
        CalibrationProblem p;
        p.forward = p.spot = m.forward();
        p.components = static_cast<int>(m.components().size());
        for (int i = 0; i < n; ++i) {
            const double k = grid_of.quantile(0.01 + 0.98 * i / (n - 1));
            p.quotes.push_back({k, otm_price(m, k, p.spot), std::nullopt});
        }
        return p;
    };
    const auto worst = [](const CalibrationResult& r) {
        double w = 0.0;
        for (double e : r.scaled_errors) w = std::max(w, std::abs(e));
        return w;
    };
    const auto ask = fixtures::spx_ask(), bid = fixtures::spx_bid();
    const Marginal grid(ask);
    const auto ra = calibrate_ask(fit_side(ask, grid, 40));
    const auto rb = calibrate_bid_from_ask(ra.marginal, fit_side(bid, grid, 40));
    const bool ordered = convex_order_leq(Marginal(rb.marginal), Marginal(ra.marginal), 1e-8 * ask.forward()).holds;
    const bool ok = worst(ra) <= 1e-4 && worst(rb) <= 1e-4 && ordered;
    return {ok, fmt("40 quotes per side: max |error|/vega ask %.2e, bid %.2e (<= 1e-4); bid <=c ask: %s",
                    worst(ra), worst(rb), ordered ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    // optional arguments select criteria by name prefix, e.g. "C10"
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"C1  one-sided digital closed form", c1},
        {"C2  S&P digital superhedge", c2},
        {"C3  strong duality, one maturity", c3},
        {"C4  weak duality, two maturities", c4},
        {"C5  convergence rates", c5},
        {"C6  rate bounds", c6},
        {"C7  bid-ask distance laws", c7},
        {"C8  quote enhancement suite", c8},
        {"C9  brute-force oracle equivalence", c9},
        {"C10 convex payoff identities", c10},
        {"C11 calibration round trip", c11},
    };
    int failed = 0;
    int ran = 0;
    for (const auto& [name, run] : criteria) {
        const std::string n = name;
        bool selected = argc < 2;
        for (int i = 1; i < argc; ++i) selected |= n.rfind(std::string(argv[i]) + ' ', 0) == 0;
        if (!selected) continue;
        ++ran;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
