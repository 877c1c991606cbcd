// Command-line front end: hedging bounds, quote enhancement, calibration and
// the sweeps, emitting JSON and CSV for plotting.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bamot/calibration.hpp"
#include "bamot/closedform.hpp"
#include "bamot/error.hpp"
#include "bamot/experiments.hpp"
#include "bamot/fixtures.hpp"
#include "bamot/hedging.hpp"
#include "bamot/io.hpp"
#include "bamot/metrics.hpp"
#include "bamot/quotes.hpp"

namespace fs = std::filesystem;
using namespace bamot;

namespace {

struct Globals {
    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;
    RunConfig config;
};

std::vector<MaturityMarginals> load_marginals(const std::string& what) {
    if (what == "spx") return {{fixtures::spx_bid(), fixtures::spx_ask()}};
    if (what == "convergence") return {{fixtures::bs(1.0, 0.15, 1.0), fixtures::bs(1.0, 0.20, 1.0)}};
    if (what == "forward-start") {
        std::vector<MaturityMarginals> mm;
        for (const auto& q : fixtures::forward_start_market)
            mm.push_back({fixtures::bs(fixtures::forward_start_spot, q.bid_vol, q.maturity),
                          fixtures::bs(fixtures::forward_start_spot, q.ask_vol, q.maturity)});
        return mm;
    }
    return maturities_from_json(read_json_file(what));
}

fs::path out_file(const Globals& g, const std::string& name) {
    const fs::path dir = g.config.output_dir;
    fs::create_directories(dir);
    return dir / name;
}

void write_json(const Globals& g, const std::string& name, const json& j) {
    std::ofstream f(out_file(g, name));
    f << j.dump(2) << '\n';
    if (!f) throw InputError("cannot write " + name);
}

std::ofstream open_csv(const Globals& g, const std::string& name) {
    std::ofstream f(out_file(g, name));
    if (!f) throw InputError("cannot write " + name);
    f << provenance_line(g.config) << '\n';
    f.precision(17);
    return f;
}

void warn_audit(const PriceBound& b) {
    if (!b.hedge_audit_ok)
        std::cerr << "warning: " << (b.side == BoundSide::super ? "super" : "sub")
                  << "hedge audit reports a P&L shortfall of " << -b.hedge_min_pnl << '\n';
}

void cmd_price(const Globals& g, const std::string& payoff, const std::string& marginals,
               const std::vector<double>& strikes, bool dense) {
    const Payoff h = Payoff::parse(payoff);
    const auto mm = load_marginals(marginals);
    if (static_cast<std::size_t>(h.maturities()) > mm.size())
        throw InputError("payoff needs two maturities but one was given");
    HedgeConfig cfg = g.config.hedge_config();
    if (dense) cfg.strike_mode = StrikeMode::dense;
    if (!strikes.empty()) cfg.strikes.assign(mm.size(), strikes);
    const PriceBound sup = superhedge(h, mm, cfg);
    const PriceBound sub = subhedge(h, mm, cfg);
    warn_audit(sup);
    warn_audit(sub);
    json j{{"payoff", h.to_string()}, {"super", to_json(sup)}, {"sub", to_json(sub)}};
    if (mm.size() == 1 && h.maturities() == 1) {
        const std::pair<double, Marginal> parts[] = {{0.5, mm[0].bid}, {0.5, mm[0].ask}};
        j["mid_price"] = expectation(h, Marginal::combine(parts));
    }
    write_json(g, "price.json", j);
    {
        auto f = open_csv(g, "portfolio_super.csv");
        write_portfolio_csv(sup.portfolio, f);
    }
    {
        auto f = open_csv(g, "portfolio_sub.csv");
        write_portfolio_csv(sub.portfolio, f);
    }
    std::cout << "super " << sup.value << "\nsub " << sub.value << '\n';
    if (j.contains("mid_price")) std::cout << "mid " << j["mid_price"].get<double>() << '\n';
}

void cmd_enhance(const Globals& g, const std::string& chain_path, std::optional<double> forward) {
    std::ifstream in(chain_path);
    if (!in) throw InputError("cannot open '" + chain_path + "'");
    const QuoteChain chain = read_chain_csv(in, forward);
    lp::SimplexOptions o;
    o.tolerance = g.config.lp_tolerance;
    o.audit_tolerance = g.config.audit_tolerance;
    const EnhancedChain e = enhance(combine_put_call(impute(chain)), o);
    const EnhancementReport r = validate_enhanced(e);
    {
        auto f = open_csv(g, "enhanced.csv");
        write_enhanced_csv(e, f);
    }
    write_json(g, "enhancement_report.json", to_json(r));
    write_json(g, "ask_marginal.json", to_json(ask_marginal(e)));
    if (!r.ok()) throw NumericalError("enhanced quotes fail validation; see enhancement_report.json");
    std::cout << "enhanced " << e.strikes.size() << " strikes, truncation index " << e.truncation << '\n';
}

CalibrationProblem problem_from(const std::string& csv, const json& sidecar, int default_components) {
    std::ifstream in(csv);
    if (!in) throw InputError("cannot open '" + csv + "'");
    CalibrationProblem p;
    p.quotes = read_calibration_csv(in);
    if (!sidecar.contains("forward") || !sidecar.at("forward").is_number())
        throw InputError("sidecar: missing number 'forward'");
    p.forward = sidecar.at("forward").get<double>();
    p.spot = sidecar.value("spot", p.forward);
    p.components = sidecar.value("J", default_components);
    return p;
}

void cmd_calibrate(const Globals& g, const std::string& quotes, const std::string& sidecar_path,
                   const std::string& bid_quotes, const std::string& ask_path) {
    const json sidecar = read_json_file(sidecar_path);
    const std::string side = sidecar.value("side", "ask");
    CalibrationOptions o;
    o.starts = g.config.calibration_starts;
    o.seed = g.config.seed;
    CalibrationProblem p = problem_from(quotes, sidecar, g.config.components);
    json out;
    if (side == "ask") {
        const auto ask = calibrate_ask(p, o);
        out["ask"] = to_json(ask);
        write_json(g, "ask.json", to_json(ask.marginal));
        if (!bid_quotes.empty()) {
            CalibrationProblem b = problem_from(bid_quotes, sidecar, g.config.components);
            b.side = CalibrationSide::bid_from_ask;
            const auto bid = calibrate_bid_from_ask(ask.marginal, b, o);
            out["bid"] = to_json(bid);
            write_json(g, "bid.json", to_json(bid.marginal));
        }
    } else if (side == "bid") {
        if (ask_path.empty()) throw InputError("calibrating the bid needs --ask with the ask mixture");
        const MixtureMarginal ask = mixture_from_json(read_json_file(ask_path));
        p.side = CalibrationSide::bid_from_ask;
        const auto bid = calibrate_bid_from_ask(ask, p, o);
        out["bid"] = to_json(bid);
        write_json(g, "bid.json", to_json(bid.marginal));
    } else {
        throw InputError("sidecar: side must be 'ask' or 'bid'");
    }
    write_json(g, "calibration.json", out);
    for (const auto& [k, v] : out.items()) {
        std::cout << k << " objective " << v["objective"].get<double>() << '\n';
        for (const auto& w : v["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
    }
}

void cmd_distance(const Globals& g, const std::string& mu_path, const std::string& nu_path, int counterexample) {
    json out;
    if (counterexample > 0) {
        const auto [mu, nu] = counterexample_pair(counterexample);
        out = {{"distance", to_json(bid_ask_distance(mu, nu))},
               {"directed_mu_nu", to_json(directed_distance(mu, nu))},
               {"directed_nu_mu", to_json(directed_distance(nu, mu))},
               {"wasserstein1", wasserstein1(mu, nu)}};
    } else {
        if (mu_path.empty() || nu_path.empty()) throw InputError("distance needs --mu and --nu, or --counterexample");
        const json jm = read_json_file(mu_path), jn = read_json_file(nu_path);
        const Marginal mu = marginal_from_json(jm), nu = marginal_from_json(jn);
        if (std::abs(mu.barycenter() - nu.barycenter()) > 1e-9 * std::max(1.0, std::abs(mu.barycenter()))) {
            if (!mu.purely_atomic() || !nu.purely_atomic())
                throw InputError("distance: barycenters differ; only discrete measures are supported then");
            const DiscreteMeasure a = discrete_from_json(jm), b = discrete_from_json(jn);
            const auto ab = directed_distance_lp(a, b), ba = directed_distance_lp(b, a);
            DistanceReport d{0.5 * (ab.value + ba.value), std::nullopt, DistanceMethod::lp_oracle};
            out = {{"distance", to_json(d)}, {"directed_mu_nu", to_json(ab)}, {"directed_nu_mu", to_json(ba)}};
        } else {
            out = {{"distance", to_json(bid_ask_distance(mu, nu))},
                   {"directed_mu_nu", to_json(directed_distance(mu, nu))},
                   {"directed_nu_mu", to_json(directed_distance(nu, mu))}};
        }
        out["wasserstein1"] = wasserstein1(mu, nu);
    }
    write_json(g, "distance.json", out);
    std::cout << "distance " << out["distance"]["value"].get<double>() << '\n';
}

void cmd_digital(const Globals& g, const std::string& ask_path, double strike, std::optional<double> spot,
                 std::size_t cells) {
    const Marginal ask = marginal_from_json(read_json_file(ask_path));
    const double x0 = spot.value_or(ask.barycenter());
    const auto r = one_sided_digital(ask, strike, x0, cells);
    const auto t = primal_dual_iv_touch(r, ask);
    json j = to_json(r);
    j["touch"] = {{"call_matches", t.call_matches},
                  {"call_residual", t.call_residual},
                  {"gap_empty", t.gap_empty},
                  {"gap_mass", t.gap_mass}};
    write_json(g, "digital_one_sided.json", j);
    std::cout << "critical strike " << r.critical_strike << "\nprice " << r.price << '\n';
}

void cmd_converge(const Globals& g, const std::string& payoff, const std::string& marginals, bool custom_grid) {
    const Payoff h = Payoff::parse(payoff);
    const auto mm = load_marginals(marginals);
    if (mm.size() != 1) throw InputError("converge: single-maturity marginals only");
    const double x0 = mm[0].ask.barycenter();
    ConvergenceConfig c;
    c.gammas = g.config.gammas;
    c.hedge = convergence_hedge_config(x0);
    if (custom_grid) {
        const HedgeConfig base = g.config.hedge_config();
        c.hedge.grid = base.grid;
        c.hedge.lp = base.lp;
    }
    const auto s = convergence_sweep(h, mm[0].bid, mm[0].ask, c);
    {
        auto f = open_csv(g, "converge.csv");
        f << "gamma,distance,superhedge,mid_price,premium\n";
        for (const auto& p : s.points)
            f << p.gamma << ',' << p.distance << ',' << p.superhedge << ',' << p.mid_price << ',' << p.premium << '\n';
    }
    write_json(g, "converge.json",
               {{"payoff", h.to_string()},
                {"slope", s.fit.slope},
                {"intercept", s.fit.intercept},
                {"fit_points", s.fit.points}});
    std::cout << "slope " << s.fit.slope << " over " << s.fit.points << " points\n";
}

void cmd_forward_start(const Globals& g, const std::string& marginals, const std::vector<double>& ks,
                       const std::vector<double>& strikes) {
    const auto mm = load_marginals(marginals);
    ForwardStartConfig c = default_forward_start_config();
    if (!ks.empty()) c.ks = ks;
    if (!strikes.empty()) c.strikes = strikes;
    const HedgeConfig base = g.config.hedge_config();
    c.hedge.grid = base.grid;
    c.hedge.product_points = base.product_points;
    c.hedge.lp = base.lp;
    c.hedge.strike_mode = base.strike_mode;
    const auto rows = forward_start_sweep(mm, c);
    auto f = open_csv(g, "forward_start.csv");
    f << "k,bamot_super,bamot_sub,mot_super,mot_sub\n";
    for (auto r : rows) {
        for (double* v : {&r.bamot_super, &r.bamot_sub, &r.mot_super, &r.mot_sub}) *v += 0.0;  // no -0
        f << r.k << ',' << r.bamot_super << ',' << r.bamot_sub << ',' << r.mot_super << ',' << r.mot_sub << '\n';
        std::cout << "k " << r.k << "  bamot [" << r.bamot_sub << ", " << r.bamot_super << "]  mot [" << r.mot_sub
                  << ", " << r.mot_super << "]\n";
    }
}

int fail(int code, const std::string& kind, const std::string& message, json extra = json::object()) {
    extra["error"] = kind;
    extra["message"] = message;
    std::cerr << extra.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bid-ask martingale optimal transport: robust price bounds from bid/ask vanilla quotes"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON run configuration");
    app.add_option("--out", g.out, "Output directory (overrides the config)");
    app.add_option("--seed", g.seed, "Seed for randomized starts (overrides the config)");

    std::string payoff, marginals, conv_marginals, fwd_marginals, chain, quotes, sidecar, bid_quotes, ask_path, mu, nu;
    std::vector<double> strikes, ks;
    std::optional<double> forward, spot;
    double strike = 0.0;
    std::size_t cells = 256;
    int counterexample = 0;
    bool dense = false;

    auto* price = app.add_subcommand("price", "Super- and subhedging bounds of a payoff");
    price->add_option("--payoff", payoff, "e.g. 100*digital(6154.05) or call(1)-0.5*put(0.9)")->required();
    price->add_option("--marginals", marginals, "Bid/ask marginals JSON, or spx | forward-start | convergence")
        ->required();
    price->add_option("--strikes", strikes, "Quoted strikes, used at every maturity")->delimiter(',');
    price->add_flag("--dense", dense, "Trade a call at every grid point");

    auto* enh = app.add_subcommand("enhance", "Tighten a quote chain to its no-arbitrage bounds");
    enh->add_option("--chain", chain, "CSV with strike,put_bid,put_ask,call_bid,call_ask")->required();
    enh->add_option("--forward", forward, "Forward (else read from a '# forward = F' line)");

    auto* cal = app.add_subcommand("calibrate", "Fit log-normal mixtures to out-of-the-money quotes");
    cal->add_option("--quotes", quotes, "CSV with strike,otm_price,vega")->required();
    cal->add_option("--sidecar", sidecar, "JSON with forward, spot, J and side (ask | bid)")->required();
    cal->add_option("--bid-quotes", bid_quotes, "Bid quotes to fit against the calibrated ask");
    cal->add_option("--ask", ask_path, "Ask mixture JSON when the sidecar side is bid");

    auto* dist = app.add_subcommand("distance", "Bid-ask distance between two marginals");
    dist->add_option("--mu", mu, "Marginal JSON");
    dist->add_option("--nu", nu, "Marginal JSON");
    dist->add_option("--counterexample", counterexample, "Use the shifted uniform pair of order n")
        ->check(CLI::PositiveNumber);

    auto* dig = app.add_subcommand("digital-one-sided", "Closed-form digital superhedge, bid = Dirac at spot");
    dig->add_option("--ask", ask_path, "Ask marginal JSON")->required();
    dig->add_option("--strike", strike, "Digital strike")->required();
    dig->add_option("--spot", spot, "Spot (default: the ask barycenter)");
    dig->add_option("--cells", cells, "Concentration cells below the critical strike");

    auto* conv = app.add_subcommand("converge", "Premium against bid-ask distance as spreads shrink");
    conv->add_option("--payoff", payoff)->required();
    conv->add_option("--marginals", conv_marginals, "Bid/ask marginals JSON or convergence")->default_val("convergence");

    auto* fwd = app.add_subcommand("forward-start", "BAMOT and MOT bounds of (x2 - k x1)^+ over k");
    fwd->add_option("--marginals", fwd_marginals, "Two-maturity marginals JSON or forward-start")
        ->default_val("forward-start");
    fwd->add_option("--ks", ks, "Relative strikes k")->delimiter(',');
    fwd->add_option("--strikes", strikes, "Quoted strikes at both maturities")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "usage", e.what());
    }

    try {
        if (!g.config_path.empty()) g.config = run_config_from_json(read_json_file(g.config_path));
        if (!g.out.empty()) g.config.output_dir = g.out;
        if (g.seed) g.config.seed = *g.seed;
        g.config.validate();

        if (*price)
            cmd_price(g, payoff, marginals, strikes, dense);
        else if (*enh)
            cmd_enhance(g, chain, forward);
        else if (*cal)
            cmd_calibrate(g, quotes, sidecar, bid_quotes, ask_path);
        else if (*dist)
            cmd_distance(g, mu, nu, counterexample);
        else if (*dig)
            cmd_digital(g, ask_path, strike, spot, cells);
        else if (*conv)
            cmd_converge(g, payoff, conv_marginals, !g.config_path.empty());
        else if (*fwd)
            cmd_forward_start(g, fwd_marginals, ks, strikes);
    } catch (const ArbitrageError& e) {
        json extra{{"witness_strike", e.witness_strike()}};
        if (e.bid_maturity()) extra["bid_maturity"] = *e.bid_maturity();
        if (e.ask_maturity()) extra["ask_maturity"] = *e.ask_maturity();
        return fail(2, "arbitrage", e.what(), extra);
    } catch (const InfeasibleError& e) {
        return fail(2, "infeasible", e.what(), {{"row", e.row()}});
    } catch (const InputError& e) {
        return fail(2, "input", e.what());
    } catch (const NumericalError& e) {
        return fail(3, "numerical", e.what());
    } catch (const std::exception& e) {
        return fail(3, "numerical", e.what());
    }
    return 0;
}
