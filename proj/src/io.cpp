#include "bamot/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "bamot/error.hpp"

namespace bamot {

namespace {

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) throw InputError(std::string("json: missing number '") + key + "'");
    return j.at(key).get<double>();
}

template <class T>
T value_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

const char* side_name(BoundSide s) { return s == BoundSide::super ? "super" : "sub"; }

}  // namespace

void RunConfig::validate() const {
    if (grid_points < 3 || product_points < 3) throw InputError("config: grid sizes must be at least 3");
    if (!(lower_tail > 0.0 && lower_tail < 0.5) || !(upper_tail > 0.0 && upper_tail < 0.5))
        throw InputError("config: tail quantiles must lie in (0, 0.5)");
    if (!(lp_tolerance > 0.0) || !(audit_tolerance > 0.0)) throw InputError("config: tolerances must be positive");
    if (components < 1) throw InputError("config: components must be positive");
    if (calibration_starts < 1) throw InputError("config: calibration_starts must be positive");
    for (double g : gammas)
        if (!(g >= 0.0 && g <= 1.0)) throw InputError("config: gammas must lie in [0, 1]");
}

HedgeConfig RunConfig::hedge_config() const {
    HedgeConfig h;
    h.grid.points = grid_points;
    h.grid.q_lo = lower_tail;
    h.grid.q_hi = 1.0 - upper_tail;
    h.product_points = product_points;
    h.strike_mode = strike_mode;
    h.strikes = strikes;
    h.with_primal = with_primal;
    h.lp.tolerance = lp_tolerance;
    h.lp.audit_tolerance = audit_tolerance;
    return h;
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw InputError("config: expected a JSON object");
    static const char* known[] = {"grid_points", "product_points", "lower_tail", "upper_tail", "lp_tolerance",
                                  "audit_tolerance", "strike_mode", "strikes", "with_primal", "output_dir",
                                  "seed", "components", "calibration_starts", "gammas"};
    for (const auto& [k, v] : j.items())
        if (std::find(std::begin(known), std::end(known), k) == std::end(known))
            throw InputError("config: unknown key '" + k + "'");
    RunConfig c;
    try {
        c.grid_points = value_or(j, "grid_points", c.grid_points);
        c.product_points = value_or(j, "product_points", c.product_points);
        c.lower_tail = value_or(j, "lower_tail", c.lower_tail);
        c.upper_tail = value_or(j, "upper_tail", c.upper_tail);
        c.lp_tolerance = value_or(j, "lp_tolerance", c.lp_tolerance);
        c.audit_tolerance = value_or(j, "audit_tolerance", c.audit_tolerance);
        const auto mode = value_or<std::string>(j, "strike_mode", "quoted");
        if (mode == "quoted")
            c.strike_mode = StrikeMode::quoted;
        else if (mode == "dense")
            c.strike_mode = StrikeMode::dense;
        else
            throw InputError("config: strike_mode must be 'quoted' or 'dense'");
        if (j.contains("strikes")) {
            const auto& s = j.at("strikes");
            if (s.is_array() && !s.empty() && s.front().is_number())
                c.strikes = {s.get<std::vector<double>>()};
            else
                c.strikes = s.get<std::vector<std::vector<double>>>();
        }
        c.with_primal = value_or(j, "with_primal", c.with_primal);
        c.output_dir = value_or(j, "output_dir", c.output_dir);
        c.seed = value_or(j, "seed", c.seed);
        c.components = value_or(j, "components", c.components);
        c.calibration_starts = value_or(j, "calibration_starts", c.calibration_starts);
        c.gammas = value_or(j, "gammas", c.gammas);
    } catch (const json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

json to_json(const RunConfig& c) {
    return {{"grid_points", c.grid_points},
            {"product_points", c.product_points},
            {"lower_tail", c.lower_tail},
            {"upper_tail", c.upper_tail},
            {"lp_tolerance", c.lp_tolerance},
            {"audit_tolerance", c.audit_tolerance},
            {"strike_mode", c.strike_mode == StrikeMode::quoted ? "quoted" : "dense"},
            {"strikes", c.strikes},
            {"with_primal", c.with_primal},
            {"output_dir", c.output_dir},
            {"seed", c.seed},
            {"components", c.components},
            {"calibration_starts", c.calibration_starts},
            {"gammas", c.gammas}};
}

std::string config_hash(const RunConfig& c) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : to_json(c).dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string provenance_line(const RunConfig& c) {
    return std::string("# bamot ") + version + " config " + config_hash(c);
}

json to_json(const MixtureMarginal& m) {
    json cs = json::array();
    for (const auto& c : m.components()) cs.push_back({{"mean", c.mean}, {"vol", c.vol}, {"weight", c.weight}});
    json j{{"components", cs}, {"forward", m.forward()}};
    if (!m.maturity().empty()) j["maturity"] = m.maturity();
    return j;
}

json to_json(const DiscreteMeasure& m) { return {{"atoms", m.atoms()}, {"weights", m.weights()}}; }

json to_json(const DistanceReport& r) {
    return {{"value", r.value}, {"argmax_strike", optional_number(r.argmax_strike)}, {"method", to_string(r.method)}};
}

json to_json(const HedgePortfolio& p) {
    json legs = json::array();
    for (const auto& l : p.legs)
        legs.push_back({{"maturity", l.maturity + 1},
                        {"strike", l.strike},
                        {"weight", l.weight},
                        {"side", l.priced_at == PriceSide::ask ? "ask" : "bid"}});
    json j{{"cash", p.cash}, {"forward", p.forward}, {"spot", p.spot}, {"legs", legs}, {"cost", p.cost}};
    if (!p.delta.empty()) j["delta"] = {{"grid", p.delta_grid}, {"values", p.delta}};
    return j;
}

json to_json(const PriceBound& b) {
    json j{{"side", side_name(b.side)},
           {"value", b.value},
           {"dual_value", b.dual_value},
           {"primal_value", optional_number(b.primal_value)},
           {"gap", optional_number(b.gap)},
           {"portfolio", to_json(b.portfolio)},
           {"measure", nullptr},
           {"escaping_moment", b.escaping_moment},
           {"audit",
            {{"hedge_min_pnl", b.hedge_min_pnl},
             {"hedge_ok", b.hedge_audit_ok},
             {"primal_band_violation", b.primal_band_violation},
             {"martingale_residual", b.martingale_residual}}},
           {"iterations", b.iterations}};
    if (b.measure) j["measure"] = to_json(*b.measure);
    if (b.coupling) {
        // sparse (x1, x2, mass) triples
        json cells = json::array();
        const auto& c = *b.coupling;
        const std::size_t n2 = c.grid2.size();
        for (std::size_t k = 0; k < c.mass.size(); ++k)
            if (c.mass[k] > 1e-14) cells.push_back({c.grid1[k / n2], c.grid2[k % n2], c.mass[k]});
        j["measure"] = {{"coupling", cells}};
    }
    return j;
}

json to_json(const OneSidedDigitalResult& r) {
    return {{"strike", r.strike},
            {"critical_strike", r.critical_strike},
            {"price", r.price},
            {"ask_price", r.ask_price},
            {"hedge", {{"lower_strike", r.lower_strike}, {"upper_strike", r.upper_strike}, {"slope", r.slope}}},
            {"optimal_measure", to_json(r.optimal_measure)}};
}

json to_json(const EnhancementReport& r) {
    json j{{"ok", r.ok()},
           {"consistent", r.consistent},
           {"consistency_violation", r.consistency_violation},
           {"monotone", r.monotone},
           {"monotone_violation", r.monotone_violation},
           {"ask_convex", r.ask_convex},
           {"convexity_violation", r.convexity_violation},
           {"starts_at_forward", r.starts_at_forward},
           {"violating_triple", nullptr}};
    if (r.violating_triple) j["violating_triple"] = *r.violating_triple;
    return j;
}

json to_json(const CalibrationResult& r) {
    return {{"marginal", to_json(r.marginal)},
            {"objective", r.objective},
            {"start_objectives", r.start_objectives},
            {"best_start", r.best_start},
            {"scaled_errors", r.scaled_errors},
            {"warnings", r.warnings}};
}

MixtureMarginal mixture_from_json(const json& j) {
    if (!j.is_object() || !j.contains("components") || !j.at("components").is_array())
        throw InputError("mixture json: expected an object with a 'components' array");
    std::vector<LogNormalComponent> cs;
    for (const auto& c : j.at("components")) cs.push_back({number(c, "mean"), number(c, "vol"), number(c, "weight")});
    const std::string maturity = value_or<std::string>(j, "maturity", "");
    if (value_or(j, "normalize", false)) return MixtureMarginal::normalized(std::move(cs), maturity);
    std::optional<double> forward;
    if (j.contains("forward") && !j.at("forward").is_null()) forward = number(j, "forward");
    return MixtureMarginal(std::move(cs), forward, maturity);
}

DiscreteMeasure discrete_from_json(const json& j) {
    if (!j.is_object() || !j.contains("atoms") || !j.contains("weights"))
        throw InputError("discrete json: expected 'atoms' and 'weights'");
    try {
        return DiscreteMeasure(j.at("atoms").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw InputError(std::string("discrete json: ") + e.what());
    }
}

Marginal marginal_from_json(const json& j) {
    if (j.is_object() && j.contains("black_scholes")) {
        const auto& b = j.at("black_scholes");
        return MixtureMarginal::black_scholes(number(b, "spot"), number(b, "vol"), number(b, "maturity"));
    }
    if (j.is_object() && j.contains("components")) return mixture_from_json(j);
    if (j.is_object() && j.contains("atoms")) return discrete_from_json(j);
    throw InputError("marginal json: expected a mixture, a discrete measure or black_scholes parameters");
}

std::vector<MaturityMarginals> maturities_from_json(const json& j) {
    std::vector<MaturityMarginals> out;
    const auto one = [](const json& m) {
        if (!m.is_object() || !m.contains("bid") || !m.contains("ask"))
            throw InputError("marginals json: each maturity needs 'bid' and 'ask'");
        return MaturityMarginals{marginal_from_json(m.at("bid")), marginal_from_json(m.at("ask"))};
    };
    if (j.is_array())
        for (const auto& m : j) out.push_back(one(m));
    else
        out.push_back(one(j));
    if (out.empty() || out.size() > 2) throw InputError("marginals json: one or two maturities supported");
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "': " + e.what());
    }
}

void write_portfolio_csv(const HedgePortfolio& p, std::ostream& out) {
    out << "# cash " << p.cash << '\n';
    for (std::size_t t = 0; t < p.forward.size(); ++t)
        out << "# forward maturity " << t + 1 << ' ' << p.forward[t] << '\n';
    out << "strike,weight,side,maturity\n";
    out.precision(17);
    for (const auto& l : p.legs)
        out << l.strike << ',' << l.weight << ',' << (l.priced_at == PriceSide::ask ? "ask" : "bid") << ','
            << l.maturity + 1 << '\n';
}

}  // namespace bamot
