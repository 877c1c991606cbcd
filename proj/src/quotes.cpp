#include "bamot/quotes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "bamot/error.hpp"

namespace bamot {

using lp::inf;
using lp::Relation;

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }

double tol_of(double forward) { return 1e-9 * std::max(1.0, forward); }

void check_calls(const CallChain& c) {
    const std::size_t n = c.strikes.size();
    if (n < 2) throw InputError("call chain: need the zero strike and at least one more");
    if (c.bid.size() != n || c.ask.size() != n) throw InputError("call chain: column lengths differ");
    if (!(c.forward > 0.0)) throw InputError("call chain: forward must be positive");
    if (c.strikes[0] != 0.0) throw InputError("call chain: first strike must be 0");
    for (std::size_t m = 1; m < n; ++m)
        if (!(c.strikes[m] > c.strikes[m - 1])) throw InputError("call chain: strikes must be increasing");
    for (std::size_t m = 0; m < n; ++m) {
        if (!std::isfinite(c.bid[m]) || !std::isfinite(c.ask[m])) throw InputError("call chain: non-finite quote");
        if (c.bid[m] > c.ask[m] + tol_of(c.forward))
            throw ArbitrageError("call chain: bid above ask at strike " + std::to_string(c.strikes[m]), c.strikes[m]);
    }
}

}  // namespace

// ---------------------------------------------------------------- raw chains

void QuoteChain::add_zero_strike() {
    if (!strikes.empty() && strikes.front() == 0.0) {
        put_bid[0] = put_ask[0] = 0.0;
        call_bid[0] = call_ask[0] = forward;
        return;
    }
    strikes.insert(strikes.begin(), 0.0);
    put_bid.insert(put_bid.begin(), 0.0);
    put_ask.insert(put_ask.begin(), 0.0);
    call_bid.insert(call_bid.begin(), forward);
    call_ask.insert(call_ask.begin(), forward);
}

void QuoteChain::validate() const {
    const std::size_t n = strikes.size();
    if (n == 0) throw InputError("quote chain: no strikes");
    if (put_bid.size() != n || put_ask.size() != n || call_bid.size() != n || call_ask.size() != n)
        throw InputError("quote chain: column lengths differ");
    if (!(forward > 0.0) || !std::isfinite(forward)) throw InputError("quote chain: forward must be positive");
    if (strikes[0] != 0.0) throw InputError("quote chain: first strike must be 0");
    for (std::size_t m = 1; m < n; ++m)
        if (!(strikes[m] > strikes[m - 1])) throw InputError("quote chain: strikes must be increasing");
    const double tol = tol_of(forward);
    for (std::size_t m = 0; m < n; ++m) {
        if (put_bid[m] && put_ask[m] && *put_bid[m] > *put_ask[m] + tol)
            throw ArbitrageError("quote chain: put bid above ask at strike " + std::to_string(strikes[m]), strikes[m]);
        if (call_bid[m] && call_ask[m] && *call_bid[m] > *call_ask[m] + tol)
            throw ArbitrageError("quote chain: call bid above ask at strike " + std::to_string(strikes[m]),
                                 strikes[m]);
    }
}

QuoteChain impute(const QuoteChain& chain) {
    chain.validate();
    QuoteChain out = chain;
    for (std::size_t m = 0; m < out.size(); ++m) {
        if (!out.put_bid[m]) out.put_bid[m] = 0.0;
        if (!out.put_ask[m]) out.put_ask[m] = out.strikes[m];
        if (!out.call_bid[m]) out.call_bid[m] = 0.0;
        if (!out.call_ask[m]) out.call_ask[m] = out.forward;
    }
    return out;
}

CallChain combine_put_call(const QuoteChain& chain) {
    chain.validate();
    CallChain out;
    out.forward = chain.forward;
    out.strikes = chain.strikes;
    const double f = chain.forward;
    for (std::size_t m = 0; m < chain.size(); ++m) {
        if (!chain.put_bid[m] || !chain.put_ask[m] || !chain.call_bid[m] || !chain.call_ask[m])
            throw InputError("put-call combination needs an imputed chain");
        const double k = chain.strikes[m];
        const double b = std::max(*chain.call_bid[m], *chain.put_bid[m] + f - k);
        const double a = std::min(*chain.call_ask[m], *chain.put_ask[m] + f - k);
        if (b > a + tol_of(f))
            throw ArbitrageError("put-call parity: combined bid " + std::to_string(b) + " above ask " +
                                     std::to_string(a) + " at strike " + std::to_string(k),
                                 k);
        out.bid.push_back(b);
        out.ask.push_back(a);
    }
    return out;
}

// ---------------------------------------------------------------- enhancement

lp::LinearProgram no_arbitrage_lp(const CallChain& c) {
    check_calls(c);
    const std::size_t n = c.strikes.size();
    lp::LinearProgram prog;
    for (std::size_t i = 0; i < n; ++i) prog.add_variable(0.0);
    const int q = prog.add_variable(0.0, 0.0, inf, "escaping");
    std::vector<std::pair<int, double>> mass, mean{{q, 1.0}};
    for (std::size_t i = 0; i < n; ++i) {
        mass.emplace_back(static_cast<int>(i), 1.0);
        if (c.strikes[i] > 0.0) mean.emplace_back(static_cast<int>(i), c.strikes[i]);
    }
    prog.add_row(std::move(mass), Relation::eq, 1.0, "mass");
    prog.add_row(std::move(mean), Relation::eq, c.forward, "mean");
    for (std::size_t m = 0; m < n; ++m) {
        std::vector<std::pair<int, double>> row{{q, 1.0}};
        for (std::size_t i = m + 1; i < n; ++i) row.emplace_back(static_cast<int>(i), c.strikes[i] - c.strikes[m]);
        prog.add_row(row, Relation::le, c.ask[m]);
        prog.add_row(std::move(row), Relation::ge, c.bid[m]);
    }
    return prog;
}

lp::LinearProgram enhancement_lp(const CallChain& c, std::size_t m, bool ask_side) {
    check_calls(c);
    const std::size_t n = c.strikes.size();
    if (m >= n) throw InputError("enhancement: strike index out of range");
    const double sign = ask_side ? 1.0 : -1.0;
    lp::LinearProgram prog;
    std::vector<int> la(n), lb(n);
    for (std::size_t l = 0; l < n; ++l) la[l] = prog.add_variable(c.ask[l]);
    for (std::size_t l = 0; l < n; ++l) lb[l] = prog.add_variable(-c.bid[l]);
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<std::pair<int, double>> row;
        for (std::size_t l = 0; l < j; ++l) {
            const double v = c.strikes[j] - c.strikes[l];
            row.emplace_back(la[l], v);
            row.emplace_back(lb[l], -v);
        }
        prog.add_row(std::move(row), Relation::ge, sign * pos(c.strikes[j] - c.strikes[m]));
    }
    std::vector<std::pair<int, double>> slope;
    for (std::size_t l = 0; l < n; ++l) {
        slope.emplace_back(la[l], 1.0);
        slope.emplace_back(lb[l], -1.0);
    }
    prog.add_row(std::move(slope), Relation::ge, sign, "slope");
    return prog;
}

EnhancedChain enhance(const CallChain& chain, const lp::SimplexOptions& options) {
    check_calls(chain);
    const auto pre = lp::solve(no_arbitrage_lp(chain), options);
    if (pre.status != lp::Status::optimal) {
        double witness = 0.0;
        if (pre.infeasible_row >= 2) witness = chain.strikes[static_cast<std::size_t>(pre.infeasible_row - 2) / 2];
        throw ArbitrageError("quote chain admits static arbitrage: no measure reprices every call within its band",
                             witness);
    }
    EnhancedChain e;
    e.forward = chain.forward;
    e.strikes = chain.strikes;
    e.bid = chain.bid;
    e.ask = chain.ask;
    const std::size_t n = chain.strikes.size();
    for (std::size_t m = 0; m < n; ++m) {
        const auto sup = lp::solve(enhancement_lp(chain, m, true), options);
        const auto sub = lp::solve(enhancement_lp(chain, m, false), options);
        if (sup.status != lp::Status::optimal || sub.status != lp::Status::optimal)
            throw NumericalError("enhancement LP at strike " + std::to_string(chain.strikes[m]) + ": " +
                                 lp::to_string(sup.status == lp::Status::optimal ? sub.status : sup.status));
        // the quote itself is a feasible hedge, so only rounding can push past it
        e.enhanced_ask.push_back(std::min(sup.value, chain.ask[m]));
        e.enhanced_bid.push_back(std::max(-sub.value, chain.bid[m]));
    }
    const double tie = 1e-12 * chain.forward;
    for (std::size_t m = 1; m < n; ++m)
        if (e.enhanced_ask[m] < e.enhanced_ask[m - 1] - tie) e.truncation = static_cast<int>(m);
    return e;
}

EnhancementReport validate_enhanced(const EnhancedChain& e, double tol) {
    EnhancementReport r;
    const auto& a = e.enhanced_ask;
    const auto& b = e.enhanced_bid;
    const auto& k = e.strikes;
    const std::size_t n = k.size();
    for (std::size_t m = 0; m < n; ++m) r.consistency_violation = std::max(r.consistency_violation, b[m] - a[m]);
    for (std::size_t m = 1; m < n; ++m)
        r.monotone_violation = std::max({r.monotone_violation, a[m] - a[m - 1], b[m] - b[m - 1]});
    for (std::size_t lo = 0; lo < n; ++lo)
        for (std::size_t m = lo + 1; m < n; ++m)
            for (std::size_t hi = m + 1; hi < n; ++hi) {
                const double g = (k[hi] - k[m]) / (k[hi] - k[lo]);
                const double v = a[m] - (g * a[lo] + (1.0 - g) * a[hi]);
                if (v > r.convexity_violation) {
                    r.convexity_violation = v;
                    r.violating_triple = std::array<std::size_t, 3>{lo, m, hi};
                }
            }
    r.consistent = r.consistency_violation <= tol;
    r.monotone = r.monotone_violation <= tol;
    r.ask_convex = r.convexity_violation <= tol;
    if (r.ask_convex) r.violating_triple.reset();
    r.starts_at_forward = n > 0 && std::abs(a[0] - e.forward) <= tol && std::abs(b[0] - e.forward) <= tol;
    return r;
}

DiscreteMeasure ask_marginal(const EnhancedChain& e) {
    if (e.truncation < 1) throw InputError("degenerate market: every enhanced ask equals the forward");
    const auto M = static_cast<std::size_t>(e.truncation);
    std::vector<double> k(e.strikes.begin(), e.strikes.begin() + static_cast<long>(M) + 1);
    std::vector<double> c(e.enhanced_ask.begin(), e.enhanced_ask.begin() + static_cast<long>(M) + 1);
    c[0] = e.forward;
    // right derivatives on [K_m, K_{m+1}), closed by the synthetic strike K_{M+1}
    const double last = (c[M] - c[M - 1]) / (k[M] - k[M - 1]);
    k.push_back(k[M] - c[M] / last);
    c.push_back(0.0);
    // lower convex hull, absorbing rounding-level nonconvexity left by the LPs
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < k.size(); ++i) {
        while (hull.size() >= 2) {
            const std::size_t p = hull[hull.size() - 2], q = hull.back();
            const double cross = (k[q] - k[p]) * (c[i] - c[p]) - (c[q] - c[p]) * (k[i] - k[p]);
            if (cross > 0.0) break;
            hull.pop_back();
        }
        hull.push_back(i);
    }
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const std::size_t p = hull[h], q = hull[h + 1];
        for (std::size_t i = p + 1; i < q; ++i) {
            const double chord = c[p] + (c[q] - c[p]) * (k[i] - k[p]) / (k[q] - k[p]);
            if (c[i] - chord > 1e-8 * std::max(1.0, e.forward))
                throw InputError("ask marginal: enhanced asks are not convex at strike " + std::to_string(k[i]));
        }
    }
    std::vector<double> atoms, w;
    double left = -1.0;  // slope to the left of K_0 = 0 accounts for the atom at zero
    for (std::size_t h = 0; h < hull.size(); ++h) {
        const std::size_t p = hull[h];
        const double right = h + 1 < hull.size() ? (c[hull[h + 1]] - c[p]) / (k[hull[h + 1]] - k[p]) : 0.0;
        const double mass = right - left;
        if (mass < -1e-12) throw InputError("ask marginal: enhanced asks fall faster than the forward at zero");
        if (mass > 1e-14) {
            atoms.push_back(k[p]);
            w.push_back(mass);
        }
        left = right;
    }
    return DiscreteMeasure::canonical(std::move(atoms), std::move(w));
}

// ---------------------------------------------------------------- CSV

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> cell(const std::string& s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("chain CSV line " + std::to_string(line) + ": not a number: '" + s + "'");
    }
}

void opt(std::ostream& out, const std::optional<double>& v) {
    if (v) out << *v;
}

}  // namespace

QuoteChain read_chain_csv(std::istream& in, std::optional<double> forward) {
    static const std::vector<std::string> header{"strike", "put_bid", "put_ask", "call_bid", "call_ask"};
    QuoteChain c;
    std::optional<double> declared;
    bool seen_header = false;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            std::string body = trim(t.substr(1));
            if (body.rfind("forward", 0) == 0) {
                const auto at = body.find_first_of("=:");
                if (at == std::string::npos) throw InputError("chain CSV: malformed forward comment");
                declared = cell(trim(body.substr(at + 1)), no);
            }
            continue;
        }
        const auto cells = split(t);
        if (!seen_header) {
            if (cells != header)
                throw InputError("chain CSV: expected header strike,put_bid,put_ask,call_bid,call_ask");
            seen_header = true;
            continue;
        }
        if (cells.size() != 5) throw InputError("chain CSV line " + std::to_string(no) + ": expected 5 columns");
        const auto k = cell(cells[0], no);
        if (!k) throw InputError("chain CSV line " + std::to_string(no) + ": missing strike");
        c.strikes.push_back(*k);
        c.put_bid.push_back(cell(cells[1], no));
        c.put_ask.push_back(cell(cells[2], no));
        c.call_bid.push_back(cell(cells[3], no));
        c.call_ask.push_back(cell(cells[4], no));
    }
    if (!seen_header) throw InputError("chain CSV: missing header");
    if (forward) declared = forward;
    if (!declared) throw InputError("chain CSV: forward not given");
    c.forward = *declared;
    c.add_zero_strike();
    c.validate();
    return c;
}

void write_chain_csv(const QuoteChain& c, std::ostream& out) {
    out.precision(17);
    out << "# forward = " << c.forward << "\n";
    out << "strike,put_bid,put_ask,call_bid,call_ask\n";
    for (std::size_t m = 0; m < c.size(); ++m) {
        out << c.strikes[m] << ',';
        opt(out, c.put_bid[m]);
        out << ',';
        opt(out, c.put_ask[m]);
        out << ',';
        opt(out, c.call_bid[m]);
        out << ',';
        opt(out, c.call_ask[m]);
        out << '\n';
    }
}

void write_enhanced_csv(const EnhancedChain& e, std::ostream& out) {
    out.precision(17);
    out << "strike,bid,ask,enhanced_bid,enhanced_ask\n";
    // + 0.0 turns -0 into 0
    for (std::size_t m = 0; m < e.strikes.size(); ++m)
        out << e.strikes[m] << ',' << e.bid[m] + 0.0 << ',' << e.ask[m] + 0.0 << ',' << e.enhanced_bid[m] + 0.0
            << ',' << e.enhanced_ask[m] + 0.0 << '\n';
}

}  // namespace bamot
