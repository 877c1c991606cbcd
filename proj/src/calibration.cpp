#include "bamot/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_multimin.h>

#include "bamot/black.hpp"
#include "bamot/error.hpp"

namespace bamot {

namespace {

constexpr double invalid = 1e30;
constexpr double min_vol_ratio = 1e-3;

using Decoder = std::function<std::optional<MixtureMarginal>(const std::vector<double>&)>;

struct Fit {
    const std::vector<CalibrationQuote>* quotes;
    double spot;
    Decoder decode;

    /// Scaled residuals, or nullopt for an invalid parameter vector.
    std::optional<std::vector<double>> residuals(const std::vector<double>& theta) const {
        const auto m = decode(theta);
        if (!m) return std::nullopt;
        std::vector<double> r;
        r.reserve(quotes->size());
        for (const auto& q : *quotes) r.push_back((otm_price(*m, q.strike, spot) - q.price) / *q.vega);
        return r;
    }
    double objective(const std::vector<double>& theta) const {
        const auto r = residuals(theta);
        if (!r) return invalid;
        double s = 0.0;
        for (double x : *r) s += x * x;
        return std::isfinite(s) ? s : invalid;
    }
};

double nm_f(const gsl_vector* v, void* params) {
    const auto* fit = static_cast<const Fit*>(params);
    return fit->objective(std::vector<double>(v->data, v->data + v->size));
}

std::vector<double> nelder_mead(const Fit& fit, std::vector<double> x, int max_iter) {
    const std::size_t n = x.size();
    gsl_multimin_function f{&nm_f, n, const_cast<Fit*>(&fit)};
    gsl_vector* x0 = gsl_vector_alloc(n);
    gsl_vector* step = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x0, i, x[i]);
        gsl_vector_set(step, i, 0.1);
    }
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &f, x0, step);
    for (int it = 0; it < max_iter; ++it) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-10) == GSL_SUCCESS) break;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = gsl_vector_get(s->x, i);
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x0);
    gsl_vector_free(step);
    return x;
}

int lm_f(const gsl_vector* v, void* params, gsl_vector* out) {
    const auto* fit = static_cast<const Fit*>(params);
    const auto r = fit->residuals(std::vector<double>(v->data, v->data + v->size));
    if (!r) {
        gsl_vector_set_all(out, 1e15);
        return GSL_SUCCESS;
    }
    for (std::size_t i = 0; i < r->size(); ++i) gsl_vector_set(out, i, (*r)[i]);
    return GSL_SUCCESS;
}

std::vector<double> levenberg_marquardt(const Fit& fit, std::vector<double> x) {
    const std::size_t n = x.size(), m = fit.quotes->size();
    if (m < n) return x;
    gsl_multifit_nlinear_fdf fdf{};
    fdf.f = &lm_f;
    fdf.df = nullptr;  // finite differences
    fdf.fvv = nullptr;
    fdf.n = m;
    fdf.p = n;
    fdf.params = const_cast<Fit*>(&fit);
    gsl_multifit_nlinear_parameters params = gsl_multifit_nlinear_default_parameters();
    gsl_multifit_nlinear_workspace* w =
        gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &params, m, n);
    gsl_vector_view xv = gsl_vector_view_array(x.data(), n);
    gsl_multifit_nlinear_init(&xv.vector, &fdf, w);
    int info = 0;
    gsl_multifit_nlinear_driver(500, 1e-14, 1e-14, 1e-14, nullptr, nullptr, &info, w);
    const gsl_vector* sol = gsl_multifit_nlinear_position(w);
    std::vector<double> out(sol->data, sol->data + n);
    gsl_multifit_nlinear_free(w);
    return fit.objective(out) < fit.objective(x) ? out : x;
}

struct Search {
    std::vector<double> best;
    double best_objective = std::numeric_limits<double>::infinity();
    int best_start = -1;
    std::vector<double> start_objectives;
};

Search multistart(const Fit& fit, const std::vector<std::vector<double>>& starts, const CalibrationOptions& o) {
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    Search s;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        s.start_objectives.push_back(fit.objective(starts[k]));
        auto x = nelder_mead(fit, starts[k], o.max_iterations);
        if (o.polish) x = levenberg_marquardt(fit, x);
        const double f = fit.objective(x);
        if (f < s.best_objective) {
            s.best_objective = f;
            s.best = x;
            s.best_start = static_cast<int>(k);
        }
    }
    gsl_set_error_handler(old);
    return s;
}

void check_problem(const CalibrationProblem& p) {
    if (p.quotes.empty()) throw InputError("calibration: no quotes");
    if (!(p.forward > 0.0) || !(p.spot > 0.0)) throw InputError("calibration: forward and spot must be positive");
    if (p.components < 1) throw InputError("calibration: need at least one component");
    for (const auto& q : p.quotes)
        if (!(q.strike > 0.0) || !(q.price > 0.0) || !std::isfinite(q.price))
            throw InputError("calibration: strikes and prices must be positive");
}

CalibrationResult finish(const Fit& fit, const Search& s) {
    if (s.best_start < 0 || !(s.best_objective < invalid))
        throw NumericalError("calibration: every start failed to produce a finite objective");
    CalibrationResult r{*fit.decode(s.best), s.best_objective, s.start_objectives, s.best_start, {}, {}};
    r.scaled_errors = *fit.residuals(s.best);
    return r;
}

}  // namespace

double otm_price(const MixtureMarginal& m, double strike, double spot) {
    double v = 0.0;
    const bool put = strike < spot;
    for (const auto& c : m.components())
        v += c.weight * (put ? black::put(c.mean, c.vol, strike) : black::call(c.mean, c.vol, strike));
    return v;
}

std::vector<CalibrationQuote> with_vegas(const CalibrationProblem& p) {
    std::vector<CalibrationQuote> out = p.quotes;
    const double f = p.forward;
    for (auto& q : out) {
        if (q.vega && *q.vega > 0.0) continue;
        // restate the quote as out-of-the-money relative to the forward
        const bool put = q.strike < p.spot;
        const double call = put ? q.price + f - q.strike : q.price;
        const double otm = q.strike < f ? call - f + q.strike : call;
        const double s = black::implied_total_vol(f, q.strike, otm);
        if (!(s > 0.0))
            throw InputError("calibration: no implied volatility for the quote at strike " + std::to_string(q.strike));
        q.vega = black::vega(f, s, q.strike);
        if (!(*q.vega > 0.0)) throw InputError("calibration: zero vega at strike " + std::to_string(q.strike));
    }
    return out;
}

CalibrationResult calibrate_ask(const CalibrationProblem& p, const CalibrationOptions& o) {
    check_problem(p);
    const auto quotes = with_vegas(p);
    const int J = p.components;
    const double F = p.forward;

    // single log-normal fit seeds every start
    Fit one{&quotes, p.spot, [F](const std::vector<double>& t) -> std::optional<MixtureMarginal> {
                return MixtureMarginal({{F, std::exp(t[0]), 1.0}}, F);
            }};
    const auto [ls0, f0] = boost::math::tools::brent_find_minima(
        [&](double ls) { return one.objective({ls}); }, std::log(1e-3), std::log(3.0), 40);
    (void)f0;

    Fit fit{&quotes, p.spot, [F, J](const std::vector<double>& t) -> std::optional<MixtureMarginal> {
                std::vector<LogNormalComponent> cs(J);
                double zmax = 0.0;
                for (int j = 0; j < J; ++j) zmax = std::max(zmax, j + 1 < J ? t[J - 1 + j] : 0.0);
                double total = 0.0;
                for (int j = 0; j < J; ++j) total += (cs[j].weight = std::exp((j + 1 < J ? t[J - 1 + j] : 0.0) - zmax));
                double partial = 0.0;
                for (int j = 0; j < J; ++j) {
                    cs[j].weight /= total;
                    cs[j].vol = std::exp(t[2 * J - 2 + j]);
                    if (j + 1 < J) {
                        cs[j].mean = F * std::exp(t[j]);
                        partial += cs[j].weight * cs[j].mean;
                    }
                    if (!std::isfinite(cs[j].vol) || cs[j].vol < 1e-6 || cs[j].vol > 10.0) return std::nullopt;
                }
                cs[J - 1].mean = (F - partial) / cs[J - 1].weight;
                if (!(cs[J - 1].mean > 1e-6 * F) || !std::isfinite(cs[J - 1].mean)) return std::nullopt;
                for (const auto& c : cs)
                    if (!(c.weight > 0.0)) return std::nullopt;
                try {
                    return MixtureMarginal(std::move(cs), std::nullopt);
                } catch (const InputError&) {
                    return std::nullopt;
                }
            }};

    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<std::vector<double>> starts;
    for (int k = 0; k < std::max(1, o.starts); ++k) {
        std::vector<double> t(3 * J - 2);
        for (int j = 0; j + 1 < J; ++j) t[j] = 0.1 * nd(rng);
        for (int j = 0; j + 1 < J; ++j) t[J - 1 + j] = 0.5 * nd(rng);
        for (int j = 0; j < J; ++j) t[2 * J - 2 + j] = ls0 + (J > 1 ? 0.5 * nd(rng) : 0.0);
        if (J > 1) {
            // keep the solved mean positive
            for (int tries = 0; tries < 100 && !fit.decode(t); ++tries)
                for (int j = 0; j + 1 < J; ++j) t[j] *= 0.5;
        }
        starts.push_back(std::move(t));
    }
    auto r = finish(fit, multistart(fit, starts, o));
    if (static_cast<int>(quotes.size()) < 3 * J - 1)
        r.warnings.push_back("fewer quotes than free parameters; the fit is not identifiable");
    return r;
}

CalibrationResult calibrate_bid_from_ask(const MixtureMarginal& ask, const CalibrationProblem& bid,
                                         const CalibrationOptions& o) {
    CalibrationProblem p = bid;
    p.components = static_cast<int>(ask.components().size());
    check_problem(p);
    const auto quotes = with_vegas(p);
    const auto base = ask.components();
    const double F = ask.forward();
    Fit fit{&quotes, p.spot, [base, F](const std::vector<double>& v) -> std::optional<MixtureMarginal> {
                auto cs = base;
                for (std::size_t j = 0; j < cs.size(); ++j) cs[j].vol *= std::clamp(v[j], min_vol_ratio, 1.0);
                return MixtureMarginal(std::move(cs), F);
            }};
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> starts;
    for (int k = 0; k < std::max(1, o.starts); ++k) {
        std::vector<double> v(base.size());
        for (auto& x : v) x = k == 0 ? 1.0 : 1.0 - 0.3 * u(rng);
        starts.push_back(std::move(v));
    }
    const auto s = multistart(fit, starts, o);
    auto r = finish(fit, s);
    bool all_bound = true;
    for (std::size_t j = 0; j < base.size(); ++j) {
        const double ratio = r.marginal.components()[j].vol / base[j].vol;
        if (ratio > min_vol_ratio * (1 + 1e-9) && ratio < 1.0 - 1e-9) all_bound = false;
    }
    if (all_bound) r.warnings.push_back("every bid vol sits on its bound; the spread may be inverted in the data");
    return r;
}

std::vector<CalibrationQuote> read_calibration_csv(std::istream& in) {
    std::vector<CalibrationQuote> out;
    std::string line;
    bool header = false;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        for (auto& x : cells) {
            x.erase(0, x.find_first_not_of(" \t"));
            x.erase(x.find_last_not_of(" \t") + 1);
        }
        if (!header) {
            if (cells != std::vector<std::string>{"strike", "otm_price", "vega"})
                throw InputError("calibration CSV: expected header strike,otm_price,vega");
            header = true;
            continue;
        }
        if (cells.size() != 3) throw InputError("calibration CSV line " + std::to_string(no) + ": expected 3 columns");
        try {
            CalibrationQuote q{std::stod(cells[0]), std::stod(cells[1]), std::nullopt};
            if (!cells[2].empty()) q.vega = std::stod(cells[2]);
            out.push_back(q);
        } catch (const std::exception&) {
            throw InputError("calibration CSV line " + std::to_string(no) + ": not a number");
        }
    }
    if (!header) throw InputError("calibration CSV: missing header");
    return out;
}

}  // namespace bamot
