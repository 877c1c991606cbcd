#include "bamot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bamot/error.hpp"
#include "bamot/lp.hpp"

namespace bamot {

const char* to_string(DistanceMethod m) {
    switch (m) {
        case DistanceMethod::call_sup: return "call-sup";
        case DistanceMethod::lp_oracle: return "lp-oracle";
        case DistanceMethod::cdf_integral: return "cdf-integral";
    }
    return "?";
}

namespace {

void require_equal_barycenters(const Marginal& mu, const Marginal& nu) {
    const double scale = std::max({1.0, std::abs(mu.barycenter()), std::abs(nu.barycenter())});
    if (std::abs(mu.barycenter() - nu.barycenter()) > 1e-9 * scale)
        throw InputError("bid-ask distance: barycenters differ; the call-spread formula needs equal means, "
                         "use directed_distance_lp for discrete measures");
}

std::vector<double> union_atoms(const Marginal& mu, const Marginal& nu) {
    std::vector<double> pts(mu.atoms());
    pts.insert(pts.end(), nu.atoms().begin(), nu.atoms().end());
    return sorted_unique(std::move(pts), 0.0);
}

}  // namespace

DistanceReport directed_distance(const Marginal& mu, const Marginal& nu) {
    require_equal_barycenters(mu, nu);
    const auto gap = [&](double k) { return mu.call_price(k) - nu.call_price(k); };

    std::vector<double> pts;
    const bool discrete = mu.purely_atomic() && nu.purely_atomic();
    if (discrete) {
        // the gap is piecewise linear with kinks at the atoms
        pts = union_atoms(mu, nu);
    } else {
        const std::pair<double, Marginal> parts[] = {{0.5, mu}, {0.5, nu}};
        const Marginal mix = Marginal::combine(parts);
        for (int i = 0; i < 1024; ++i) pts.push_back(mix.quantile(1e-7 + (1.0 - 2e-7) * i / 1023.0));
        const auto atoms = union_atoms(mu, nu);
        pts.insert(pts.end(), atoms.begin(), atoms.end());
        pts.push_back(0.0);
        pts = sorted_unique(std::move(pts));
    }

    std::size_t best = 0;
    double best_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double g = gap(pts[i]);
        if (g > best_gap) {
            best_gap = g;
            best = i;
        }
    }
    double arg = pts[best];
    if (!discrete) {
        double a = pts[best > 0 ? best - 1 : 0];
        double b = pts[std::min(best + 1, pts.size() - 1)];
        const double r = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - r * (b - a);
        double x2 = a + r * (b - a);
        double f1 = gap(x1);
        double f2 = gap(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + r * (b - a);
                f2 = gap(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - r * (b - a);
                f1 = gap(x1);
            }
        }
        const double xm = 0.5 * (a + b);
        const double fm = gap(xm);
        if (fm > best_gap) {
            best_gap = fm;
            arg = xm;
        }
    }
    DistanceReport rep;
    rep.method = DistanceMethod::call_sup;
    if (best_gap > 0.0) {
        rep.value = 2.0 * best_gap;
        rep.argmax_strike = arg;
    }
    return rep;
}

DistanceReport bid_ask_distance(const Marginal& mu, const Marginal& nu) {
    const auto a = directed_distance(mu, nu);
    const auto b = directed_distance(nu, mu);
    DistanceReport rep;
    rep.value = 0.5 * (a.value + b.value);
    rep.argmax_strike = a.value >= b.value ? a.argmax_strike : b.argmax_strike;
    if (!rep.argmax_strike) rep.argmax_strike = b.argmax_strike;
    return rep;
}

DistanceReport directed_distance_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    const Marginal m(mu);
    const Marginal n(nu);
    const auto knots = union_atoms(m, n);

    // psi(x) = s x + sum_l rho_l (x - u_l)^+, slopes s in [-1, 1], s + sum rho <= 1
    lp::LinearProgram prog;
    const int s = prog.add_variable(-(m.barycenter() - n.barycenter()), -1.0, 1.0, "slope");
    std::vector<std::pair<int, double>> slope_row{{s, 1.0}};
    std::vector<int> rho;
    for (double u : knots) {
        const int v = prog.add_variable(-(m.call_price(u) - n.call_price(u)));
        rho.push_back(v);
        slope_row.emplace_back(v, 1.0);
    }
    prog.add_row(std::move(slope_row), lp::Relation::le, 1.0, "terminal_slope");
    const auto sol = lp::solve(prog);
    if (sol.status != lp::Status::optimal)
        throw NumericalError(std::string("directed_distance_lp: solver returned ") + lp::to_string(sol.status));

    DistanceReport rep;
    rep.method = DistanceMethod::lp_oracle;
    rep.value = std::max(0.0, -sol.value);
    double heaviest = 0.0;
    for (std::size_t l = 0; l < knots.size(); ++l) {
        if (sol.primal[rho[l]] > heaviest) {
            heaviest = sol.primal[rho[l]];
            rep.argmax_strike = knots[l];
        }
    }
    return rep;
}

double wasserstein1(const Marginal& mu, const Marginal& nu) {
    if (mu.purely_atomic() && nu.purely_atomic()) {
        const auto pts = union_atoms(mu, nu);
        double w = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            w += std::abs(mu.cdf(pts[i]) - nu.cdf(pts[i])) * (pts[i + 1] - pts[i]);
        return w;
    }
    std::vector<double> pts{0.0};
    for (const Marginal* m : {&mu, &nu}) {
        for (int i = 0; i <= 128; ++i) pts.push_back(m->quantile(1e-12 + (1.0 - 2e-12) * i / 128.0));
        pts.insert(pts.end(), m->atoms().begin(), m->atoms().end());
    }
    pts = sorted_unique(std::move(pts));
    const auto f = [&](double x) { return std::abs(mu.cdf(x) - nu.cdf(x)); };
    double w = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        w += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, pts[i], pts[i + 1], 8, 1e-12);
    // beyond the last point the remaining mass is below 1e-12; its contribution
    // is the call-price gap there
    const double top = pts.back();
    w += std::abs(mu.call_price(top) - nu.call_price(top));
    return w;
}

std::pair<DiscreteMeasure, DiscreteMeasure> counterexample_pair(int n) {
    if (n < 1) throw InputError("counterexample_pair: n must be >= 1");
    const double shift = 2.0 * n + 2.0;
    const double c = 1.0 / (2.0 * n + 1.0);
    std::vector<double> ma, mw, na, nw;
    for (int m = -n; m <= n; ++m) {
        ma.push_back(2.0 * m + shift);
        mw.push_back(c);
    }
    for (int k = -n; k <= n + 1; ++k) {
        na.push_back(2.0 * k - 1.0 + shift);
        nw.push_back(k == -n || k == n + 1 ? 0.5 * c : c);
    }
    return {DiscreteMeasure(std::move(ma), std::move(mw)), DiscreteMeasure(std::move(na), std::move(nw))};
}

}  // namespace bamot
