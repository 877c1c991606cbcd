#include "bamot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "bamot/black.hpp"
#include "bamot/error.hpp"

namespace bamot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Components with a smaller total vol are treated as atoms at their mean.
constexpr double kDegenerateVol = 1e-8;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------- DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.empty()) throw InputError("discrete measure needs at least one atom");
    if (atoms_.size() != weights_.size())
        throw InputError("discrete measure: atoms and weights differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (!std::isfinite(atoms_[i]) || atoms_[i] < 0.0)
            throw InputError("discrete measure: atom " + fmt(atoms_[i]) + " is not a nonnegative real");
        if (i > 0 && !(atoms_[i] > atoms_[i - 1]))
            throw InputError("discrete measure: atoms must be strictly increasing");
        if (!std::isfinite(weights_[i]) || weights_[i] < 0.0)
            throw InputError("discrete measure: negative or non-finite weight");
        total += weights_[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InputError("discrete measure: weights sum to " + fmt(total) + ", not 1");
}

DiscreteMeasure DiscreteMeasure::dirac(double x) { return DiscreteMeasure({x}, {1.0}); }

DiscreteMeasure DiscreteMeasure::canonical(std::vector<double> atoms, std::vector<double> weights,
                                           double merge_tol) {
    if (atoms.size() != weights.size())
        throw InputError("discrete measure: atoms and weights differ in length");
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return atoms[a] < atoms[b]; });

    std::vector<double> xs;
    std::vector<double> ws;
    for (auto i : order) {
        const double w = weights[i];
        if (!(w > 0.0)) continue;
        const double x = std::max(atoms[i], 0.0);
        if (!xs.empty() && x - xs.back() <= merge_tol * std::max(1.0, std::abs(x))) {
            // merge, keeping the mean of the pair
            const double total = ws.back() + w;
            xs.back() = (xs.back() * ws.back() + x * w) / total;
            ws.back() = total;
        } else {
            xs.push_back(x);
            ws.push_back(w);
        }
    }
    if (xs.empty()) throw InputError("discrete measure: no positive weight");
    const double total = std::accumulate(ws.begin(), ws.end(), 0.0);
    for (auto& w : ws) w /= total;
    return DiscreteMeasure(std::move(xs), std::move(ws));
}

double DiscreteMeasure::call_price(double strike) const {
    double c = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i] > strike) c += weights_[i] * (atoms_[i] - strike);
    return c;
}

double DiscreteMeasure::barycenter() const {
    double m = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) m += weights_[i] * atoms_[i];
    return m;
}

// ---------------------------------------------------------------- MixtureMarginal

MixtureMarginal::MixtureMarginal(std::vector<LogNormalComponent> components, std::optional<double> forward,
                                 std::string maturity)
    : components_(std::move(components)), maturity_(std::move(maturity)) {
    if (components_.empty()) throw InputError("mixture needs at least one component");
    double total = 0.0;
    double bary = 0.0;
    for (const auto& c : components_) {
        if (!(c.mean > 0.0) || !std::isfinite(c.mean)) throw InputError("mixture: component means must be > 0");
        if (!(c.vol > 0.0) || !std::isfinite(c.vol)) throw InputError("mixture: component vols must be > 0");
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
            throw InputError("mixture: component weights must be >= 0");
        total += c.weight;
        bary += c.weight * c.mean;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InputError("mixture: weights sum to " + fmt(total) + ", not 1");
    if (forward) {
        if (std::abs(*forward - bary) > 1e-9 * std::abs(bary))
            throw InputError("mixture: barycenter " + fmt(bary) + " does not match forward " + fmt(*forward));
        forward_ = *forward;
    } else {
        forward_ = bary;
    }
}

MixtureMarginal MixtureMarginal::normalized(std::vector<LogNormalComponent> components, std::string maturity) {
    double total = 0.0;
    for (const auto& c : components) total += c.weight;
    if (!(total > 0.0)) throw InputError("mixture: weights must have positive sum");
    for (auto& c : components) c.weight /= total;
    return MixtureMarginal(std::move(components), std::nullopt, std::move(maturity));
}

MixtureMarginal MixtureMarginal::black_scholes(double spot, double vol, double t) {
    return MixtureMarginal({{spot, vol * std::sqrt(t), 1.0}});
}

// ---------------------------------------------------------------- Marginal

Marginal::Marginal(const DiscreteMeasure& m) : atoms_(m.atoms()), atom_weights_(m.weights()) { finalize(); }

Marginal::Marginal(const MixtureMarginal& m) {
    for (const auto& c : m.components()) {
        if (c.weight == 0.0) continue;
        if (c.vol < kDegenerateVol) {
            atoms_.push_back(c.mean);
            atom_weights_.push_back(c.weight);
        } else {
            components_.push_back(c);
        }
    }
    finalize();
}

void Marginal::finalize() {
    std::vector<std::size_t> order(atoms_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return atoms_[a] < atoms_[b]; });
    std::vector<double> xs;
    std::vector<double> ws;
    for (auto i : order) {
        if (!(atom_weights_[i] > 0.0)) continue;
        if (!xs.empty() && xs.back() == atoms_[i]) {
            ws.back() += atom_weights_[i];
        } else {
            xs.push_back(atoms_[i]);
            ws.push_back(atom_weights_[i]);
        }
    }
    atoms_ = std::move(xs);
    atom_weights_ = std::move(ws);

    double total = 0.0;
    barycenter_ = 0.0;
    for (const auto& c : components_) {
        total += c.weight;
        barycenter_ += c.weight * c.mean;
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        total += atom_weights_[i];
        barycenter_ += atom_weights_[i] * atoms_[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw InputError("marginal: total mass " + fmt(total) + ", not 1");
}

Marginal Marginal::combine(std::span<const std::pair<double, Marginal>> parts) {
    Marginal out;
    double total = 0.0;
    for (const auto& [coef, m] : parts) {
        if (!(coef >= 0.0)) throw InputError("combine: coefficients must be nonnegative");
        total += coef;
        if (coef == 0.0) continue;
        for (auto c : m.components_) {
            c.weight *= coef;
            out.components_.push_back(c);
        }
        for (std::size_t i = 0; i < m.atoms_.size(); ++i) {
            out.atoms_.push_back(m.atoms_[i]);
            out.atom_weights_.push_back(coef * m.atom_weights_[i]);
        }
    }
    if (std::abs(total - 1.0) > 1e-12) throw InputError("combine: coefficients must sum to 1");
    out.finalize();
    return out;
}

double Marginal::call_price(double strike) const {
    double c = 0.0;
    for (const auto& comp : components_) c += comp.weight * black::call(comp.mean, comp.vol, strike);
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i] > strike) c += atom_weights_[i] * (atoms_[i] - strike);
    return c;
}

double Marginal::cdf(double x) const {
    if (x < 0.0) return 0.0;
    double f = 0.0;
    for (const auto& comp : components_) f += comp.weight * black::cdf(comp.mean, comp.vol, x);
    for (std::size_t i = 0; i < atoms_.size() && atoms_[i] <= x; ++i) f += atom_weights_[i];
    return std::min(f, 1.0);
}

double Marginal::density(double x) const {
    double f = 0.0;
    for (const auto& comp : components_) f += comp.weight * black::density(comp.mean, comp.vol, x);
    return f;
}

double Marginal::potential(double x) const { return 2.0 * call_price(x) + x - barycenter_; }

double Marginal::quantile(double p) const {
    if (p <= 0.0) {
        return atoms_.empty() || components_.size() > 0 ? 0.0 : atoms_.front();
    }
    if (p >= 1.0) p = 1.0 - 1e-16;
    double hi = std::max(1.0, 2.0 * barycenter_);
    if (!atoms_.empty()) hi = std::max(hi, atoms_.back());
    for (int k = 0; k < 2000 && cdf(hi) < p; ++k) hi *= 2.0;
    double lo = 0.0;
    if (cdf(lo) >= p) return 0.0;
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) >= p) hi = mid;
        else lo = mid;
    }
    return hi;
}

PartialMoments Marginal::partial_moments(double a, double b) const {
    PartialMoments pm;
    if (!(b > a)) return pm;
    for (const auto& c : components_) {
        double mass;
        double moment;
        if (a >= c.mean) {
            const double sb = std::isinf(b) ? 0.0 : black::survival(c.mean, c.vol, b);
            mass = black::survival(c.mean, c.vol, a) - sb;
        } else {
            const double fb = std::isinf(b) ? 1.0 : black::cdf(c.mean, c.vol, b);
            mass = fb - black::cdf(c.mean, c.vol, a);
        }
        if (!std::isinf(b) && b <= c.mean) {
            moment = black::lower_partial_mean(c.mean, c.vol, b) - black::lower_partial_mean(c.mean, c.vol, a);
        } else {
            const double ub = std::isinf(b) ? 0.0 : black::upper_partial_mean(c.mean, c.vol, b);
            moment = black::upper_partial_mean(c.mean, c.vol, a) - ub;
        }
        pm.mass += c.weight * std::max(mass, 0.0);
        pm.moment += c.weight * std::max(moment, 0.0);
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (atoms_[i] > a && atoms_[i] <= b) {
            pm.mass += atom_weights_[i];
            pm.moment += atom_weights_[i] * atoms_[i];
        }
    }
    return pm;
}

DiscreteMeasure Marginal::as_discrete() const {
    if (!components_.empty()) throw InputError("marginal has a continuous part; not a discrete measure");
    return DiscreteMeasure(atoms_, atom_weights_);
}

Marginal deform(const Marginal& s, const Marginal& mid, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InputError("deform: gamma must lie in [0, 1]");
    const double scale = std::max(1.0, std::abs(mid.barycenter()));
    if (std::abs(s.barycenter() - mid.barycenter()) > 1e-9 * scale)
        throw InputError("deform: barycenters differ");
    if (gamma == 0.0) return s;
    if (gamma == 1.0) return mid;
    const std::pair<double, Marginal> parts[] = {{1.0 - gamma, s}, {gamma, mid}};
    return Marginal::combine(parts);
}

// ---------------------------------------------------------------- Grid

std::vector<double> sorted_unique(std::vector<double> xs, double rel_tol) {
    std::erase_if(xs, [](double x) { return !(x >= 0.0) || !std::isfinite(x); });
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        if (!out.empty() && x - out.back() <= rel_tol * std::max(1.0, x)) continue;
        out.push_back(x);
    }
    return out;
}

namespace {

std::vector<double> quantile_points(const Marginal& m, std::size_t n, double q_lo, double q_hi) {
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(m.quantile(0.5 * (q_lo + q_hi)));
        return out;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double p = q_lo + (q_hi - q_lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        out.push_back(m.quantile(p));
    }
    return out;
}

}  // namespace

Grid Grid::quantile(const Marginal& m, const GridSpec& spec, std::span<const double> extra) {
    if (spec.points < 2) throw InputError("grid: need at least two points");
    if (!(spec.q_lo > 0.0 && spec.q_lo < 0.5 && spec.q_hi > 0.5 && spec.q_hi < 1.0))
        throw InputError("grid: truncation quantiles must lie in (0, 0.5) and (0.5, 1)");
    auto pts = quantile_points(m, spec.points, spec.q_lo, spec.q_hi);
    const double top = pts.back();
    pts.push_back(0.0);
    pts.push_back(top * (1.0 + spec.upper_extension));
    for (double a : m.atoms()) pts.push_back(a);
    pts.insert(pts.end(), extra.begin(), extra.end());
    return Grid{sorted_unique(std::move(pts)), spec};
}

Grid Grid::merged(std::span<const double> extra) const {
    auto pts = points;
    pts.insert(pts.end(), extra.begin(), extra.end());
    return Grid{sorted_unique(std::move(pts)), spec};
}

Grid Grid::refined_near(double centre, double half_width, std::size_t count) const {
    std::vector<double> extra;
    if (count >= 2) {
        for (std::size_t k = 0; k < count; ++k)
            extra.push_back(centre - half_width +
                            2.0 * half_width * static_cast<double>(k) / static_cast<double>(count - 1));
    }
    return merged(extra);
}

// ---------------------------------------------------------------- CallCurve

struct CallCurve::Impl {
    virtual ~Impl() = default;
    virtual double eval(double k) const = 0;
    virtual double forward() const = 0;
    virtual std::vector<double> reference_points(std::size_t n) const = 0;
};

namespace {

const std::vector<double> kEmpty;

struct MarginalCurve final : CallCurve::Impl {
    explicit MarginalCurve(Marginal m) : m(std::move(m)) {}
    double eval(double k) const override { return m.call_price(k); }
    double forward() const override { return m.barycenter(); }
    std::vector<double> reference_points(std::size_t n) const override {
        auto pts = quantile_points(m, n, 1e-6, 1.0 - 1e-6);
        pts.insert(pts.end(), m.atoms().begin(), m.atoms().end());
        pts.push_back(0.0);
        return pts;
    }
    Marginal m;
};

struct LinearCurve final : CallCurve::Impl {
    LinearCurve(std::vector<double> k, std::vector<double> v) : knots(std::move(k)), values(std::move(v)) {
        const std::size_t n = knots.size();
        tail_slope = (values[n - 1] - values[n - 2]) / (knots[n - 1] - knots[n - 2]);
    }
    double eval(double k) const override {
        if (k <= 0.0) return values.front() - k;
        if (k >= knots.back()) return std::max(0.0, values.back() + tail_slope * (k - knots.back()));
        const auto it = std::upper_bound(knots.begin(), knots.end(), k);
        const std::size_t i = static_cast<std::size_t>(it - knots.begin());
        const double t = (k - knots[i - 1]) / (knots[i] - knots[i - 1]);
        return values[i - 1] + t * (values[i] - values[i - 1]);
    }
    double forward() const override { return values.front(); }
    std::vector<double> reference_points(std::size_t) const override {
        auto pts = knots;
        if (tail_slope < 0.0 && values.back() > 0.0) pts.push_back(knots.back() - values.back() / tail_slope);
        return pts;
    }
    std::vector<double> knots;
    std::vector<double> values;
    double tail_slope = 0.0;
};

struct MaxCurve final : CallCurve::Impl {
    explicit MaxCurve(std::vector<CallCurve> parts) : parts(std::move(parts)) {}
    double eval(double k) const override {
        double v = -kInf;
        for (const auto& p : parts) v = std::max(v, p(k));
        return v;
    }
    double forward() const override { return parts.front().forward(); }
    std::vector<double> reference_points(std::size_t n) const override {
        std::vector<double> pts;
        for (const auto& p : parts) {
            auto q = p.reference_points(n);
            pts.insert(pts.end(), q.begin(), q.end());
        }
        return pts;
    }
    std::vector<CallCurve> parts;
};

void require_common_forward(std::span<const CallCurve> curves) {
    if (curves.empty()) throw InputError("envelope of an empty set of call curves");
    const double f0 = curves.front().forward();
    for (const auto& c : curves)
        if (std::abs(c.forward() - f0) > 1e-9 * std::max(1.0, std::abs(f0)))
            throw InputError("envelope: call curves have different forwards");
}

}  // namespace

CallCurve CallCurve::of(const Marginal& m) { return CallCurve(std::make_shared<MarginalCurve>(m)); }

CallCurve CallCurve::piecewise_linear(std::vector<double> knots, std::vector<double> values) {
    if (knots.size() < 2 || knots.size() != values.size())
        throw InputError("piecewise-linear call curve needs >= 2 matching knots and values");
    if (knots.front() != 0.0) throw InputError("piecewise-linear call curve must start at strike 0");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1])) throw InputError("call curve knots must be strictly increasing");
    return CallCurve(std::make_shared<LinearCurve>(std::move(knots), std::move(values)));
}

CallCurve CallCurve::pointwise_max(std::vector<CallCurve> curves) {
    require_common_forward(curves);
    return CallCurve(std::make_shared<MaxCurve>(std::move(curves)));
}

double CallCurve::operator()(double strike) const { return impl_->eval(strike); }
double CallCurve::forward() const { return impl_->forward(); }
std::vector<double> CallCurve::reference_points(std::size_t n) const { return impl_->reference_points(n); }

const std::vector<double>& CallCurve::knots() const {
    const auto* lin = dynamic_cast<const LinearCurve*>(impl_.get());
    return lin ? lin->knots : kEmpty;
}

const std::vector<double>& CallCurve::values() const {
    const auto* lin = dynamic_cast<const LinearCurve*>(impl_.get());
    return lin ? lin->values : kEmpty;
}

DiscreteMeasure CallCurve::to_measure() const {
    const auto* lin = dynamic_cast<const LinearCurve*>(impl_.get());
    if (!lin) throw InputError("to_measure: only piecewise-linear call curves carry an explicit measure");
    const auto& k = lin->knots;
    const auto& v = lin->values;
    const std::size_t n = k.size();

    std::vector<double> atoms(k.begin(), k.end());
    std::vector<double> slopes(n);  // slopes[i]: right slope at knot i
    for (std::size_t i = 0; i + 1 < n; ++i) slopes[i] = (v[i + 1] - v[i]) / (k[i + 1] - k[i]);
    double end_slope = lin->tail_slope;
    if (v[n - 1] > 0.0 && end_slope < 0.0) {
        atoms.push_back(k[n - 1] - v[n - 1] / end_slope);
        slopes[n - 1] = end_slope;
        slopes.push_back(0.0);
    } else {
        slopes[n - 1] = 0.0;
    }
    const double scale = std::max(1.0, std::abs(v[0]));
    std::vector<double> weights(atoms.size());
    double prev = -1.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        double w = slopes[i] - prev;
        if (w < -1e-12 * scale) throw InputError("to_measure: call curve is not convex at strike " + fmt(atoms[i]));
        weights[i] = std::max(w, 0.0);
        prev = slopes[i];
    }
    return DiscreteMeasure::canonical(std::move(atoms), std::move(weights));
}

// ---------------------------------------------------------------- convex order

double default_order_tol(const Marginal& m) { return 1e-8 * std::max(1.0, std::abs(m.barycenter())); }

std::vector<double> convex_order_grid(const Marginal& mu, const Marginal& nu) {
    const std::pair<double, Marginal> parts[] = {{0.5, mu}, {0.5, nu}};
    const Marginal mix = Marginal::combine(parts);
    auto pts = quantile_points(mix, 512, 1e-6, 1.0 - 1e-6);
    for (const Marginal* m : {&mu, &nu}) {
        pts.insert(pts.end(), m->atoms().begin(), m->atoms().end());
        pts.push_back(m->quantile(1e-6));
        pts.push_back(m->quantile(1.0 - 1e-6));
    }
    pts.push_back(0.0);
    return sorted_unique(std::move(pts));
}

ConvexOrderResult convex_order_leq(const Marginal& mu, const Marginal& nu, double tol) {
    if (!(tol > 0.0)) throw InputError("convex_order_leq: tolerance must be positive");
    const double bary_gap = std::abs(mu.barycenter() - nu.barycenter());
    if (bary_gap > tol) return {false, 0.0, bary_gap};
    ConvexOrderResult r{true, 0.0, bary_gap};
    double worst = -kInf;
    for (double k : convex_order_grid(mu, nu)) {
        const double gap = mu.call_price(k) - nu.call_price(k);
        if (gap > worst) {
            worst = gap;
            r.witness_strike = k;
        }
    }
    r.max_violation = std::max(bary_gap, worst);
    r.holds = worst <= tol;
    return r;
}

CallCurve convex_meet(std::span<const CallCurve> curves) {
    require_common_forward(curves);
    if (curves.size() == 1) return curves.front();

    std::vector<double> xs{0.0};
    for (const auto& c : curves) {
        auto q = c.reference_points(2048);
        xs.insert(xs.end(), q.begin(), q.end());
    }
    xs = sorted_unique(std::move(xs));
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = kInf;
        for (const auto& c : curves) v = std::min(v, c(xs[i]));
        ys[i] = v;
    }
    ys[0] = curves.front().forward();

    // lower hull, monotone chain
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        while (hull.size() >= 2) {
            const auto a = hull[hull.size() - 2];
            const auto b = hull.back();
            const double cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if (cross <= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    std::vector<double> hk;
    std::vector<double> hv;
    for (auto i : hull) {
        hk.push_back(xs[i]);
        hv.push_back(ys[i]);
    }
    if (hk.size() < 2) {
        hk.push_back(hk.back() + 1.0);
        hv.push_back(hv.back());
    }
    return CallCurve::piecewise_linear(std::move(hk), std::move(hv));
}

CallCurve convex_join(std::span<const CallCurve> curves) {
    require_common_forward(curves);
    if (curves.size() == 1) return curves.front();
    return CallCurve::pointwise_max(std::vector<CallCurve>(curves.begin(), curves.end()));
}

std::optional<TermStructureViolation> check_bid_ask_order(std::span<const Marginal> bids,
                                                          std::span<const Marginal> asks, double tol) {
    if (bids.size() != asks.size()) throw InputError("bid and ask marginals differ in number of maturities");
    std::optional<TermStructureViolation> worst;
    for (std::size_t i = 0; i < bids.size(); ++i) {
        for (std::size_t j = i; j < asks.size(); ++j) {
            const auto r = convex_order_leq(bids[i], asks[j], tol);
            if (!r.holds && (!worst || r.max_violation > worst->excess))
                worst = TermStructureViolation{static_cast<int>(i), static_cast<int>(j), r.witness_strike,
                                               r.max_violation};
        }
    }
    return worst;
}

// ---------------------------------------------------------------- discretize

DiscreteMeasure discretize(const Marginal& m, const Grid& grid) {
    const auto& g = grid.points;
    if (g.empty()) throw InputError("discretize: empty grid");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) throw InputError("discretize: grid must be strictly increasing");
    // Purely atomic inputs are partitioned exactly whatever the grid; the
    // coverage requirement only guards the truncation error of the continuous part.
    if (!m.purely_atomic()) {
        const double lo = m.quantile(1e-6);
        const double hi = m.quantile(1.0 - 1e-6);
        const double slack = 1e-12 * std::max(1.0, hi);
        if (g.front() > lo + slack || g.back() < hi - slack)
            throw InputError("discretize: grid does not span the [1e-6, 1 - 1e-6] quantile range");
    }

    std::vector<double> masses;
    std::vector<double> moments;
    masses.reserve(g.size());
    moments.reserve(g.size());
    double left = -1.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double right = i + 1 < g.size() ? 0.5 * (g[i] + g[i + 1]) : kInf;
        const auto pm = m.partial_moments(left, right);
        masses.push_back(pm.mass);
        moments.push_back(pm.moment);
        left = right;
    }
    // Cells below 1e-14 in mass are folded into the next cell (the last into
    // the previous one), which keeps total mass and barycenter unchanged.
    std::vector<double> atoms;
    std::vector<double> weights;
    double carry_mass = 0.0;
    double carry_moment = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double mass = masses[i] + carry_mass;
        const double moment = moments[i] + carry_moment;
        if (mass < 1e-14) {
            carry_mass = mass;
            carry_moment = moment;
            continue;
        }
        carry_mass = carry_moment = 0.0;
        atoms.push_back(moment / mass);
        weights.push_back(mass);
    }
    if (carry_mass > 0.0 && !weights.empty()) {
        const double mass = weights.back() + carry_mass;
        atoms.back() = (atoms.back() * weights.back() + carry_moment) / mass;
        weights.back() = mass;
    }
    return DiscreteMeasure::canonical(std::move(atoms), std::move(weights), 1e-15);
}

}  // namespace bamot
