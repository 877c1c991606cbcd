#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bamot {

/// One log-normal component: mean `mean`, total log-volatility `vol` over
/// the maturity (not annualised), mixture weight `weight`.
struct LogNormalComponent {
    double mean = 0.0;
    double vol = 0.0;
    double weight = 0.0;
};

/// Finitely supported probability measure on [0, inf).
class DiscreteMeasure {
public:
    /// Atoms must be strictly increasing and nonnegative, weights nonnegative
    /// and summing to one within 1e-12. Throws InputError otherwise.
    DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights);

    static DiscreteMeasure dirac(double x);

    /// Sorts, merges atoms closer than `merge_tol`, drops zero weights and
    /// rescales the total mass to one. For assembling measures from LP output.
    static DiscreteMeasure canonical(std::vector<double> atoms, std::vector<double> weights,
                                     double merge_tol = 0.0);

    const std::vector<double>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    double call_price(double strike) const;
    double barycenter() const;

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
};

/// Log-normal mixture sum_j w_j LN(z_j, s_j) with declared forward.
class MixtureMarginal {
public:
    /// Validates weights (sum to one within 1e-12), means and vols (> 0) and,
    /// when given, the forward against the barycenter (1e-9 relative).
    explicit MixtureMarginal(std::vector<LogNormalComponent> components,
                             std::optional<double> forward = std::nullopt,
                             std::string maturity = {});

    /// Rescales the weights to sum to one first; for published parameter
    /// tables rounded to a few significant figures.
    static MixtureMarginal normalized(std::vector<LogNormalComponent> components,
                                      std::string maturity = {});

    /// Black-Scholes marginal at maturity `t` with zero rates: one component
    /// with mean `spot` and total vol `vol * sqrt(t)`.
    static MixtureMarginal black_scholes(double spot, double vol, double t);

    const std::vector<LogNormalComponent>& components() const noexcept { return components_; }
    double forward() const noexcept { return forward_; }
    const std::string& maturity() const noexcept { return maturity_; }

private:
    std::vector<LogNormalComponent> components_;
    double forward_ = 0.0;
    std::string maturity_;
};

/// Mass and first moment of a measure restricted to an interval.
struct PartialMoments {
    double mass = 0.0;
    double moment = 0.0;
};

/// General marginal: a log-normal mixture part plus an atomic part, total
/// mass one. Every query used by the pricing code goes through this type.
/// Immutable; cheap to copy relative to the work done with it.
class Marginal {
public:
    Marginal(const DiscreteMeasure& m);  // NOLINT(google-explicit-constructor)
    Marginal(const MixtureMarginal& m);  // NOLINT(google-explicit-constructor)

    /// Convex combination sum_k c_k m_k; coefficients must be nonnegative and
    /// sum to one.
    static Marginal combine(std::span<const std::pair<double, Marginal>> parts);

    /// E[(X - K)^+].
    double call_price(double strike) const;
    /// P(X <= x).
    double cdf(double x) const;
    /// Density of the absolutely continuous part.
    double density(double x) const;
    /// U(x) = E|X - x|.
    double potential(double x) const;
    double barycenter() const noexcept { return barycenter_; }
    /// Generalised inverse inf{x : F(x) >= p}.
    double quantile(double p) const;
    /// Mass and first moment on the half-open interval (a, b].
    PartialMoments partial_moments(double a, double b) const;

    bool atomless() const noexcept { return atoms_.empty(); }
    bool purely_atomic() const noexcept { return components_.empty(); }
    const std::vector<LogNormalComponent>& components() const noexcept { return components_; }
    const std::vector<double>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& atom_weights() const noexcept { return atom_weights_; }

    /// The atomic part as a DiscreteMeasure; throws unless purely atomic.
    DiscreteMeasure as_discrete() const;

private:
    Marginal() = default;
    void finalize();

    std::vector<LogNormalComponent> components_;
    std::vector<double> atoms_;
    std::vector<double> atom_weights_;
    double barycenter_ = 0.0;
};

/// (1 - gamma) * s + gamma * mid.
Marginal deform(const Marginal& s, const Marginal& mid, double gamma);

/// Strictly increasing nonnegative support grid with its construction recipe.
struct GridSpec {
    std::size_t points = 400;
    double q_lo = 1e-6;
    double q_hi = 1.0 - 1e-6;
    /// Relative extension of the last point beyond the q_hi quantile.
    double upper_extension = 0.3;
};

struct Grid {
    std::vector<double> points;
    GridSpec spec;

    /// Quantile grid of `m` (points at equally spaced probabilities in
    /// [q_lo, q_hi]), then 0, the extended upper end and `extra` merged in.
    static Grid quantile(const Marginal& m, const GridSpec& spec, std::span<const double> extra = {});
    /// Union of `points` with the given extra points, deduplicated.
    Grid merged(std::span<const double> extra) const;
    /// Adds `count` evenly spaced points on [centre - half_width, centre + half_width].
    Grid refined_near(double centre, double half_width, std::size_t count) const;
};

/// Sorted, deduplicated union; negative values dropped.
std::vector<double> sorted_unique(std::vector<double> xs, double rel_tol = 1e-14);

/// Call-price function of a probability measure on [0, inf): convex,
/// nonincreasing, equal to the forward at 0.
class CallCurve {
public:
    static CallCurve of(const Marginal& m);
    /// Piecewise-linear curve through (knots[i], values[i]); knots[0] must be 0.
    /// Beyond the last knot the curve follows max(0, last segment).
    static CallCurve piecewise_linear(std::vector<double> knots, std::vector<double> values);
    static CallCurve pointwise_max(std::vector<CallCurve> curves);

    double operator()(double strike) const;
    double forward() const;
    /// Strikes at which the curve should be sampled to resolve its shape.
    std::vector<double> reference_points(std::size_t quantile_points) const;
    /// Knots for piecewise-linear curves, empty otherwise.
    const std::vector<double>& knots() const;
    const std::vector<double>& values() const;

    /// Measure whose call curve this is (piecewise-linear curves only):
    /// atoms at the knots with masses equal to the slope increments.
    DiscreteMeasure to_measure() const;

    struct Impl;

private:
    explicit CallCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

struct ConvexOrderResult {
    bool holds = false;
    /// Strike of the largest violation (0 for a barycenter mismatch).
    double witness_strike = 0.0;
    /// Largest of |barycenter gap| and max_K (c_mu - c_nu); <= tol when holds.
    double max_violation = 0.0;
};

/// Strikes on which mu <=_c nu is checked: both measures' atoms, a
/// 512-point quantile grid of (mu + nu) / 2 and both measures' tail quantiles.
std::vector<double> convex_order_grid(const Marginal& mu, const Marginal& nu);

/// mu <=_c nu up to `tol`: equal barycenters and dominated call prices.
ConvexOrderResult convex_order_leq(const Marginal& mu, const Marginal& nu, double tol);

/// Default scale-free tolerance, 1e-8 times the forward.
double default_order_tol(const Marginal& m);

/// Greatest convex minorant of the pointwise minimum: the call curve of the
/// convex-order infimum. Throws InputError on forward mismatch (1e-9 rel).
CallCurve convex_meet(std::span<const CallCurve> curves);
/// Pointwise maximum: the convex-order supremum.
CallCurve convex_join(std::span<const CallCurve> curves);

/// A violated instance of bid_i <=_c ask_j for some i <= j.
struct TermStructureViolation {
    int bid_maturity = 0;
    int ask_maturity = 0;
    double strike = 0.0;
    double excess = 0.0;
};

/// Checks bid_i <=_c ask_j for all i <= j. Returns the worst violation, if any.
std::optional<TermStructureViolation> check_bid_ask_order(std::span<const Marginal> bids,
                                                          std::span<const Marginal> asks,
                                                          double tol);

/// Local concentration onto `grid`: cells split at midpoints between grid
/// points, each cell's mass placed at its conditional barycenter. The result is
/// below `m` in convex order with the same barycenter.
DiscreteMeasure discretize(const Marginal& m, const Grid& grid);

}  // namespace bamot
