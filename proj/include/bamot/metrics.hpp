#pragma once

#include <optional>
#include <utility>

#include "bamot/measures.hpp"

namespace bamot {

enum class DistanceMethod { call_sup, lp_oracle, cdf_integral };

const char* to_string(DistanceMethod m);

struct DistanceReport {
    double value = 0.0;
    std::optional<double> argmax_strike;
    DistanceMethod method = DistanceMethod::call_sup;
};

/// d->(mu, nu) = 2 sup_K (c_mu(K) - c_nu(K))^+ for measures with equal
/// barycenters: sup over 1-Lipschitz convex test functions of (mu - nu)(psi).
/// Grid scan (1024 quantile points plus atoms) refined by golden section.
/// Throws InputError when the barycenters differ; use directed_distance_lp.
DistanceReport directed_distance(const Marginal& mu, const Marginal& nu);

/// Symmetrisation (d->(mu, nu) + d->(nu, mu)) / 2.
DistanceReport bid_ask_distance(const Marginal& mu, const Marginal& nu);

/// d->(mu, nu) for discrete measures by optimising over piecewise-linear convex
/// test functions with knots at the union of atoms and slopes in [-1, 1].
/// Valid for unequal barycenters.
DistanceReport directed_distance_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Integral of |F_mu - F_nu|: exact for discrete pairs, Gauss-Kronrod otherwise.
double wasserstein1(const Marginal& mu, const Marginal& nu);

/// The pair (mu_n, nu_n): mu_n uniform on the 2n+1 even integers 2m, |m| <= n,
/// and nu_n = mu_n convolved with a Rademacher step, both shifted by 2n+2 onto
/// the positive half-line.
std::pair<DiscreteMeasure, DiscreteMeasure> counterexample_pair(int n);

}  // namespace bamot
