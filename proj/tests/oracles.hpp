#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bamot/lp.hpp"

namespace oracle {

/// Minimum of a small LP by enumerating every basic solution: each choice of
/// n active constraints among the rows and finite bounds is solved as a square
/// system and kept when feasible. Returns nullopt when no vertex is feasible.
/// Exponential; only for a handful of variables. Assumes a bounded optimum
/// attained at a vertex.
inline std::optional<double> vertex_enumeration(const bamot::lp::LinearProgram& lp, double feas_tol = 1e-9) {
    using bamot::lp::Relation;
    const int n = static_cast<int>(lp.num_variables());
    std::vector<Eigen::VectorXd> a;
    std::vector<double> b;
    for (const auto& r : lp.rows) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        for (const auto& [j, c] : r.coefs) v[j] += c;
        a.push_back(v);
        b.push_back(r.rhs);
    }
    for (int j = 0; j < n; ++j) {
        for (double bound : {lp.lower[j], lp.upper[j]}) {
            if (!std::isfinite(bound)) continue;
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
            v[j] = 1.0;
            a.push_back(v);
            b.push_back(bound);
        }
    }
    const int k = static_cast<int>(a.size());
    std::optional<double> best;
    std::vector<int> pick(n);
    std::function<void(int, int)> rec = [&](int depth, int from) {
        if (depth == n) {
            Eigen::MatrixXd m(n, n);
            Eigen::VectorXd rhs(n);
            for (int r = 0; r < n; ++r) {
                m.row(r) = a[pick[r]].transpose();
                rhs[r] = b[pick[r]];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
            if (lu.rank() < n) return;
            const Eigen::VectorXd x = lu.solve(rhs);
            std::vector<double> v(x.data(), x.data() + n);
            if (lp.max_violation(v) > feas_tol) return;
            const double z = lp.objective(v);
            if (!best || z < *best) best = z;
            return;
        }
        for (int i = from; i < k; ++i) {
            pick[depth] = i;
            rec(depth + 1, i + 1);
        }
    };
    if (n == 0) return lp.offset;
    rec(0, 0);
    return best;
}

}  // namespace oracle

namespace oracle {

/// Textbook two-phase tableau simplex with Bland's rule for
///   min c.x  s.t.  A x = b, x >= 0,
/// kept deliberately separate from the library solver. Returns nullopt when
/// infeasible; sets *unbounded when the objective is unbounded below.
inline std::optional<double> tableau_simplex(Eigen::MatrixXd a, Eigen::VectorXd b, const Eigen::VectorXd& c,
                                             bool* unbounded = nullptr, double eps = 1e-11) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    for (int i = 0; i < m; ++i)
        if (b[i] < 0) {
            a.row(i) *= -1.0;
            b[i] = -b[i];
        }
    // columns: x (n), artificials (m), rhs
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
    t.block(0, 0, m, n) = a;
    t.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
    t.col(n + m).head(m) = b;
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    auto run = [&](const Eigen::VectorXd& cost, int ncols) -> int {
        // objective row holds reduced costs; last entry is -value
        t.row(m).setZero();
        t.row(m).head(ncols) = cost.head(ncols).transpose();
        for (int i = 0; i < m; ++i)
            if (cost[basis[i]] != 0.0) t.row(m) -= cost[basis[i]] * t.row(i);
        for (long guard = 0; guard < 10'000'000; ++guard) {
            int q = -1;
            for (int j = 0; j < ncols; ++j)
                if (t(m, j) < -eps) {
                    q = j;
                    break;
                }
            if (q < 0) return 0;
            int r = -1;
            double best = 0.0;
            for (int i = 0; i < m; ++i) {
                if (t(i, q) <= eps) continue;
                const double ratio = t(i, n + m) / t(i, q);
                if (r < 0 || ratio < best - 1e-14 || (ratio <= best + 1e-14 && basis[i] < basis[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r < 0) return 1;
            t.row(r) /= t(r, q);
            for (int i = 0; i <= m; ++i)
                if (i != r && t(i, q) != 0.0) t.row(i) -= t(i, q) * t.row(r);
            basis[r] = q;
        }
        return 2;
    };

    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + m);
    c1.tail(m).setOnes();
    run(c1, n + m);
    if (-t(m, n + m) > 1e-9) return std::nullopt;
    // pivot remaining artificials out where possible
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        for (int j = 0; j < n; ++j)
            if (std::abs(t(i, j)) > 1e-9) {
                t.row(i) /= t(i, j);
                for (int k = 0; k <= m; ++k)
                    if (k != i && t(k, j) != 0.0) t.row(k) -= t(k, j) * t.row(i);
                basis[i] = j;
                break;
            }
    }
    Eigen::VectorXd c2 = Eigen::VectorXd::Zero(n + m);
    c2.head(n) = c;
    // artificials left in the basis sit on redundant rows at zero
    const int res = run(c2, n);
    if (res == 1) {
        if (unbounded) *unbounded = true;
        return std::nullopt;
    }
    return -t(m, n + m);
}

}  // namespace oracle
