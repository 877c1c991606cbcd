#include "bamot/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <Eigen/Dense>

#include "bamot/error.hpp"

namespace bamot::lp {

// ---------------------------------------------------------------- model

int LinearProgram::add_variable(double c, double lo, double hi, std::string name) {
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(hi);
    names.push_back(std::move(name));
    return static_cast<int>(cost.size()) - 1;
}

int LinearProgram::add_row(std::vector<std::pair<int, double>> coefs, Relation relation, double rhs,
                           std::string name) {
    rows.push_back(Row{std::move(coefs), relation, rhs, std::move(name)});
    return static_cast<int>(rows.size()) - 1;
}

void LinearProgram::validate() const {
    const auto n = static_cast<int>(cost.size());
    if (lower.size() != cost.size() || upper.size() != cost.size())
        throw InputError("linear program: bound vectors do not match the number of variables");
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(cost[j])) throw InputError("linear program: non-finite cost");
        if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] || lower[j] == inf ||
            upper[j] == -inf)
            throw InputError("linear program: invalid bounds on variable " + std::to_string(j));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!std::isfinite(rows[i].rhs)) throw InputError("linear program: non-finite rhs in row " + std::to_string(i));
        for (const auto& [j, a] : rows[i].coefs) {
            if (j < 0 || j >= n) throw InputError("linear program: column index out of range in row " + std::to_string(i));
            if (!std::isfinite(a)) throw InputError("linear program: non-finite coefficient in row " + std::to_string(i));
        }
    }
}

double LinearProgram::objective(const std::vector<double>& v) const {
    double z = offset;
    for (std::size_t j = 0; j < cost.size(); ++j) z += cost[j] * v[j];
    return z;
}

double LinearProgram::max_violation(const std::vector<double>& v, int* worst_row) const {
    double worst = 0.0;
    int where = -1;
    for (std::size_t j = 0; j < cost.size(); ++j) {
        const double scale = std::max(1.0, std::abs(v[j]));
        const double e = std::max(lower[j] - v[j], v[j] - upper[j]) / scale;
        if (e > worst) {
            worst = e;
            where = -1;
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        double act = 0.0;
        double mag = std::max(1.0, std::abs(r.rhs));
        for (const auto& [j, a] : r.coefs) {
            act += a * v[j];
            mag = std::max(mag, std::abs(a * v[j]));
        }
        double e = 0.0;
        switch (r.relation) {
            case Relation::ge: e = r.rhs - act; break;
            case Relation::le: e = act - r.rhs; break;
            case Relation::eq: e = std::abs(act - r.rhs); break;
        }
        e /= mag;
        if (e > worst) {
            worst = e;
            where = static_cast<int>(i);
        }
    }
    if (worst_row) *worst_row = where;
    return worst;
}

const char* to_string(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        case Status::audit_failure: return "audit_failure";
    }
    return "?";
}

// ---------------------------------------------------------------- simplex engine

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double pow2_round(double x) { return std::exp2(std::round(std::log2(x))); }

// Revised simplex on  A x - w = 0,  lo <= (x, w, a) <= hi, where w are the
// row logicals carrying the row bounds and a are phase-one artificials.
class Engine {
public:
    Engine(const LinearProgram& lp, const SimplexOptions& opt) : opt_(opt) {
        m_ = static_cast<int>(lp.num_rows());
        n_ = static_cast<int>(lp.num_variables());
        build_scaled(lp);
    }

    Solution run(const LinearProgram& lp);

private:
    void build_scaled(const LinearProgram& lp);
    int total() const { return n_ + m_ + static_cast<int>(art_row_.size()); }

    void add_column(int j, double f, VectorXd& out) const;
    double dot_column(int j, const VectorXd& y) const;
    void refactor();
    void pivot_update(int r, const VectorXd& alpha);
    // Returns 0 optimal, 1 unbounded.
    int iterate(const std::vector<double>& cost);
    void drive_out_artificials();

    SimplexOptions opt_;
    int m_ = 0;
    int n_ = 0;
    // scaled structural matrix, column-compressed
    std::vector<int> start_;
    std::vector<int> index_;
    std::vector<double> value_;
    std::vector<double> row_scale_;
    std::vector<double> col_scale_;
    double cost_scale_ = 1.0;
    std::vector<double> cost_;  // scaled structural costs
    std::vector<double> lo_;
    std::vector<double> hi_;
    std::vector<double> x_;
    std::vector<int> art_row_;
    std::vector<double> art_sign_;
    std::vector<int> basis_;
    std::vector<int> pos_;
    MatrixXd binv_;
    VectorXd y_;
    long iterations_ = 0;
    int since_refactor_ = 0;
};

void Engine::build_scaled(const LinearProgram& lp) {
    // column-compressed copy
    std::vector<int> count(n_ + 1, 0);
    for (const auto& r : lp.rows)
        for (const auto& [j, a] : r.coefs)
            if (a != 0.0) ++count[j + 1];
    for (int j = 0; j < n_; ++j) count[j + 1] += count[j];
    start_ = count;
    index_.assign(start_[n_], 0);
    value_.assign(start_[n_], 0.0);
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (int i = 0; i < m_; ++i)
        for (const auto& [j, a] : lp.rows[i].coefs)
            if (a != 0.0) {
                index_[fill[j]] = i;
                value_[fill[j]] = a;
                ++fill[j];
            }

    // geometric scaling, a few alternating passes, powers of two
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(n_, 1.0);
    for (int pass = 0; pass < 6; ++pass) {
        std::vector<double> rmin(m_, inf), rmax(m_, 0.0);
        for (int j = 0; j < n_; ++j)
            for (int k = start_[j]; k < start_[j + 1]; ++k) {
                const double a = std::abs(value_[k]) * col_scale_[j];
                rmin[index_[k]] = std::min(rmin[index_[k]], a);
                rmax[index_[k]] = std::max(rmax[index_[k]], a);
            }
        for (int i = 0; i < m_; ++i)
            if (rmax[i] > 0.0) row_scale_[i] = pow2_round(1.0 / std::sqrt(rmin[i] * rmax[i]));
        for (int j = 0; j < n_; ++j) {
            double cmin = inf, cmax = 0.0;
            for (int k = start_[j]; k < start_[j + 1]; ++k) {
                const double a = std::abs(value_[k]) * row_scale_[index_[k]];
                cmin = std::min(cmin, a);
                cmax = std::max(cmax, a);
            }
            if (cmax > 0.0) col_scale_[j] = pow2_round(1.0 / std::sqrt(cmin * cmax));
        }
    }
    for (int j = 0; j < n_; ++j)
        for (int k = start_[j]; k < start_[j + 1]; ++k) value_[k] *= row_scale_[index_[k]] * col_scale_[j];

    cost_.resize(n_);
    double cmax = 0.0;
    for (int j = 0; j < n_; ++j) {
        cost_[j] = lp.cost[j] * col_scale_[j];
        cmax = std::max(cmax, std::abs(cost_[j]));
    }
    cost_scale_ = cmax > 0.0 ? pow2_round(cmax) : 1.0;
    for (auto& c : cost_) c /= cost_scale_;

    lo_.resize(n_ + m_);
    hi_.resize(n_ + m_);
    for (int j = 0; j < n_; ++j) {
        lo_[j] = lp.lower[j] / col_scale_[j];
        hi_[j] = lp.upper[j] / col_scale_[j];
    }
    for (int i = 0; i < m_; ++i) {
        const auto& r = lp.rows[i];
        const double b = r.rhs * row_scale_[i];
        lo_[n_ + i] = r.relation == Relation::le ? -inf : b;
        hi_[n_ + i] = r.relation == Relation::ge ? inf : b;
    }
}

void Engine::add_column(int j, double f, VectorXd& out) const {
    if (j < n_) {
        for (int k = start_[j]; k < start_[j + 1]; ++k) out[index_[k]] += f * value_[k];
    } else if (j < n_ + m_) {
        out[j - n_] -= f;
    } else {
        const int a = j - n_ - m_;
        out[art_row_[a]] += f * art_sign_[a];
    }
}

double Engine::dot_column(int j, const VectorXd& y) const {
    if (j < n_) {
        double s = 0.0;
        for (int k = start_[j]; k < start_[j + 1]; ++k) s += y[index_[k]] * value_[k];
        return s;
    }
    if (j < n_ + m_) return -y[j - n_];
    const int a = j - n_ - m_;
    return art_sign_[a] * y[art_row_[a]];
}

void Engine::refactor() {
    MatrixXd b = MatrixXd::Zero(m_, m_);
    for (int r = 0; r < m_; ++r) {
        VectorXd col = VectorXd::Zero(m_);
        add_column(basis_[r], 1.0, col);
        b.col(r) = col;
    }
    Eigen::PartialPivLU<MatrixXd> lu(b);
    const auto d = lu.matrixLU().diagonal().cwiseAbs();
    if (m_ > 0 && d.minCoeff() < 1e-11 * std::max(1.0, d.maxCoeff()))
        throw NumericalError("simplex: basis matrix became singular");
    binv_ = lu.inverse();

    // recompute basic values from the nonbasic ones
    VectorXd rhs = VectorXd::Zero(m_);
    const int nt = total();
    for (int j = 0; j < nt; ++j)
        if (pos_[j] < 0 && x_[j] != 0.0) add_column(j, -x_[j], rhs);
    const VectorXd xb = binv_ * rhs;
    for (int r = 0; r < m_; ++r) x_[basis_[r]] = xb[r];
    since_refactor_ = 0;
}

void Engine::pivot_update(int r, const VectorXd& alpha) {
    const double p = alpha[r];
    const Eigen::RowVectorXd row = binv_.row(r) / p;
    VectorXd a = alpha;
    a[r] = 0.0;
    binv_.noalias() -= a * row;
    binv_.row(r) = row;
    ++since_refactor_;
}

int Engine::iterate(const std::vector<double>& cost) {
    const double tol = opt_.tolerance;
    const double ftol = opt_.tolerance;
    const double ptol = 1e-7;
    int degenerate = 0;
    bool bland = false;
    const int nt = total();
    VectorXd cb(m_);
    VectorXd alpha(m_);

    for (;;) {
        if (iterations_ >= opt_.max_iterations)
            throw NumericalError("simplex: iteration limit reached (possible cycling)");
        if (since_refactor_ >= opt_.refactor_every) refactor();

        for (int r = 0; r < m_; ++r) cb[r] = cost[basis_[r]];
        y_.noalias() = binv_.transpose() * cb;

        // pricing
        int q = -1;
        double best = 0.0;
        int dir = 0;
        for (int j = 0; j < nt; ++j) {
            if (pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
            const double d = cost[j] - dot_column(j, y_);
            int dj = 0;
            if (d < -tol && x_[j] < hi_[j]) dj = 1;
            else if (d > tol && x_[j] > lo_[j]) dj = -1;
            if (dj == 0) continue;
            if (bland) {
                q = j;
                dir = dj;
                break;
            }
            if (std::abs(d) > best) {
                best = std::abs(d);
                q = j;
                dir = dj;
            }
        }
        if (q < 0) return 0;

        alpha.setZero();
        for (int k = 0; q < n_ && k < start_[q + 1] - start_[q]; ++k)
            alpha.noalias() += value_[start_[q] + k] * binv_.col(index_[start_[q] + k]);
        if (q >= n_) {
            VectorXd e = VectorXd::Zero(m_);
            add_column(q, 1.0, e);
            alpha.noalias() = binv_ * e;
        }

        // ratio test; the basic variable in row r moves by -dir * alpha[r] * t
        const double range = hi_[q] - lo_[q];
        int leave = -1;
        double step = inf;
        if (!bland) {
            double tmax = range;
            for (int r = 0; r < m_; ++r) {
                const double a = dir * alpha[r];
                const int b = basis_[r];
                if (a > ptol && lo_[b] > -inf) tmax = std::min(tmax, (x_[b] - lo_[b] + ftol) / a);
                else if (a < -ptol && hi_[b] < inf) tmax = std::min(tmax, (hi_[b] - x_[b] + ftol) / -a);
            }
            double big = 0.0;
            for (int r = 0; r < m_; ++r) {
                const double a = dir * alpha[r];
                const int b = basis_[r];
                double t = inf;
                if (a > ptol && lo_[b] > -inf) t = (x_[b] - lo_[b]) / a;
                else if (a < -ptol && hi_[b] < inf) t = (hi_[b] - x_[b]) / -a;
                if (t <= tmax && std::abs(a) > big) {
                    big = std::abs(a);
                    leave = r;
                    step = std::max(t, 0.0);
                }
            }
        } else {
            int leave_var = -1;
            for (int r = 0; r < m_; ++r) {
                const double a = dir * alpha[r];
                const int b = basis_[r];
                double t = inf;
                if (a > ptol && lo_[b] > -inf) t = std::max((x_[b] - lo_[b]) / a, 0.0);
                else if (a < -ptol && hi_[b] < inf) t = std::max((hi_[b] - x_[b]) / -a, 0.0);
                if (t == inf) continue;
                if (t < step - 1e-12 || (t <= step + 1e-12 && b < leave_var)) {
                    step = t;
                    leave = r;
                    leave_var = b;
                }
            }
        }

        ++iterations_;
        if (leave < 0 || range <= step) {
            if (range == inf) return 1;
            // bound flip
            for (int r = 0; r < m_; ++r) x_[basis_[r]] -= dir * alpha[r] * range;
            x_[q] = dir > 0 ? hi_[q] : lo_[q];
            degenerate = 0;
            bland = false;
            continue;
        }

        for (int r = 0; r < m_; ++r) x_[basis_[r]] -= dir * alpha[r] * step;
        const int out = basis_[leave];
        x_[out] = dir * alpha[leave] > 0 ? lo_[out] : hi_[out];
        x_[q] += dir * step;
        pos_[out] = -1;
        pos_[q] = leave;
        basis_[leave] = q;
        pivot_update(leave, alpha);

        if (step <= 1e-12) {
            if (++degenerate >= opt_.degenerate_limit) bland = true;
        } else {
            degenerate = 0;
            bland = false;
        }
    }
}

void Engine::drive_out_artificials() {
    const int first_art = n_ + m_;
    const int nt = total();
    for (int r = 0; r < m_; ++r) {
        if (basis_[r] < first_art) continue;
        const VectorXd rho = binv_.row(r).transpose();
        int best = -1;
        double big = 1e-7;
        for (int j = 0; j < first_art; ++j) {
            if (pos_[j] >= 0) continue;
            const double a = std::abs(dot_column(j, rho));
            if (a > big) {
                big = a;
                best = j;
            }
        }
        if (best < 0) continue;  // redundant row; the artificial stays basic at zero
        VectorXd alpha = VectorXd::Zero(m_);
        VectorXd e = VectorXd::Zero(m_);
        add_column(best, 1.0, e);
        alpha.noalias() = binv_ * e;
        const int out = basis_[r];
        x_[out] = 0.0;
        pos_[out] = -1;
        pos_[best] = r;
        basis_[r] = best;
        pivot_update(r, alpha);
    }
    for (int j = first_art; j < nt; ++j) {
        lo_[j] = 0.0;
        hi_[j] = 0.0;
    }
    refactor();
}

Solution Engine::run(const LinearProgram& lp) {
    // starting point: structurals at a finite bound (or zero when free)
    x_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) {
        if (lo_[j] > -inf) x_[j] = lo_[j];
        else if (hi_[j] < inf) x_[j] = hi_[j];
    }
    VectorXd act = VectorXd::Zero(m_);
    for (int j = 0; j < n_; ++j)
        if (x_[j] != 0.0) add_column(j, x_[j], act);

    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
        const int w = n_ + i;
        const double v = act[i];
        if (v >= lo_[w] - opt_.tolerance && v <= hi_[w] + opt_.tolerance) {
            basis_[i] = w;
            x_[w] = v;
            continue;
        }
        const double target = v < lo_[w] ? lo_[w] : hi_[w];
        x_[w] = target;
        art_row_.push_back(i);
        art_sign_.push_back(target > v ? 1.0 : -1.0);
        lo_.push_back(0.0);
        hi_.push_back(inf);
        x_.push_back(std::abs(target - v));
        basis_[i] = n_ + m_ + static_cast<int>(art_row_.size()) - 1;
    }
    const int nt = total();
    pos_.assign(nt, -1);
    for (int r = 0; r < m_; ++r) pos_[basis_[r]] = r;
    y_ = VectorXd::Zero(m_);
    refactor();

    Solution sol;
    if (!art_row_.empty()) {
        std::vector<double> c1(nt, 0.0);
        for (int j = n_ + m_; j < nt; ++j) c1[j] = 1.0;
        iterate(c1);
        refactor();
        double worst = 0.0;
        int row = -1;
        for (int j = n_ + m_; j < nt; ++j)
            if (x_[j] > worst) {
                worst = x_[j];
                row = art_row_[j - n_ - m_];
            }
        if (worst > 1e-8) {
            sol.status = Status::infeasible;
            sol.infeasible_row = row;
            sol.iterations = iterations_;
            return sol;
        }
        drive_out_artificials();
    }

    std::vector<double> c2(nt, 0.0);
    std::copy(cost_.begin(), cost_.end(), c2.begin());
    const int res = iterate(c2);
    sol.iterations = iterations_;
    if (res == 1) {
        sol.status = Status::unbounded;
        return sol;
    }
    refactor();
    VectorXd cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = c2[basis_[r]];
    y_.noalias() = binv_.transpose() * cb;

    sol.status = Status::optimal;
    sol.primal.resize(n_);
    for (int j = 0; j < n_; ++j) {
        double v = x_[j] * col_scale_[j];
        // snap onto the original bounds
        v = std::clamp(v, lp.lower[j], lp.upper[j]);
        sol.primal[j] = v;
    }
    sol.row_duals.resize(m_);
    for (int i = 0; i < m_; ++i) sol.row_duals[i] = cost_scale_ * y_[i] * row_scale_[i];
    sol.value = lp.objective(sol.primal);
    return sol;
}

Solution solve_primal(const LinearProgram& lp, const SimplexOptions& opt) {
    Engine e(lp, opt);
    return e.run(lp);
}

// Solves the LP dual of `lp` and reads the primal solution off its row duals.
Solution solve_via_dual(const LinearProgram& lp, const SimplexOptions& opt) {
    const int n = static_cast<int>(lp.num_variables());
    const int m = static_cast<int>(lp.num_rows());

    // v_j = o_j + t_j v'_j with v'_j >= 0, or v'_j free
    std::vector<double> o(n, 0.0), t(n, 1.0);
    std::vector<bool> free_var(n, false);
    std::vector<int> boxed;
    for (int j = 0; j < n; ++j) {
        if (lp.lower[j] > -inf) {
            o[j] = lp.lower[j];
            if (lp.upper[j] < inf) boxed.push_back(j);
        } else if (lp.upper[j] < inf) {
            o[j] = lp.upper[j];
            t[j] = -1.0;
        } else {
            free_var[j] = true;
        }
    }

    LinearProgram d;
    std::vector<double> sign(m, 1.0);
    std::vector<std::vector<std::pair<int, double>>> cols(n);
    for (int i = 0; i < m; ++i) {
        const auto& r = lp.rows[i];
        if (r.relation == Relation::le) sign[i] = -1.0;
        double b = r.rhs;
        for (const auto& [j, a] : r.coefs) b -= a * o[j];
        const bool eq = r.relation == Relation::eq;
        const int yi = d.add_variable(-sign[i] * b, eq ? -inf : 0.0, inf);
        for (const auto& [j, a] : r.coefs)
            if (a != 0.0) cols[j].emplace_back(yi, sign[i] * a * t[j]);
    }
    for (int j : boxed) {
        const int yi = d.add_variable(lp.upper[j] - lp.lower[j], 0.0, inf);
        cols[j].emplace_back(yi, -1.0);
    }
    for (int j = 0; j < n; ++j)
        d.add_row(std::move(cols[j]), free_var[j] ? Relation::eq : Relation::le, lp.cost[j] * t[j]);

    const Solution ds = solve_primal(d, opt);
    Solution sol;
    sol.iterations = ds.iterations;
    if (ds.status != Status::optimal) {
        // dual infeasible or unbounded: let the caller decide using the primal form
        sol.status = ds.status == Status::unbounded ? Status::infeasible : Status::unbounded;
        return sol;
    }
    sol.status = Status::optimal;
    sol.primal.resize(n);
    for (int j = 0; j < n; ++j)
        sol.primal[j] = std::clamp(o[j] + t[j] * -ds.row_duals[j], lp.lower[j], lp.upper[j]);
    sol.row_duals.resize(m);
    for (int i = 0; i < m; ++i) sol.row_duals[i] = sign[i] * ds.primal[i];
    sol.value = lp.objective(sol.primal);
    return sol;
}

bool prefer_dual(const LinearProgram& lp) {
    std::size_t boxed = 0;
    for (std::size_t j = 0; j < lp.num_variables(); ++j)
        if (lp.lower[j] > -inf && lp.upper[j] < inf) ++boxed;
    return lp.num_rows() >= 100 && lp.num_rows() > 4 * (lp.num_variables() + boxed);
}

void audit(const LinearProgram& lp, Solution& sol, const SimplexOptions& opt) {
    if (sol.status != Status::optimal) return;
    int row = -1;
    sol.max_violation = lp.max_violation(sol.primal, &row);
    if (sol.max_violation > opt.audit_tolerance) sol.status = Status::audit_failure;
}

}  // namespace

Solution DenseSimplex::solve(const LinearProgram& lp) const {
    lp.validate();
    Orientation o = options_.orientation;
    if (o == Orientation::automatic) o = prefer_dual(lp) ? Orientation::dual : Orientation::primal;
    if (o == Orientation::dual) {
        Solution s = solve_via_dual(lp, options_);
        audit(lp, s, options_);
        if (s.status == Status::optimal || options_.orientation == Orientation::dual) return s;
    }
    Solution s = solve_primal(lp, options_);
    audit(lp, s, options_);
    return s;
}

Solution solve(const LinearProgram& lp, const SimplexOptions& options) { return DenseSimplex(options).solve(lp); }

// ---------------------------------------------------------------- MPS

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void field_line(std::ostream& out, const char* f1, const std::string& f2, const std::string& f3,
                const std::string& f4) {
    char buf[128];
    std::snprintf(buf, sizeof buf, " %-2s %-8s  %-8s  %12s", f1, f2.c_str(), f3.c_str(), f4.c_str());
    out << buf << '\n';
}

}  // namespace

void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& name) {
    lp.validate();
    const auto col = [](std::size_t j) { return "C" + std::to_string(j); };
    const auto row = [](std::size_t i) { return "R" + std::to_string(i); };
    out << "NAME          " << name << '\n';
    out << "ROWS\n";
    out << " N  COST\n";
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const char* s = lp.rows[i].relation == Relation::ge ? "G" : lp.rows[i].relation == Relation::le ? "L" : "E";
        out << ' ' << s << "  " << row(i) << '\n';
    }
    std::vector<std::vector<std::pair<std::size_t, double>>> cols(lp.num_variables());
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
        for (const auto& [j, a] : lp.rows[i].coefs) cols[j].emplace_back(i, a);
    out << "COLUMNS\n";
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
        if (lp.cost[j] != 0.0) field_line(out, "", col(j), "COST", num(lp.cost[j]));
        for (const auto& [i, a] : cols[j]) field_line(out, "", col(j), row(i), num(a));
    }
    out << "RHS\n";
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
        if (lp.rows[i].rhs != 0.0) field_line(out, "", "RHS", row(i), num(lp.rows[i].rhs));
    if (lp.offset != 0.0) field_line(out, "", "RHS", "COST", num(-lp.offset));
    out << "BOUNDS\n";
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
        const double lo = lp.lower[j];
        const double hi = lp.upper[j];
        if (lo == hi) {
            field_line(out, "FX", "BND", col(j), num(lo));
        } else if (lo == -inf && hi == inf) {
            field_line(out, "FR", "BND", col(j), "");
        } else {
            if (lo == -inf) field_line(out, "MI", "BND", col(j), "");
            else if (lo != 0.0) field_line(out, "LO", "BND", col(j), num(lo));
            if (hi < inf) field_line(out, "UP", "BND", col(j), num(hi));
        }
    }
    out << "ENDATA\n";
}

}  // namespace bamot::lp
