#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace bamot::lp {

inline constexpr double inf = std::numeric_limits<double>::infinity();

enum class Relation { ge, eq, le };

/// One constraint  sum_j coef_j * v_j  (>= | = | <=)  rhs.
struct Row {
    std::vector<std::pair<int, double>> coefs;
    Relation relation = Relation::ge;
    double rhs = 0.0;
    std::string name;
};

/// minimize c . v  subject to the rows and lower <= v <= upper.
/// `offset` is added to the reported objective value.
class LinearProgram {
public:
    int add_variable(double cost, double lower = 0.0, double upper = inf, std::string name = {});
    int add_row(std::vector<std::pair<int, double>> coefs, Relation relation, double rhs,
                std::string name = {});

    std::size_t num_variables() const noexcept { return cost.size(); }
    std::size_t num_rows() const noexcept { return rows.size(); }

    /// Throws InputError on index errors, NaN coefficients or crossed bounds.
    void validate() const;

    /// c . v + offset.
    double objective(const std::vector<double>& v) const;
    /// Largest violation of any row or bound at `v`, scaled per row by
    /// max(1, |rhs|, max_j |a_ij v_j|). Returns the row index in `worst_row`
    /// (-1 for a bound violation).
    double max_violation(const std::vector<double>& v, int* worst_row = nullptr) const;

    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::string> names;
    std::vector<Row> rows;
    double offset = 0.0;
};

enum class Status { optimal, infeasible, unbounded, audit_failure };

const char* to_string(Status s);

struct Solution {
    Status status = Status::infeasible;
    double value = 0.0;
    std::vector<double> primal;
    /// d value / d rhs_i at the optimum.
    std::vector<double> row_duals;
    long iterations = 0;
    /// For infeasible problems: a row that could not be satisfied.
    int infeasible_row = -1;
    /// Scaled residual found by the post-solve audit.
    double max_violation = 0.0;
};

enum class Orientation {
    automatic,  // solve the LP dual when rows greatly outnumber columns
    primal,
    dual,
};

struct SimplexOptions {
    double tolerance = 1e-9;
    double audit_tolerance = 1e-8;
    long max_iterations = 1'000'000;
    /// Iterations between refactorizations of the basis inverse.
    int refactor_every = 100;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    int degenerate_limit = 50;
    Orientation orientation = Orientation::automatic;
};

/// Interface for swapping in an external solver behind the LP builders.
class Solver {
public:
    virtual ~Solver() = default;
    virtual Solution solve(const LinearProgram& lp) const = 0;
};

/// Dense revised simplex, bounded variables, two-phase start.
class DenseSimplex final : public Solver {
public:
    explicit DenseSimplex(SimplexOptions options = {}) : options_(options) {}
    Solution solve(const LinearProgram& lp) const override;

private:
    SimplexOptions options_;
};

Solution solve(const LinearProgram& lp, const SimplexOptions& options = {});

/// Fixed-format MPS export.
void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& name = "BAMOT");

}  // namespace bamot::lp
