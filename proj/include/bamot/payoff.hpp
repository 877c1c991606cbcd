#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bamot {

/// Linear combination of elementary payoffs. Single-maturity terms are
/// evaluated at the last maturity; forward_start couples the first two.
///
/// Grammar (whitespace ignored):
///   expr   := term (('+' | '-') term)*
///   term   := factor ('*' factor)*        at most one non-numeric factor
///   factor := number | '(' expr ')' | name '(' number (',' number)* ')' | 'x'
///   name   := call | put | digital | risk_reversal | forward_start | const
class Payoff {
public:
    enum class Kind {
        constant,       // 1
        linear,         // x
        call,           // (x - k1)^+
        put,            // (k1 - x)^+
        digital,        // 1{x >= k1}
        risk_reversal,  // (x - k2)^+ - (k1 - x)^+
        forward_start,  // (x2 - k1 x1)^+
    };
    struct Term {
        double coef = 1.0;
        Kind kind = Kind::constant;
        double k1 = 0.0;
        double k2 = 0.0;
    };

    Payoff() = default;
    static Payoff constant(double c);
    static Payoff linear();
    static Payoff call(double k);
    static Payoff put(double k);
    static Payoff digital(double k);
    static Payoff risk_reversal(double k_put, double k_call);
    static Payoff forward_start(double k);

    /// Throws InputError with the offending position on malformed input.
    static Payoff parse(std::string_view text);

    Payoff operator+(const Payoff& o) const;
    Payoff operator-(const Payoff& o) const;
    Payoff operator-() const;
    Payoff operator*(double c) const;

    /// 2 if any term needs the first-maturity value, else 1.
    int maturities() const;
    /// Single-maturity evaluation; throws for forward-start terms.
    double operator()(double x) const;
    double operator()(double x1, double x2) const;
    /// lim h(x)/x as x -> infinity (single maturity).
    double slope_at_infinity() const;
    /// Points where the single-maturity payoff is not linear.
    std::vector<double> kinks() const;
    /// Points where the single-maturity payoff jumps (digital strikes).
    std::vector<double> jumps() const;
    /// Strikes relative to x1 appearing in forward-start terms.
    std::vector<double> forward_start_strikes() const;

    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::string to_string() const;

private:
    static Payoff of(Kind kind, double k1 = 0.0, double k2 = 0.0);
    std::vector<Term> terms_;
};

inline Payoff operator*(double c, const Payoff& p) { return p * c; }

}  // namespace bamot
