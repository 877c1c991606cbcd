#include "bamot/payoff.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "bamot/error.hpp"

namespace bamot {

namespace {

double eval_term(const Payoff::Term& t, double x1, double x2) {
    switch (t.kind) {
        case Payoff::Kind::constant: return t.coef;
        case Payoff::Kind::linear: return t.coef * x2;
        case Payoff::Kind::call: return t.coef * std::max(x2 - t.k1, 0.0);
        case Payoff::Kind::put: return t.coef * std::max(t.k1 - x2, 0.0);
        case Payoff::Kind::digital: return x2 >= t.k1 ? t.coef : 0.0;
        case Payoff::Kind::risk_reversal: return t.coef * (std::max(x2 - t.k2, 0.0) - std::max(t.k1 - x2, 0.0));
        case Payoff::Kind::forward_start: return t.coef * std::max(x2 - t.k1 * x1, 0.0);
    }
    return 0.0;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Payoff parse() {
        Payoff p = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected input");
        return p;
    }

private:
    // A parsed factor is either a pure number or a payoff.
    struct Value {
        bool numeric = true;
        double number = 1.0;
        Payoff payoff;
    };

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("payoff: " + what + " at position " + std::to_string(i_) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    static Payoff as_payoff(const Value& v) { return v.numeric ? Payoff::constant(v.number) : v.payoff; }

    Payoff expr() {
        Payoff acc = as_payoff(term());
        for (;;) {
            if (eat('+')) acc = acc + as_payoff(term());
            else if (eat('-')) acc = acc - as_payoff(term());
            else return acc;
        }
    }

    Value term() {
        Value acc = factor();
        while (eat('*')) {
            Value f = factor();
            if (!acc.numeric && !f.numeric) fail("product of two payoffs is not supported");
            if (acc.numeric && f.numeric) {
                acc.number *= f.number;
            } else if (acc.numeric) {
                f.payoff = f.payoff * acc.number;
                acc = f;
            } else {
                acc.payoff = acc.payoff * f.number;
            }
        }
        return acc;
    }

    double number() {
        skip();
        const char* b = s_.data() + i_;
        const char* e = s_.data() + s_.size();
        double v = 0.0;
        const auto r = std::from_chars(b, e, v);
        if (r.ec != std::errc() || !std::isfinite(v)) fail("expected a number");
        i_ += static_cast<std::size_t>(r.ptr - b);
        return v;
    }

    Value factor() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[i_];
        if (c == '-') {
            ++i_;
            Value v = factor();
            if (v.numeric) v.number = -v.number;
            else v.payoff = -v.payoff;
            return v;
        }
        if (c == '(') {
            ++i_;
            Value v;
            v.numeric = false;
            v.payoff = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            Value v;
            v.number = number();
            return v;
        }
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        const std::string name(s_.substr(start, i_ - start));
        if (name.empty()) fail("unexpected character");
        Value v;
        v.numeric = false;
        if (name == "x") {
            v.payoff = Payoff::linear();
            return v;
        }
        std::vector<double> args;
        if (!eat('(')) fail("expected '(' after " + name);
        if (!eat(')')) {
            do args.push_back(number());
            while (eat(','));
            if (!eat(')')) fail("expected ')'");
        }
        const auto need = [&](std::size_t n) {
            if (args.size() != n) fail(name + " takes " + std::to_string(n) + " argument(s)");
        };
        if (name == "call") {
            need(1);
            v.payoff = Payoff::call(args[0]);
        } else if (name == "put") {
            need(1);
            v.payoff = Payoff::put(args[0]);
        } else if (name == "digital") {
            need(1);
            v.payoff = Payoff::digital(args[0]);
        } else if (name == "risk_reversal") {
            need(2);
            if (!(args[0] <= args[1])) fail("risk_reversal needs put strike <= call strike");
            v.payoff = Payoff::risk_reversal(args[0], args[1]);
        } else if (name == "forward_start") {
            need(1);
            v.payoff = Payoff::forward_start(args[0]);
        } else if (name == "const") {
            need(1);
            v.payoff = Payoff::constant(args[0]);
        } else {
            fail("unknown payoff '" + name + "'");
        }
        return v;
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

}  // namespace

Payoff Payoff::of(Kind kind, double k1, double k2) {
    if (!std::isfinite(k1) || !std::isfinite(k2)) throw InputError("payoff: non-finite strike");
    Payoff p;
    p.terms_.push_back(Term{1.0, kind, k1, k2});
    return p;
}

Payoff Payoff::constant(double c) {
    Payoff p = of(Kind::constant);
    p.terms_[0].coef = c;
    return p;
}
Payoff Payoff::linear() { return of(Kind::linear); }
Payoff Payoff::call(double k) { return of(Kind::call, k); }
Payoff Payoff::put(double k) { return of(Kind::put, k); }
Payoff Payoff::digital(double k) { return of(Kind::digital, k); }
Payoff Payoff::risk_reversal(double k_put, double k_call) { return of(Kind::risk_reversal, k_put, k_call); }
Payoff Payoff::forward_start(double k) { return of(Kind::forward_start, k); }

Payoff Payoff::parse(std::string_view text) { return Parser(text).parse(); }

Payoff Payoff::operator+(const Payoff& o) const {
    Payoff p = *this;
    p.terms_.insert(p.terms_.end(), o.terms_.begin(), o.terms_.end());
    return p;
}

Payoff Payoff::operator-(const Payoff& o) const { return *this + (-o); }
Payoff Payoff::operator-() const { return *this * -1.0; }

Payoff Payoff::operator*(double c) const {
    if (!std::isfinite(c)) throw InputError("payoff: non-finite coefficient");
    Payoff p = *this;
    for (auto& t : p.terms_) t.coef *= c;
    return p;
}

int Payoff::maturities() const {
    for (const auto& t : terms_)
        if (t.kind == Kind::forward_start) return 2;
    return 1;
}

double Payoff::operator()(double x) const {
    if (maturities() != 1) throw InputError("payoff: forward-start terms need two maturities");
    double v = 0.0;
    for (const auto& t : terms_) v += eval_term(t, x, x);
    return v;
}

double Payoff::operator()(double x1, double x2) const {
    double v = 0.0;
    for (const auto& t : terms_) v += eval_term(t, x1, x2);
    return v;
}

double Payoff::slope_at_infinity() const {
    double s = 0.0;
    for (const auto& t : terms_) {
        switch (t.kind) {
            case Kind::linear:
            case Kind::call:
            case Kind::risk_reversal: s += t.coef; break;
            case Kind::forward_start: throw InputError("payoff: forward-start terms need two maturities");
            default: break;
        }
    }
    return s;
}

std::vector<double> Payoff::kinks() const {
    std::vector<double> k;
    for (const auto& t : terms_) {
        switch (t.kind) {
            case Kind::call:
            case Kind::put:
            case Kind::digital: k.push_back(t.k1); break;
            case Kind::risk_reversal:
                k.push_back(t.k1);
                k.push_back(t.k2);
                break;
            default: break;
        }
    }
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

std::vector<double> Payoff::jumps() const {
    std::vector<double> k;
    for (const auto& t : terms_)
        if (t.kind == Kind::digital) k.push_back(t.k1);
    return k;
}

std::vector<double> Payoff::forward_start_strikes() const {
    std::vector<double> k;
    for (const auto& t : terms_)
        if (t.kind == Kind::forward_start) k.push_back(t.k1);
    return k;
}

std::string Payoff::to_string() const {
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << t.coef;
        switch (t.kind) {
            case Kind::constant: break;
            case Kind::linear: os << "*x"; break;
            case Kind::call: os << "*call(" << t.k1 << ")"; break;
            case Kind::put: os << "*put(" << t.k1 << ")"; break;
            case Kind::digital: os << "*digital(" << t.k1 << ")"; break;
            case Kind::risk_reversal: os << "*risk_reversal(" << t.k1 << "," << t.k2 << ")"; break;
            case Kind::forward_start: os << "*forward_start(" << t.k1 << ")"; break;
        }
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace bamot
