#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace bamot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad parameters, unparsable files, violated preconditions.
class InputError : public Error {
public:
    using Error::Error;
};

/// Quotes or marginals admit static arbitrage. Carries the offending strike and,
/// for multi-maturity checks, the pair of maturity indices.
class ArbitrageError : public Error {
public:
    ArbitrageError(const std::string& what, double witness_strike,
                   std::optional<int> bid_maturity = std::nullopt,
                   std::optional<int> ask_maturity = std::nullopt)
        : Error(what),
          witness_strike_(witness_strike),
          bid_maturity_(bid_maturity),
          ask_maturity_(ask_maturity) {}

    double witness_strike() const noexcept { return witness_strike_; }
    std::optional<int> bid_maturity() const noexcept { return bid_maturity_; }
    std::optional<int> ask_maturity() const noexcept { return ask_maturity_; }

private:
    double witness_strike_;
    std::optional<int> bid_maturity_;
    std::optional<int> ask_maturity_;
};

/// An LP with no feasible point; `row` names the constraint that could not be met.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, int row) : Error(what), row_(row) {}
    int row() const noexcept { return row_; }

private:
    int row_;
};

/// Solver breakdown, iteration limits, root-finding failures.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace bamot
