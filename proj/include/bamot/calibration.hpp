#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bamot/measures.hpp"

namespace bamot {

/// An out-of-the-money quote: a put when strike < spot, a call otherwise.
struct CalibrationQuote {
    double strike = 0.0;
    double price = 0.0;
    /// d price / d total vol. Missing or nonpositive values are replaced by the
    /// Black-Scholes vega at the quote's own implied volatility.
    std::optional<double> vega;
};

enum class CalibrationSide { ask, bid_from_ask };

struct CalibrationProblem {
    std::vector<CalibrationQuote> quotes;
    double forward = 0.0;
    double spot = 0.0;
    int components = 1;
    CalibrationSide side = CalibrationSide::ask;
};

struct CalibrationOptions {
    int starts = 16;
    std::uint64_t seed = 1;
    int max_iterations = 20000;
    /// Polish every simplex result with a finite-difference Levenberg-Marquardt run.
    bool polish = true;
};

struct CalibrationResult {
    MixtureMarginal marginal;
    /// Sum of squared vega-weighted pricing errors.
    double objective = 0.0;
    /// Objective at each multi-start initial point.
    std::vector<double> start_objectives;
    int best_start = 0;
    /// Per quote (model - market) / vega.
    std::vector<double> scaled_errors;
    std::vector<std::string> warnings;
};

/// Model out-of-the-money price: put for strike < spot, call otherwise.
double otm_price(const MixtureMarginal& m, double strike, double spot);

/// Fills in missing vegas; throws InputError when a price has no implied vol.
std::vector<CalibrationQuote> with_vegas(const CalibrationProblem& p);

/// Vega-weighted least squares over J-component mixtures with the forward
/// enforced by the parametrization: means of components 1..J-1 as log ratios
/// to the forward with the last mean solved, softmax weights, log vols.
CalibrationResult calibrate_ask(const CalibrationProblem& p, const CalibrationOptions& options = {});

/// Keeps the ask means and weights and fits vols s_j = s^a_j * clamp(v_j, 1e-3, 1)
/// to the bid quotes, so the result is below the ask in convex order.
CalibrationResult calibrate_bid_from_ask(const MixtureMarginal& ask, const CalibrationProblem& bid,
                                         const CalibrationOptions& options = {});

/// CSV with header strike,otm_price,vega (vega may be blank).
std::vector<CalibrationQuote> read_calibration_csv(std::istream& in);

}  // namespace bamot
