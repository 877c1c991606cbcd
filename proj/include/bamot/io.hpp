#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bamot/calibration.hpp"
#include "bamot/closedform.hpp"
#include "bamot/hedging.hpp"
#include "bamot/measures.hpp"
#include "bamot/metrics.hpp"
#include "bamot/quotes.hpp"

namespace bamot {

using json = nlohmann::json;

inline constexpr const char* version = "0.1.0";

/// Batch settings shared by the command-line tools.
struct RunConfig {
    /// Quantile points of the constraint grid; the primal support is the same grid.
    std::size_t grid_points = 400;
    std::size_t product_points = 150;
    /// Mass left out below the first and above the last quantile point.
    double lower_tail = 1e-6;
    double upper_tail = 1e-6;
    double lp_tolerance = 1e-9;
    double audit_tolerance = 1e-8;
    StrikeMode strike_mode = StrikeMode::quoted;
    /// Quoted strikes per maturity.
    std::vector<std::vector<double>> strikes;
    bool with_primal = true;
    std::string output_dir = ".";
    std::uint64_t seed = 1;
    int components = 3;
    int calibration_starts = 16;
    std::vector<double> gammas;

    /// Throws InputError on nonpositive sizes or tails outside (0, 0.5).
    void validate() const;
    HedgeConfig hedge_config() const;
};

RunConfig run_config_from_json(const json& j);
json to_json(const RunConfig& c);
/// FNV-1a of the compact JSON form, as 16 hex digits.
std::string config_hash(const RunConfig& c);
/// "# bamot <version> config <hash>"
std::string provenance_line(const RunConfig& c);

json to_json(const MixtureMarginal& m);
json to_json(const DiscreteMeasure& m);
json to_json(const DistanceReport& r);
json to_json(const HedgePortfolio& p);
json to_json(const PriceBound& b);
json to_json(const OneSidedDigitalResult& r);
json to_json(const EnhancementReport& r);
json to_json(const CalibrationResult& r);

/// {"components":[{"mean","vol","weight"}], "forward"?, "maturity"?, "normalize"?}
MixtureMarginal mixture_from_json(const json& j);
/// {"atoms":[...], "weights":[...]}
DiscreteMeasure discrete_from_json(const json& j);
/// A mixture, a discrete measure or {"black_scholes":{"spot","vol","maturity"}}.
Marginal marginal_from_json(const json& j);
/// {"bid": marginal, "ask": marginal} or an array of them, one per maturity.
std::vector<MaturityMarginals> maturities_from_json(const json& j);

json read_json_file(const std::string& path);

/// Columns strike, weight, side (ask/bid) and maturity; cash and forward
/// positions as comment lines.
void write_portfolio_csv(const HedgePortfolio& p, std::ostream& out);

}  // namespace bamot
