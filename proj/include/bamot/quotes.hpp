#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bamot/lp.hpp"
#include "bamot/measures.hpp"

namespace bamot {

/// Raw option chain for one maturity. Strike 0 carries the forward itself:
/// puts worth 0 and calls worth F on both sides.
struct QuoteChain {
    double forward = 0.0;
    std::vector<double> strikes;
    std::vector<std::optional<double>> put_bid, put_ask, call_bid, call_ask;

    std::size_t size() const noexcept { return strikes.size(); }
    /// Inserts the K = 0 row when missing and sets its boundary quotes.
    void add_zero_strike();
    /// Lengths, strikes strictly increasing from 0, bid <= ask where both exist.
    void validate() const;
};

/// Call-only chain after put-call combination.
struct CallChain {
    double forward = 0.0;
    std::vector<double> strikes;
    std::vector<double> bid;
    std::vector<double> ask;
};

struct EnhancedChain {
    double forward = 0.0;
    std::vector<double> strikes;
    std::vector<double> bid;           // original call quotes
    std::vector<double> ask;
    std::vector<double> enhanced_bid;  // best subhedge from the other quotes
    std::vector<double> enhanced_ask;  // best superhedge
    /// Largest m >= 1 with enhanced_ask[m] < enhanced_ask[m - 1]; -1 if none.
    int truncation = -1;

    CallChain as_calls() const { return {forward, strikes, enhanced_bid, enhanced_ask}; }
};

/// Missing quotes replaced by model-free bounds: p^b = 0, p^a = K, c^b = 0, c^a = F.
QuoteChain impute(const QuoteChain& chain);

/// Parity tightening c^b <- max(c^b, p^b + F - K), c^a <- min(c^a, p^a + F - K)
/// on an imputed chain. Throws ArbitrageError where the result crosses.
CallChain combine_put_call(const QuoteChain& chain);

/// Feasibility LP: some measure (allowing mass escaping to infinity with
/// finite first moment) reprices every call within its band.
lp::LinearProgram no_arbitrage_lp(const CallChain& chain);

/// Super/subhedge LP for the call at index m using calls at all strikes:
/// one row per strike plus the slope row beyond the last strike.
lp::LinearProgram enhancement_lp(const CallChain& chain, std::size_t m, bool ask_side);

/// Runs the pre-check (ArbitrageError with a witness strike on failure), then
/// the per-strike enhancement LPs.
EnhancedChain enhance(const CallChain& chain, const lp::SimplexOptions& options = {});

struct EnhancementReport {
    bool consistent = false;
    double consistency_violation = 0.0;
    bool monotone = false;
    double monotone_violation = 0.0;
    bool ask_convex = false;
    double convexity_violation = 0.0;
    /// Strike indices (m-, m, m+) of the worst convexity violation.
    std::optional<std::array<std::size_t, 3>> violating_triple;
    bool starts_at_forward = false;

    bool ok() const { return consistent && monotone && ask_convex && starts_at_forward; }
};

EnhancementReport validate_enhanced(const EnhancedChain& e, double tol = 1e-8);

/// Discrete measure on {K_0, ..., K_M, K_{M+1}} (M the truncation index)
/// whose call prices interpolate the enhanced asks. Throws InputError for a
/// degenerate market where every enhanced ask equals F.
DiscreteMeasure ask_marginal(const EnhancedChain& e);

/// CSV with header strike,put_bid,put_ask,call_bid,call_ask; blank cells are
/// missing quotes. The forward comes from a "# forward = F" comment line
/// unless given explicitly.
QuoteChain read_chain_csv(std::istream& in, std::optional<double> forward = std::nullopt);
void write_chain_csv(const QuoteChain& chain, std::ostream& out);
/// strike, bid, ask, enhanced_bid, enhanced_ask.
void write_enhanced_csv(const EnhancedChain& e, std::ostream& out);

}  // namespace bamot
