#include "bamot/fixtures.hpp"

#include <array>

namespace bamot::fixtures {

namespace {

constexpr std::array<double, 4> kMeans{6250.0, 6098.0, 5531.0, 4116.0};
constexpr std::array<double, 4> kWeights{0.09591, 0.5814, 0.2741, 0.04852};
constexpr std::array<double, 4> kAskVols{0.04009, 0.07408, 0.1360, 0.3198};
constexpr std::array<double, 4> kBidVols{0.04008, 0.07222, 0.1293, 0.3150};

MixtureMarginal build(const std::array<double, 4>& vols) {
    std::vector<LogNormalComponent> cs;
    for (std::size_t j = 0; j < 4; ++j) cs.push_back({kMeans[j], vols[j], kWeights[j]});
    return MixtureMarginal::normalized(std::move(cs));
}

}  // namespace

MixtureMarginal spx_ask() { return build(kAskVols); }
MixtureMarginal spx_bid() { return build(kBidVols); }

Marginal spx_mid() {
    const std::pair<double, Marginal> parts[] = {{0.5, Marginal(spx_bid())}, {0.5, Marginal(spx_ask())}};
    return Marginal::combine(parts);
}

}  // namespace bamot::fixtures
