#include "bamot/black.hpp"

#include <cmath>
#include <numbers>

namespace bamot::black {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

namespace {

struct D12 {
    double d1;
    double d2;
};

D12 d12(double z, double s, double k) {
    const double d1 = (std::log(z / k) + 0.5 * s * s) / s;
    return {d1, d1 - s};
}

}  // namespace

double call(double z, double s, double k) {
    if (k <= 0.0) return z - k;
    const auto [d1, d2] = d12(z, s, k);
    const double v = z * norm_cdf(d1) - k * norm_cdf(d2);
    return v > 0.0 ? v : 0.0;
}

double put(double z, double s, double k) {
    if (k <= 0.0) return 0.0;
    const auto [d1, d2] = d12(z, s, k);
    const double v = k * norm_cdf(-d2) - z * norm_cdf(-d1);
    return v > 0.0 ? v : 0.0;
}

double cdf(double z, double s, double x) {
    if (x <= 0.0) return 0.0;
    return norm_cdf((std::log(x / z) + 0.5 * s * s) / s);
}

double survival(double z, double s, double x) {
    if (x <= 0.0) return 1.0;
    return norm_cdf(-(std::log(x / z) + 0.5 * s * s) / s);
}

double density(double z, double s, double x) {
    if (x <= 0.0) return 0.0;
    const double u = (std::log(x / z) + 0.5 * s * s) / s;
    return norm_pdf(u) / (x * s);
}

double upper_partial_mean(double z, double s, double x) {
    if (x <= 0.0) return z;
    return z * norm_cdf(d12(z, s, x).d1);
}

double lower_partial_mean(double z, double s, double x) {
    if (x <= 0.0) return 0.0;
    return z * norm_cdf(-d12(z, s, x).d1);
}

double vega(double z, double s, double k) {
    if (k <= 0.0) return 0.0;
    return z * norm_pdf(d12(z, s, k).d1);
}

double implied_total_vol(double z, double k, double otm_price) {
    auto price = [&](double s) { return k < z ? put(z, s, k) : call(z, s, k); };
    const double intrinsic = 0.0;
    const double upper = k < z ? k : z;
    if (!(otm_price > intrinsic) || !(otm_price < upper)) return -1.0;
    double lo = 1e-10;
    double hi = 1.0;
    while (price(hi) < otm_price && hi < 1e3) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (price(mid) < otm_price) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace bamot::black
