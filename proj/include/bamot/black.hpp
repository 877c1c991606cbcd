#pragma once

// Log-normal building blocks. A component is parametrised by its mean `z`
// (the forward of the component) and its total log-volatility `s`, so that
// X = z * exp(s * W - s^2 / 2) with W standard normal.

namespace bamot::black {

double norm_cdf(double x);
double norm_pdf(double x);

/// E[(X - k)^+].
double call(double z, double s, double k);
/// E[(k - X)^+].
double put(double z, double s, double k);
/// P(X <= x).
double cdf(double z, double s, double x);
/// P(X > x), accurate in the upper tail.
double survival(double z, double s, double x);
double density(double z, double s, double x);
/// E[X ; X > x], the upper partial first moment.
double upper_partial_mean(double z, double s, double x);
/// E[X ; X <= x].
double lower_partial_mean(double z, double s, double x);
/// d call / d s at fixed (z, k).
double vega(double z, double s, double k);

/// Total volatility reproducing an out-of-the-money price; put for k < z,
/// call otherwise. Returns a negative value when the price is outside the
/// no-arbitrage range.
double implied_total_vol(double z, double k, double otm_price);

}  // namespace bamot::black
