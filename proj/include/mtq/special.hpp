#pragma once

namespace mtq {

// Standard normal cumulative distribution function.
double gauss_cdf(double z);

// Scaled complementary error function exp(x^2) erfc(x).
double erfcx(double x);

// exp(u) * gauss_cdf(v) without intermediate overflow or underflow. Throws
// OverflowError only if the product itself exceeds the double range.
double exp_phi(double u, double v);

// exp(u) * erfc(z), same guarantees as exp_phi.
double exp_erfc(double u, double z);

}  // namespace mtq
