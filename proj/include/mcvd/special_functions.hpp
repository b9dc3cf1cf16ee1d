#pragma once

namespace mcvd {

/// Complementary error function. Absolute error below 1e-15 on |x| <= 10,
/// computed from erfcx so that no platform erfc is involved.
double erfc(double x) noexcept;

/// Scaled complementary error function exp(x^2) * erfc(x).
///
/// For x >= 0 this is a single Chebyshev expansion of (1 + 2x) erfcx(x) in
/// t = (x - 3.75) / (x + 3.75), which maps [0, inf) onto [-1, 1). The
/// expansion is smooth at t = 1 (x -> inf), so one set of 27 coefficients
/// covers the whole half line with relative error near machine epsilon and no
/// crossover between a series and an asymptotic branch. Negative arguments use
/// the reflection erfcx(-x) = 2 exp(x^2) - erfcx(x), which overflows for
/// x < -26.6 exactly when the true value does.
double erfcx(double x) noexcept;

}  // namespace mcvd
