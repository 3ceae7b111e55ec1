#pragma once

namespace mixtest {

// erf/erfc via Cody's rational minimax approximations (relative error well
// below 1e-13). Implemented here so p-values do not depend on the platform's
// libm rounding.
double erf(double x);
double erfc(double x);

double std_normal_cdf(double x);

// Inverse standard normal CDF, AS 241 (PPND16) rational approximation;
// absolute error far below 1e-12 over (0, 1). Used by the inverse-CDF sampler
// so simulated streams are reproducible across platforms.
double std_normal_quantile(double p);

}  // namespace mixtest
