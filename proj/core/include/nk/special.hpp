#pragma once

#include <cmath>

namespace nk {

// Exponential integral E1(x) for x > 0.
double expint_e1(double x);

// Mittag-Leffler function E_alpha(z) for alpha in (0,1], z <= z_switch_pos.
// Power series (quad precision) on z >= -5, spectral integral representation
// for z < -5. Supported range: z <= 5 for positive arguments.
double mittag_leffler(double alpha, double z);

// Internal routes, exposed for the overlap-window agreement test.
double mittag_leffler_series(double alpha, double z);
double mittag_leffler_integral(double alpha, double z);  // requires z < 0

// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace nk
