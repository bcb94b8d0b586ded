#include "gsbm/normal.hpp"

namespace gsbm {

double log_norm_cdf(double z) {
  if (z > -35.0) {
    // erfc keeps full relative accuracy down to here.
    return std::log(norm_cdf(z));
  }
  // Asymptotic expansion of the Mills ratio:
  // Phi(z) ~ phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8), z -> -inf.
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2) +
                        105.0 / (z2 * z2 * z2 * z2);
  return -0.5 * z2 - std::log(-z) - kLogSqrt2Pi + std::log(series);
}

}  // namespace gsbm
