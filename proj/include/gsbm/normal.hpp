#pragma once

#include <cmath>

namespace gsbm {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;
inline constexpr double kSqrt2 = 1.41421356237309504880;

inline double norm_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

// Upper tail 1 - Phi(z), accurate for large positive z.
inline double norm_sf(double z) { return 0.5 * std::erfc(z / kSqrt2); }

// log Phi(z), safe far into the left tail where Phi underflows.
double log_norm_cdf(double z);

}  // namespace gsbm
