#pragma once

#include <cmath>

namespace collfrag {

/// x^e for x > 0, always through exp/log so that every exponent takes the
/// same rounding path.
inline double power(double x, double e) { return std::exp(e * std::log(x)); }

inline double positive_part(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace collfrag
