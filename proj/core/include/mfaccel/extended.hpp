#pragma once

// Wider floating type for Gram-matrix work. Squared norms lose half the
// significant digits of the snapshots, so the kernels that read residuals off a
// Gram matrix run in quad precision where the compiler provides it.

#include <cmath>

namespace mfaccel {

#if defined(__SIZEOF_FLOAT128__) && !defined(MFACCEL_NO_FLOAT128)
__extension__ typedef __float128 extended;
inline constexpr double kExtendedEpsilon = 1.925929944387235853e-34;  // 2^-112
#else
using extended = long double;
inline constexpr double kExtendedEpsilon = static_cast<double>(__LDBL_EPSILON__);
#endif

namespace num {

inline double abs(double x) noexcept { return std::fabs(x); }
inline double sqrt(double x) noexcept { return std::sqrt(x); }
inline bool isfinite(double x) noexcept { return std::isfinite(x); }

#if defined(__SIZEOF_FLOAT128__) && !defined(MFACCEL_NO_FLOAT128)
inline extended abs(extended x) noexcept { return x < 0 ? -x : x; }
inline bool isfinite(extended x) noexcept { return x == x && x - x == 0; }

/// Newton iteration from the double estimate.
inline extended sqrt(extended x) noexcept {
  if (!(x > 0)) return x == 0 ? extended(0) : extended(std::nan(""));
  if (!isfinite(x)) return x;
  const double guess = std::sqrt(static_cast<double>(x));
  extended y = (guess > 0 && std::isfinite(guess)) ? extended(guess) : extended(1);
  // After one step the iterates decrease monotonically towards sqrt(x).
  y = 0.5 * (y + x / y);
  for (int i = 0; i < 2000; ++i) {
    const extended next = 0.5 * (y + x / y);
    if (!(next < y)) break;
    y = next;
  }
  return y;
}
#else
inline extended abs(extended x) noexcept { return std::fabs(x); }
inline extended sqrt(extended x) noexcept { return std::sqrt(x); }
inline bool isfinite(extended x) noexcept { return std::isfinite(x); }
#endif

}  // namespace num
}  // namespace mfaccel
