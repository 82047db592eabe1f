#pragma once

namespace qkerr::constants {

// 2019 SI exact values.
inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kSpeedOfLight = 299792458.0;    // m / s

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kHbar = kPlanck / (2.0 * kPi);  // J s / rad

// CODATA 2018 vacuum permittivity.
inline constexpr double kEps0 = 8.8541878128e-12;       // F / m

} // namespace qkerr::constants
