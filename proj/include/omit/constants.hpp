#pragma once

namespace omit::constants {

// SI values, CODATA 2018. hbar is exact by definition of the 2019 SI.
inline constexpr double hbar = 1.054571817e-34; // J s
inline constexpr double c0 = 2.99792458e8;      // m/s
inline constexpr double pi = 3.141592653589793238462643383279502884;

} // namespace omit::constants
