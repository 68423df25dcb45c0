#pragma once

// Coefficients of the boxplus correction ln(1 + e^{-x}). The scalar and AVX2
// kernels evaluate the same operation sequence (no FMA) so their results are
// bit-identical.

#include <array>

namespace polarprec::kernels::detail {

// Beyond this the correction is below 2e-22 and is evaluated at the cap.
inline constexpr double kCorrectionCap = 50.0;

inline constexpr double kLog2e = 1.4426950408889634;
// ln 2 split so that k * kLn2Hi is exact for |k| < 2^11.
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;

// e^r on |r| <= ln2 / 2, Taylor terms 1/j! from j = 12 down to 0.
inline constexpr std::array<double, 13> kExp = {
    1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0, 1.0 / 40320.0, 1.0 / 5040.0,
    1.0 / 720.0,       1.0 / 120.0,      1.0 / 24.0,      1.0 / 6.0,      0.5,           1.0,
    1.0};

// ln(1 + t) = 2 s sum_j s^{2j} / (2j + 1) with s = t / (2 + t) <= 1/3;
// coefficients from j = 16 down to 0.
inline constexpr std::array<double, 17> kAtanh = {
    1.0 / 33.0, 1.0 / 31.0, 1.0 / 29.0, 1.0 / 27.0, 1.0 / 25.0, 1.0 / 23.0, 1.0 / 21.0, 1.0 / 19.0, 1.0 / 17.0,
    1.0 / 15.0, 1.0 / 13.0, 1.0 / 11.0, 1.0 / 9.0,  1.0 / 7.0,  1.0 / 5.0,  1.0 / 3.0,  1.0};

}  // namespace polarprec::kernels::detail
