#pragma once

// Block-fading Rayleigh MIMO channel and seeded randomness.
//
// Randomness is counter-based: every consumer derives its own generator from
// (master seed, tag, indices) with derive_seed, so results do not depend on
// how frames are spread over workers.

#include <cstdint>
#include <initializer_list>
#include <random>

#include "polarprec/numerics.hpp"

namespace polarprec {

using Rng = std::mt19937_64;

/// splitmix64 finaliser chained over the path components.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// CN(0, variance): real and imaginary parts each N(0, variance / 2).
Complex complex_gaussian(Rng& rng, double variance = 1.0);

/// m_r x m_t matrix of i.i.d. CN(0, 1) entries.
ComplexMatrix draw_channel(int m_r, int m_t, Rng& rng);

/// Haar-distributed matrix with orthonormal columns (QR of a Gaussian
/// matrix with the phase of R's diagonal removed).
ComplexMatrix random_semi_unitary(int rows, int cols, Rng& rng);

/// Y = sqrt(es / M) H F S + Z, Z ~ CN(0, n0). n0 == 0 skips the noise draw.
ComplexMatrix transmit(const ComplexMatrix& h, const ComplexMatrix& f, const ComplexMatrix& s, double es, double n0,
                       Rng& rng);

/// The 3x3 reference channel used for the fixed-channel experiments.
ComplexMatrix fixed_reference_channel();

}  // namespace polarprec
