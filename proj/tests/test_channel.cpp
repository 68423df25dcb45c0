#include <gtest/gtest.h>

#include <cmath>

#include "polarprec/channel.hpp"
#include "polarprec/numerics.hpp"

using namespace polarprec;

TEST(Channel, EntryMoments) {
  Rng rng(1);
  double power = 0.0, re2 = 0.0, im2 = 0.0;
  const int draws = 1000000;
  for (int k = 0; k < draws / 4; ++k) {
    const ComplexMatrix h = draw_channel(2, 2, rng);
    for (int i = 0; i < 4; ++i) {
      const Complex z = h(i);
      power += std::norm(z);
      re2 += z.real() * z.real();
      im2 += z.imag() * z.imag();
    }
  }
  EXPECT_NEAR(power / draws, 1.0, 0.01);
  EXPECT_NEAR(re2 / draws, 0.5, 0.005);
  EXPECT_NEAR(im2 / draws, 0.5, 0.005);
}

TEST(Channel, SeedDeterminism) {
  Rng a(derive_seed(7, {1, 2})), b(derive_seed(7, {1, 2}));
  EXPECT_EQ(draw_channel(3, 4, a), draw_channel(3, 4, b));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
}

TEST(Channel, NoiselessTransmit) {
  Rng rng(2);
  const ComplexMatrix h = draw_channel(3, 3, rng);
  const ComplexMatrix f = random_semi_unitary(3, 2, rng);
  ComplexMatrix s(2, 4);
  s.setConstant(Complex(1, 1) / std::sqrt(2.0));
  const ComplexMatrix y = transmit(h, f, s, 4.0, 0.0, rng);
  EXPECT_LE((y - std::sqrt(2.0) * h * f * s).norm(), 1e-14);

  // f = I, h = I, es = M: the symbol passes unchanged
  const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  ComplexMatrix sym(1, 1);
  sym(0, 0) = Complex(1, 1) / std::sqrt(2.0);
  EXPECT_LE(std::abs(transmit(one, one, sym, 1.0, 0.0, rng)(0, 0) - sym(0, 0)), 1e-15);
}

TEST(Channel, TransmitPowerAndNoiseVariance) {
  Rng rng(3);
  const ComplexMatrix f = random_semi_unitary(4, 2, rng);
  const double es = 3.0;
  const int slots = 100000;
  ComplexMatrix s(2, slots);
  for (int t = 0; t < slots; ++t)
    for (int i = 0; i < 2; ++i) s(i, t) = Complex((rng() & 1) ? 1 : -1, (rng() & 1) ? 1 : -1) / std::sqrt(2.0);
  const ComplexMatrix x = std::sqrt(es / 2.0) * f * s;
  EXPECT_NEAR(x.squaredNorm() / slots, es, 0.01 * es);

  const double n0 = 0.4;
  const ComplexMatrix zero = ComplexMatrix::Zero(4, 4);
  const ComplexMatrix z = transmit(zero, random_semi_unitary(4, 2, rng), ComplexMatrix::Zero(2, 250000), es, n0, rng);
  EXPECT_NEAR(z.squaredNorm() / z.size(), n0, 0.01 * n0);
}

TEST(Channel, DimensionMismatchThrows) {
  Rng rng(4);
  EXPECT_THROW(transmit(ComplexMatrix::Identity(2, 3), ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 1), 1, 1, rng),
               ContractViolation);
}

TEST(Channel, ReferenceMatrixEntries) {
  const ComplexMatrix h = fixed_reference_channel();
  EXPECT_EQ(h(0, 0), Complex(0.61, -0.92));
  EXPECT_EQ(h(2, 2), Complex(0.78, 0.04));
  EXPECT_EQ(h(1, 1), Complex(-0.21, -0.15));
}

TEST(Channel, RandomSemiUnitary) {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) EXPECT_TRUE(is_semi_unitary(random_semi_unitary(5, 1 + k % 5, rng)));
}
