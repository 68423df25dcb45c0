#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polarprec/channel.hpp"
#include "polarprec/precoding.hpp"

using namespace polarprec;

namespace {

constexpr double REF_I1 = 1.5289675663;
constexpr double REF_I2 = 1.1489173722;

double db(double x) { return std::pow(10.0, x / 10.0); }

Codebook book_of(std::vector<ComplexMatrix> members) {
  Codebook b;
  b.m_t = static_cast<int>(members.front().rows());
  b.m = static_cast<int>(members.front().cols());
  b.matrices = std::move(members);
  return b;
}

}  // namespace

TEST(DftBase, Examples) {
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix f2 = dft_base(2, 2);
  EXPECT_NEAR(std::abs(f2(0, 0) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f2(1, 1) + r), 0.0, 1e-15);
  const ComplexMatrix f4 = dft_base(4, 2);
  const Complex expect[4] = {0.5, Complex(0, 0.5), -0.5, Complex(0, -0.5)};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(f4(k, 1) - expect[k]), 0.0, 1e-15);
  for (int mt = 1; mt <= 8; ++mt)
    for (int m = 1; m <= mt; ++m)
      EXPECT_LE((dft_base(mt, m).adjoint() * dft_base(mt, m) - ComplexMatrix::Identity(m, m)).norm(), 1e-12);
  EXPECT_THROW(dft_base(2, 3), ContractViolation);
}

TEST(TrainRotation, ZeroBudget) {
  Rng rng(1);
  EXPECT_EQ(train_rotation(dft_base(4, 2), 0, 100, rng), std::vector<int>(4, 0));
  EXPECT_EQ(build_dft_codebook(4, 2, 0, 100, 1).size(), 1u);
}

TEST(TrainRotation, ZeroVectorCollapses) {
  const ComplexMatrix base = dft_base(4, 2);
  EXPECT_NEAR(rotation_objective(base, std::vector<int>(4, 0), 3), 0.0, 1e-15);
  Rng rng(2);
  const auto a = train_rotation(base, 3, 200, rng);
  EXPECT_GT(rotation_objective(base, a, 3), 0.0);
}

TEST(TrainRotation, MatchesExhaustiveSearch) {
  const ComplexMatrix base = dft_base(2, 1);
  double best = -1.0;
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1) best = std::max(best, rotation_objective(base, std::vector<int>{a0, a1}, 1));
  Rng rng(3);
  const auto a = train_rotation(base, 1, 64, rng);
  EXPECT_NEAR(rotation_objective(base, a, 1), best, 1e-15);

  // larger space: 3 antennas, B = 2 -> 64 vectors
  const ComplexMatrix b3 = dft_base(3, 2);
  best = -1.0;
  for (int v = 0; v < 64; ++v)
    best = std::max(best, rotation_objective(b3, std::vector<int>{v & 3, (v >> 2) & 3, v >> 4}, 2));
  Rng rng2(4);
  EXPECT_NEAR(rotation_objective(b3, train_rotation(b3, 2, 2000, rng2), 2), best, 1e-12);
}

TEST(TrainRotation, DeterministicGivenSeed) {
  const Codebook a = build_dft_codebook(4, 2, 3, 500, 77);
  const Codebook b = build_dft_codebook(4, 2, 3, 500, 77);
  EXPECT_EQ(a.rotation, b.rotation);
  EXPECT_EQ(codebook_digest(a), codebook_digest(b));
}

TEST(DftCodebook, Structure) {
  const Codebook book = build_dft_codebook(4, 2, 3, 300, 5);
  ASSERT_EQ(book.size(), 8u);
  EXPECT_EQ(book.matrices[0], dft_base(4, 2));
  for (const auto& f : book.matrices) EXPECT_TRUE(is_semi_unitary(f));
  const ComplexMatrix theta = rotation_matrix(book.rotation, 3);
  ComplexMatrix p = ComplexMatrix::Identity(4, 4);
  for (int l = 0; l < 8; ++l) {
    EXPECT_LE((p * book.matrices[0] - book.matrices[l]).norm(), 1e-12);
    p = theta * p;
  }
  EXPECT_LE((p - ComplexMatrix::Identity(4, 4)).norm(), 1e-12);  // period divides 2^B
  const Codebook w = build_w_codebook(4, 2, 3, 300, 5);
  EXPECT_EQ(w.kind, CodebookKind::w);
  EXPECT_EQ(w.matrices, book.matrices);
}

TEST(QCodebook, Examples) {
  const double r = 1.0 / std::sqrt(2.0);
  const Codebook q = build_q_codebook(2, 1);
  ASSERT_EQ(q.size(), 2u);
  ComplexMatrix q0(2, 2), q1(2, 2);
  q0 << r, r, r, -r;
  q1 << r, r, -r, r;
  EXPECT_LE((q.matrices[0] - q0).norm(), 1e-15);
  EXPECT_LE((q.matrices[1] - q1).norm(), 1e-15);
  for (int m = 1; m <= 6; ++m)
    for (const auto& u : build_q_codebook(m, 3).matrices) EXPECT_TRUE(is_semi_unitary(u, 1e-12));
}

TEST(SubstreamCapacities, ChainRuleAndSymmetry) {
  Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    const ComplexMatrix h = draw_channel(4, 4, rng);
    const ComplexMatrix f = random_semi_unitary(4, 3, rng);
    const double rho = db(-5.0 + 0.05 * t);
    const SubstreamProfile p = substream_capacities(h * f, rho, 3);
    EXPECT_NEAR(p.total(), logdet_capacity(h * f, rho, 3), tol::identity);
    for (double c : p.capacities) EXPECT_GE(c, -1e-12);
  }
  const SubstreamProfile sym = substream_capacities(std::sqrt(2.0) * ComplexMatrix::Identity(2, 2), 1.0, 2);
  EXPECT_NEAR(sym.capacities[0], sym.capacities[1], 1e-15);
  EXPECT_NEAR(sym.polarization, 0.0, 1e-15);
}

TEST(SubstreamCapacities, ReferenceChannelDftRegression) {
  const ComplexMatrix h = fixed_reference_channel();
  const Codebook book = build_dft_codebook(3, 2, 3, 10000, 12345);
  const CapacitySelection sel = select_capacity(h, book, 1.0, 2);
  const SubstreamProfile p = substream_capacities(h * book.matrices[sel.index], 1.0, 2);
  // independent log-det oracle
  const ComplexMatrix g = h * book.matrices[sel.index];
  EXPECT_NEAR(p.capacities[1], oracle::logdet_lu(g.rightCols(1), 1.0, 2), 1e-12);
  EXPECT_NEAR(p.capacities[0], oracle::logdet_lu(g, 1.0, 2) - oracle::logdet_lu(g.rightCols(1), 1.0, 2), 1e-12);
  EXPECT_NEAR(p.capacities[0], REF_I1, 1e-9);
  EXPECT_NEAR(p.capacities[1], REF_I2, 1e-9);
}

TEST(SelectCapacity, TiesAndDominance) {
  Rng rng(7);
  const ComplexMatrix h = draw_channel(4, 4, rng);
  const ComplexMatrix f = random_semi_unitary(4, 2, rng);
  EXPECT_EQ(select_capacity(h, book_of({f, f, f}), 2.0, 2).index, 0);

  std::vector<ComplexMatrix> members;
  for (int k = 0; k < 7; ++k) members.push_back(random_semi_unitary(4, 2, rng));
  members.insert(members.begin() + 4, optimal_f(h, 2));
  EXPECT_EQ(select_capacity(h, book_of(members), 2.0, 2).index, 4);
  EXPECT_THROW(select_capacity(h, Codebook{}, 1.0, 2), ContractViolation);
}

TEST(SelectCapacity, MatchesIndependentScan) {
  Rng rng(8);
  const Codebook book = build_dft_codebook(4, 2, 3, 500, 9);
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix h = draw_channel(4, 4, rng);
    int best = 0;
    double best_c = -1e300;
    for (int k = 0; k < 8; ++k) {
      const double c = oracle::logdet_lu(h * book.matrices[k], 1.5, 2);
      if (c > best_c + 1e-12) best_c = c, best = k;
    }
    const auto sel = select_capacity(h, book, 1.5, 2);
    EXPECT_EQ(sel.index, best);
    EXPECT_EQ(sel.cost.capacity_evaluations, 8);
  }
}

TEST(SelectPolar, DegenerateQBookAndDominance) {
  Rng rng(10);
  const Codebook w = build_w_codebook(4, 2, 2, 300, 11);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix h = draw_channel(4, 4, rng);
    const PolarSelection ps = select_polar(h, w, book_of({ComplexMatrix::Identity(2, 2)}), 2.0, 2);
    const CapacitySelection cs = select_capacity(h, w, 2.0, 2);
    EXPECT_EQ(ps.w_index, cs.index);
    EXPECT_EQ(ps.q_index, 0);
    EXPECT_NEAR(ps.capacity, cs.capacity, 1e-15);

    const ComplexMatrix vhw = optimal_q(h, w.matrices[cs.index]);
    std::vector<ComplexMatrix> qs;
    for (int k = 0; k < 5; ++k) qs.push_back(random_semi_unitary(2, 2, rng));
    qs.insert(qs.begin() + 2, vhw);
    const PolarSelection with = select_polar(h, w, book_of(qs), 2.0, 2);
    EXPECT_EQ(with.q_index, 2);
    EXPECT_NEAR(with.profile.total(), with.capacity, tol::identity);
    EXPECT_EQ(with.cost.capacity_evaluations, 4);
    EXPECT_EQ(with.cost.profile_evaluations, 6);
  }
}

TEST(OptimalQ, DiagonalisedInputGivesIdentity) {
  Rng rng(12);
  const ComplexMatrix u = random_semi_unitary(4, 3, rng);
  ComplexMatrix sigma = ComplexMatrix::Zero(3, 3);
  sigma(0, 0) = 0.5;
  sigma(1, 1) = 1.0;
  sigma(2, 2) = 2.0;
  const ComplexMatrix hw = u * sigma;
  EXPECT_TRUE(equal_up_to_column_phase(optimal_q(hw, ComplexMatrix::Identity(3, 3)), ComplexMatrix::Identity(3, 3), 1e-10));
}

TEST(OptimalQ, DominatesSampledUnitaries) {
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix h = draw_channel(4, 4, rng);
    const ComplexMatrix w = random_semi_unitary(4, 3, rng);
    const ComplexMatrix hw = h * w;
    const SubstreamProfile best = substream_capacities(hw * optimal_q(h, w), 2.0, 3);
    for (int i = 0; i + 1 < 3; ++i) EXPECT_LE(best.capacities[i], best.capacities[i + 1] + 1e-12);
    for (int s = 0; s < 1000; ++s) {
      const SubstreamProfile p = substream_capacities(hw * random_semi_unitary(3, 3, rng), 2.0, 3);
      EXPECT_GE(best.polarization, p.polarization - 1e-9);
      double tail_best = 0.0, tail = 0.0;
      for (int i = 2; i >= 0; --i) {
        tail_best += best.capacities[i];
        tail += p.capacities[i];
        EXPECT_GE(tail_best, tail - 1e-9);
      }
    }
  }
}

TEST(OptimalF, DiagonalChannel) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = 1.0;
  h(1, 1) = 2.0;
  h(2, 2) = 3.0;
  const ComplexMatrix f = optimal_f(h, 2);
  EXPECT_NEAR(std::abs(f(0, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(f(0, 1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(f(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(f(2, 1)), 1.0, 1e-14);
}

TEST(OptimalF, EigenvalueProfileAndDominance) {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix h = draw_channel(4, 4, rng);
    const double rho = 3.0;
    const ComplexMatrix f = optimal_f(h, 2);
    const SvdResult s = svd(h);
    const SubstreamProfile p = substream_capacities(h * f, rho, 2);
    EXPECT_NEAR(p.capacities[0], std::log2(1 + rho / 2 * s.sigma[2] * s.sigma[2]), 1e-10);
    EXPECT_NEAR(p.capacities[1], std::log2(1 + rho / 2 * s.sigma[3] * s.sigma[3]), 1e-10);
    EXPECT_TRUE(equal_up_to_column_phase(optimal_q(h, f), ComplexMatrix::Identity(2, 2), 1e-9));
    const double c = logdet_capacity(h * f, rho, 2);
    for (int k = 0; k < 500; ++k) EXPECT_GE(c, logdet_capacity(h * random_semi_unitary(4, 2, rng), rho, 2) - 1e-9);
  }
}

TEST(OptimalF, IllConditionedFlag) {
  ComplexMatrix h = ComplexMatrix::Identity(3, 3);
  EXPECT_TRUE(optimal_f_ill_conditioned(h, 2));
  h(2, 2) = 2.0;
  EXPECT_FALSE(optimal_f_ill_conditioned(h, 1));
  EXPECT_FALSE(optimal_f_ill_conditioned(h, 3));
}

TEST(CodebookFile, RoundTripIsBitExact) {
  const Codebook w = build_w_codebook(4, 3, 3, 200, 21);
  const Codebook q = build_q_codebook(3, 2);
  const std::vector<Codebook> books{w, q};
  std::string text;
  for (const auto& b : books) text += format_codebook(b);
  const auto back = parse_codebooks(text);
  ASSERT_EQ(back.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].kind, books[i].kind);
    EXPECT_EQ(back[i].rotation, books[i].rotation);
    EXPECT_EQ(back[i].seed, books[i].seed);
    EXPECT_EQ(back[i].matrices, books[i].matrices);
    EXPECT_EQ(codebook_digest(back[i]), codebook_digest(books[i]));
  }
  EXPECT_THROW(parse_codebooks("polarprec-codebook kind=DFT mt=2 m=1 b=1\nmatrix 0\n1 0\n"), ContractViolation);
}
