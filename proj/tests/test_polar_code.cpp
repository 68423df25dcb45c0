#include <cstdio>
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "polarprec/kernels.hpp"
#include "polarprec/polar_code.hpp"

using namespace polarprec;

namespace {

Bits random_bits(std::size_t n, std::mt19937_64& rng) {
  Bits b(n);
  for (auto& x : b) x = rng() & 1u;
  return b;
}

// Code built from a GA profile at the given channel mean.
PolarSpec ga_code(int code_len, int k, double mean, CrcPolynomial crc = {}, int list = 1) {
  ReliabilityProfile p;
  p.llr_means.push_back(ga_evolve(mean, code_len));
  return make_polar_spec(code_len, 1, k, select_info_sets(p, k + crc.length), crc, list);
}

std::vector<double> clamp_llrs(const Bits& codeword) {
  std::vector<double> llr(codeword.size());
  for (std::size_t i = 0; i < codeword.size(); ++i) llr[i] = codeword[i] ? -limits::noiseless_llr : limits::noiseless_llr;
  return llr;
}

// BPSK over AWGN: LLR = 2 y / sigma^2.
std::vector<double> awgn_llrs(const Bits& codeword, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> llr(codeword.size());
  for (std::size_t i = 0; i < codeword.size(); ++i)
    llr[i] = 2.0 * ((codeword[i] ? -1.0 : 1.0) + noise(rng)) / (sigma * sigma);
  return llr;
}

}  // namespace

// ---- GA ---------------------------------------------------------------------

TEST(Ga, ZeroMeanStaysZero) {
  for (int n : {2, 8, 64})
    for (double m : ga_evolve(0.0, n)) EXPECT_EQ(m, 0.0);
}

TEST(Ga, LengthTwo) {
  const auto v = ga_evolve(4.0, 2);
  EXPECT_EQ(v[1], 8.0);
  const double phi = ga_phi(4.0);
  EXPECT_NEAR(v[0], ga_phi_inverse(1.0 - (1.0 - phi) * (1.0 - phi)), 1e-9);
  EXPECT_LT(v[0], 4.0);
}

TEST(Ga, PhiIsNonIncreasingAndInverts) {
  double prev = 1.0;
  for (double x = 0.0; x < 200.0; x += 0.01) {
    const double y = ga_phi(x);
    EXPECT_LE(y, prev + 1e-15) << x;
    prev = y;
  }
  for (double x : {0.1, 0.5, 1.0, 3.0, 9.5, 10.5, 20.0, 80.0, 300.0, 5000.0})
    EXPECT_NEAR(ga_phi_inverse_log(ga_log_phi(x)), x, 1e-8 * x) << x;
}

TEST(Ga, LengthEightTracksExactPhi) {
  // The closed-form phi is loose for small means; those channels are useless
  // anyway, so only an absolute tolerance applies there.
  for (double m0 : {0.5, 2.0, 6.0}) {
    const auto v = ga_evolve(m0, 8);
    const auto ref = oracle::exact_ga_evolve(m0, 8);
    for (int i = 0; i < 8; ++i) {
      if (ref[i] >= 1.0)
        EXPECT_NEAR(v[i], ref[i], 0.02 * ref[i]) << "m0=" << m0 << " i=" << i;
      else
        EXPECT_NEAR(v[i], ref[i], 0.07) << "m0=" << m0 << " i=" << i;
    }
  }
}

TEST(Ga, LengthEightRegression) {
  const auto v = ga_evolve(2.0, 8);
  const double expect[8] = {0.0211875766, 0.4197277352, 0.6111189879, 3.2934569293,
                            1.0055609539, 4.5641464442, 5.7854580457, 16.0};
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(v[i], expect[i], 1e-9) << i;
}

TEST(Ga, MonotoneInInitialMean) {
  std::vector<double> prev = ga_evolve(0.0, 64);
  for (double m = 0.05; m < 40.0; m *= 1.3) {
    const auto cur = ga_evolve(m, 64);
    for (int i = 0; i < 64; ++i) EXPECT_GE(cur[i], prev[i]) << "m=" << m << " i=" << i;
    prev = cur;
  }
}

TEST(Ga, BoundExamples) {
  ReliabilityProfile p;
  p.llr_means = {{0.0, limits::ga_mean_cap}};
  EXPECT_NEAR(ga_block_error_bound(p, {{0}}), 0.5, 1e-15);
  EXPECT_NEAR(ga_block_error_bound(p, {{1}}), 0.0, 1e-300);
  p.llr_means = {{4.0, 9.0}};
  const double q0 = 0.5 * std::erfc(std::sqrt(2.0) / std::sqrt(2.0));
  const double q1 = 0.5 * std::erfc(std::sqrt(4.5) / std::sqrt(2.0));
  EXPECT_NEAR(ga_block_error_bound(p, {{0, 1}}), 1.0 - (1.0 - q0) * (1.0 - q1), 1e-15);
}

TEST(SelectInfoSets, Examples) {
  ReliabilityProfile same;
  same.llr_means = {ga_evolve(3.0, 8), ga_evolve(3.0, 8)};
  const auto all = select_info_sets(same, 16);
  EXPECT_EQ(all[0].size(), 8u);
  EXPECT_EQ(all[1].size(), 8u);

  ReliabilityProfile dom;
  dom.llr_means = {std::vector<double>(8, 10.0), std::vector<double>(8, 1.0)};
  const auto first = select_info_sets(dom, 8);
  EXPECT_EQ(first[0], (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_TRUE(first[1].empty());

  // ties go to the lower (stream, index) pair
  const auto tie = select_info_sets(same, 1);
  EXPECT_EQ(tie[0], (std::vector<int>{7}));
  EXPECT_TRUE(tie[1].empty());
}

TEST(SelectInfoSets, MatchesSortOracle) {
  ReliabilityProfile p;
  p.llr_means = {ga_evolve(1.3, 32), ga_evolve(4.1, 32)};
  const auto sets = select_info_sets(p, 30);
  std::vector<std::tuple<double, int, int>> keyed;
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 32; ++i) keyed.emplace_back(-p.llr_means[s][i], s, i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::vector<int>> expect(2);
  for (int k = 0; k < 30; ++k) expect[std::get<1>(keyed[k])].push_back(std::get<2>(keyed[k]));
  for (auto& e : expect) std::sort(e.begin(), e.end());
  EXPECT_EQ(sets, expect);
}

// ---- Encoder ------------------------------------------------------------------

TEST(Encoder, Examples) {
  const PolarSpec spec = make_polar_spec(8, 1, 8, {{0, 1, 2, 3, 4, 5, 6, 7}});
  EXPECT_EQ(polar_encode(Bits(8, 0), spec, 0), Bits(8, 0));
  Bits last(8, 0);
  last[7] = 1;
  EXPECT_EQ(polar_encode(last, spec, 0), Bits(8, 1));
  Bits first(8, 0);
  first[0] = 1;
  EXPECT_EQ(polar_encode(first, spec, 0), (Bits{1, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(Encoder, MatchesGeneratorMatrixAndIsLinear) {
  std::mt19937_64 rng(5);
  for (int n : {2, 4, 16, 128}) {
    for (int t = 0; t < 50; ++t) {
      const Bits u = random_bits(n, rng), v = random_bits(n, rng);
      Bits x = u;
      polar_transform(x);
      EXPECT_EQ(x, oracle::encode_by_matrix(u));
      Bits w(n), y = v, s(n);
      for (int i = 0; i < n; ++i) w[i] = u[i] ^ v[i];
      polar_transform(y);
      polar_transform(w);
      for (int i = 0; i < n; ++i) s[i] = x[i] ^ y[i];
      EXPECT_EQ(w, s);
    }
  }
}

TEST(Encoder, LengthMismatchThrows) {
  const PolarSpec spec = ga_code(8, 4, 2.0);
  EXPECT_THROW(polar_encode(Bits(3), spec, 0), ContractViolation);
}

// ---- CRC ----------------------------------------------------------------------

TEST(Crc, Examples) {
  EXPECT_EQ(crc_remainder(Bits(20, 0), kNrCrc6), Bits(6, 0));
  // 1 followed by crc_len zeros: remainder = poly without its leading term
  Bits one{1};
  const Bits rem = crc_remainder(one, kNrCrc6);
  EXPECT_EQ(rem, (Bits{1, 0, 0, 0, 0, 1}));
}

TEST(Crc, AgreesWithLongDivisionAndRoundTrips) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    const Bits msg = random_bits(1 + rng() % 60, rng);
    for (CrcPolynomial crc : {kNrCrc6, CrcPolynomial{11, 0xE21}, CrcPolynomial{16, 0x11021}}) {
      EXPECT_EQ(crc_remainder(msg, crc), oracle::crc_long_division(msg, crc.length, crc.poly));
      const Bits framed = crc_attach(msg, crc);
      EXPECT_TRUE(crc_check(framed, crc));
      EXPECT_EQ(oracle::crc_long_division(framed, crc.length, crc.poly), Bits(crc.length, 0));
      Bits corrupted = framed;
      corrupted[rng() % corrupted.size()] ^= 1u;
      EXPECT_FALSE(crc_check(corrupted, crc));  // every single-bit error is detected
    }
  }
}

TEST(Crc, RandomTwentyBitMessageRegression) {
  const Bits msg{1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 0, 0, 1};
  EXPECT_EQ(crc_remainder(msg, kNrCrc6), oracle::crc_long_division(msg, 6, 0x61));
}

// ---- Decoders -------------------------------------------------------------------

TEST(Decoder, NoiselessRoundTripAllLengths) {
  std::mt19937_64 rng(9);
  for (int n = 8; n <= 256; n *= 2) {
    const PolarSpec spec = ga_code(n, n / 2, 2.0);
    ScDecoder sc(n);
    ScListDecoder scl(n, 4);
    for (int t = 0; t < 1000; ++t) {
      const Bits info = random_bits(n / 2, rng);
      const auto llr = clamp_llrs(polar_encode(info, spec, 0));
      ASSERT_EQ(sc.decode(llr, spec.frozen[0]), info);
      if (t < 100) ASSERT_EQ(scl.decode(llr, spec.frozen[0], {}).info, info);
    }
  }
}

TEST(Decoder, AllPositiveLlrsGiveZeros) {
  const PolarSpec spec = ga_code(64, 20, 3.0);
  const std::vector<double> llr(64, limits::noiseless_llr);
  EXPECT_EQ(sc_decode(llr, spec, 0), Bits(20, 0));
}

TEST(Decoder, ZeroLlrDecidesZero) {
  const PolarSpec spec = make_polar_spec(2, 1, 2, {{0, 1}});
  EXPECT_EQ(sc_decode(std::vector<double>(2, 0.0), spec, 0), (Bits{0, 0}));
}

TEST(Decoder, ListOfOneWithoutCrcIsSc) {
  std::mt19937_64 rng(10);
  const PolarSpec spec = ga_code(128, 64, 2.0);
  ScDecoder sc(128);
  ScListDecoder scl(128, 1);
  std::normal_distribution<double> d(1.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> llr(128);
    for (auto& x : llr) x = d(rng);
    if (t % 10 == 0) llr[rng() % 128] = 0.0;
    const auto r = scl.decode(llr, spec.frozen[0], {});
    ASSERT_EQ(r.info, sc.decode(llr, spec.frozen[0]));
    EXPECT_TRUE(r.crc_ok);
  }
}

TEST(Decoder, ScMatchesMlOracleOnMostNoisyWords) {
  // N = 8, K = 4: enumerate all 16 codewords; SC is not ML, so only agreement
  // statistics are asserted and disagreements are counted, not failed.
  const PolarSpec spec = ga_code(8, 4, 2.0);
  std::mt19937_64 rng(12);
  int agree = 0, sc_errors = 0, ml_errors = 0;
  const int trials = 5000;
  for (int t = 0; t < trials; ++t) {
    const Bits info = random_bits(4, rng);
    const auto llr = awgn_llrs(polar_encode(info, spec, 0), 0.9, rng);
    Bits best;
    double best_corr = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < 16; ++c) {
      const Bits cand{static_cast<std::uint8_t>(c & 1), static_cast<std::uint8_t>((c >> 1) & 1),
                      static_cast<std::uint8_t>((c >> 2) & 1), static_cast<std::uint8_t>((c >> 3) & 1)};
      const Bits x = polar_encode(cand, spec, 0);
      double corr = 0.0;
      for (int i = 0; i < 8; ++i) corr += x[i] ? -llr[i] : llr[i];
      if (corr > best_corr) {
        best_corr = corr;
        best = cand;
      }
    }
    const Bits sc = sc_decode(llr, spec, 0);
    agree += sc == best;
    sc_errors += sc != info;
    ml_errors += best != info;
  }
  EXPECT_GT(agree, trials * 9 / 10);
  EXPECT_LE(ml_errors, sc_errors);
  // a list of all 2^K paths is exhaustive, so SCL(16) must be ML
  ScListDecoder full(8, 16);
  for (int t = 0; t < 500; ++t) {
    const Bits info = random_bits(4, rng);
    const auto llr = awgn_llrs(polar_encode(info, spec, 0), 0.9, rng);
    const Bits got = full.decode(llr, spec.frozen[0], {}).info;
    double got_corr = 0.0, best_corr = -1e300;
    const Bits xg = polar_encode(got, spec, 0);
    for (int i = 0; i < 8; ++i) got_corr += xg[i] ? -llr[i] : llr[i];
    for (int c = 0; c < 16; ++c) {
      const Bits cand{static_cast<std::uint8_t>(c & 1), static_cast<std::uint8_t>((c >> 1) & 1),
                      static_cast<std::uint8_t>((c >> 2) & 1), static_cast<std::uint8_t>((c >> 3) & 1)};
      const Bits x = polar_encode(cand, spec, 0);
      double corr = 0.0;
      for (int i = 0; i < 8; ++i) corr += x[i] ? -llr[i] : llr[i];
      best_corr = std::max(best_corr, corr);
    }
    EXPECT_NEAR(got_corr, best_corr, 1e-9);
  }
}

TEST(Decoder, CaSclNoiselessWithCrc) {
  std::mt19937_64 rng(13);
  const PolarSpec spec = ga_code(64, 26, 3.0, kNrCrc6, 8);
  for (int t = 0; t < 200; ++t) {
    const Bits payload = random_bits(26, rng);
    const Bits info = crc_attach(payload, kNrCrc6);
    const auto r = ca_scl_decode(clamp_llrs(polar_encode(info, spec, 0)), spec, 0);
    EXPECT_TRUE(r.crc_ok);
    EXPECT_EQ(r.info, info);
  }
}

TEST(Decoder, CaSclNotWorseThanScOnPairedNoise) {
  // N = 8, K = 4 with a 2-bit CRC in the information set: paired trials
  const CrcPolynomial crc2{2, 0x7};
  const PolarSpec spec = ga_code(8, 4, 2.0, crc2, 8);
  std::mt19937_64 rng(14);
  ScDecoder sc(8);
  ScListDecoder scl(8, 8);
  long sc_err = 0, scl_err = 0;
  for (int t = 0; t < 100000; ++t) {
    const Bits info = crc_attach(random_bits(4, rng), crc2);
    const auto llr = awgn_llrs(polar_encode(info, spec, 0), 0.8, rng);
    sc_err += sc.decode(llr, spec.frozen[0]) != info;
    scl_err += scl.decode(llr, spec.frozen[0], crc2).info != info;
  }
  EXPECT_LE(scl_err, sc_err);
}

TEST(Decoder, ScalarAndAvx2DecodersAgree) {
  if (!kernels::supported(kernels::Isa::avx2)) GTEST_SKIP() << "no AVX2";
  std::mt19937_64 rng(15);
  const PolarSpec spec = ga_code(256, 128, 2.0, kNrCrc6, 8);
  ScDecoder sc(256);
  ScListDecoder scl(256, 8);
  const kernels::Isa before = kernels::active().isa;
  for (int t = 0; t < 300; ++t) {
    const Bits info = crc_attach(random_bits(128, rng), kNrCrc6);
    const auto llr = awgn_llrs(polar_encode(info, spec, 0), 0.85, rng);
    kernels::set_active(kernels::Isa::scalar);
    const Bits a = sc.decode(llr, spec.frozen[0]);
    const auto la = scl.decode(llr, spec.frozen[0], kNrCrc6);
    kernels::set_active(kernels::Isa::avx2);
    const Bits b = sc.decode(llr, spec.frozen[0]);
    const auto lb = scl.decode(llr, spec.frozen[0], kNrCrc6);
    ASSERT_EQ(a, b);
    ASSERT_EQ(la.info, lb.info);
    ASSERT_EQ(la.crc_ok, lb.crc_ok);
  }
  kernels::set_active(before);
}

// ---- Construction files -------------------------------------------------------------

TEST(InfoSetFile, RoundTrip) {
  ReliabilityProfile p;
  p.llr_means = {ga_evolve(1.0, 32), ga_evolve(5.0, 32)};
  const PolarSpec spec = make_polar_spec(32, 2, 20, select_info_sets(p, 32), kNrCrc6, 8);
  const PolarSpec back = parse_info_sets(format_info_sets(spec));
  EXPECT_EQ(back.info_sets, spec.info_sets);
  EXPECT_EQ(back.payload_bits, 20);
  EXPECT_EQ(back.crc.poly, 0x61u);
  EXPECT_EQ(back.list_size, 8);
  EXPECT_THROW(parse_info_sets("nonsense\n"), ContractViolation);
}

TEST(PolarSpec, Validation) {
  EXPECT_THROW(make_polar_spec(12, 1, 4, {{0, 1, 2, 3}}), ContractViolation);
  EXPECT_THROW(make_polar_spec(8, 1, 4, {{0, 1, 2}}), ContractViolation);
  EXPECT_THROW(make_polar_spec(8, 1, 2, {{0, 0}}), ContractViolation);
  EXPECT_THROW(make_polar_spec(8, 1, 1, {{9}}), ContractViolation);
  const PolarSpec ok = make_polar_spec(8, 2, 4, {{7}, {5, 6, 7}});
  EXPECT_DOUBLE_EQ(ok.rate(), 0.25);
}
