#pragma once

// QPSK mapping and the ML-SIC soft demapper.
//
// Bit packing: codeword bit 2t drives the real part (b0) and bit 2t+1 the
// imaginary part (b1) of symbol t; bit 0 maps to +1/sqrt2.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "polarprec/numerics.hpp"
#include "polarprec/polar_code.hpp"

namespace polarprec {

/// ((1 - 2 b0) + i (1 - 2 b1)) / sqrt2
Complex qpsk_map(std::uint8_t b0, std::uint8_t b1);

/// Maps a codeword of even length to codeword.size() / 2 symbols.
std::vector<Complex> map_codeword(std::span<const std::uint8_t> codeword);

/// Re-encodes decoded information bits and maps them back to symbols, for
/// interference cancellation.
std::vector<Complex> remap_stream(std::span<const std::uint8_t> decoded_info, const PolarSpec& spec, int stream);

/// Exact bit LLRs of the first stream of a tail of the effective channel,
/// marginalising over every joint QPSK assignment of the tail:
///   LLR(b) = ln sum_{s: b=0} exp(-|y - sqrt(es/M) G s|^2 / n0)
///          - ln sum_{s: b=1} (same).
/// Candidate points are precomputed once per (tail, es) so a frame's N slots
/// share them.
class MlsicDemapper {
 public:
  static constexpr int kMaxTail = 6;

  MlsicDemapper(const ComplexMatrix& g_tail, double es, double n0, int m_total);

  std::array<double, 2> llrs(const ComplexVector& y) const;
  /// One column of y per slot; writes 2 LLRs per slot in packing order.
  void demap(const ComplexMatrix& y, std::span<double> out) const;

  int hypotheses() const { return count_; }

 private:
  std::array<double, 2> from_metrics(std::span<const double> metrics) const;

  int rows_;
  int count_;
  double n0_;
  std::vector<double> points_;  // (2 * rows) x count, dimension-major
  mutable std::vector<double> y_;
  mutable std::vector<double> metrics_;
};

std::array<double, 2> mlsic_llrs(const ComplexVector& y, const ComplexMatrix& g_tail, double es, double n0,
                                 int m_total);

}  // namespace polarprec
