#include "polarprec/modem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polarprec/kernels.hpp"

namespace polarprec {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Complex symbol_of(int index) { return qpsk_map(index & 1, (index >> 1) & 1); }
}  // namespace

Complex qpsk_map(std::uint8_t b0, std::uint8_t b1) {
  return {(b0 & 1u ? -1.0 : 1.0) * kInvSqrt2, (b1 & 1u ? -1.0 : 1.0) * kInvSqrt2};
}

std::vector<Complex> map_codeword(std::span<const std::uint8_t> codeword) {
  if (codeword.size() % 2 != 0) throw ContractViolation("map_codeword: odd bit count");
  std::vector<Complex> out(codeword.size() / 2);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = qpsk_map(codeword[2 * t], codeword[2 * t + 1]);
  return out;
}

std::vector<Complex> remap_stream(std::span<const std::uint8_t> decoded_info, const PolarSpec& spec, int stream) {
  return map_codeword(polar_encode(decoded_info, spec, stream));
}

MlsicDemapper::MlsicDemapper(const ComplexMatrix& g_tail, double es, double n0, int m_total)
    : rows_(static_cast<int>(g_tail.rows())), count_(0), n0_(n0) {
  const int tail = static_cast<int>(g_tail.cols());
  if (tail < 1) throw ContractViolation("mlsic: empty channel tail");
  if (tail > kMaxTail) throw ContractViolation("mlsic: tail too long for exhaustive marginalisation");
  if (!(n0 > 0.0)) throw ContractViolation("mlsic: noise variance must be positive");
  if (m_total < tail) throw ContractViolation("mlsic: tail longer than the stream count");

  count_ = 1 << (2 * tail);
  const double amp = std::sqrt(es / static_cast<double>(m_total));
  points_.assign(static_cast<std::size_t>(2 * rows_) * count_, 0.0);
  for (int h = 0; h < count_; ++h) {
    for (int r = 0; r < rows_; ++r) {
      Complex acc = 0.0;
      for (int t = 0; t < tail; ++t) acc += g_tail(r, t) * symbol_of((h >> (2 * t)) & 3);
      acc *= amp;
      points_[static_cast<std::size_t>(2 * r) * count_ + h] = acc.real();
      points_[static_cast<std::size_t>(2 * r + 1) * count_ + h] = acc.imag();
    }
  }
  y_.resize(2 * rows_);
  metrics_.resize(count_);
}

std::array<double, 2> MlsicDemapper::from_metrics(std::span<const double> metrics) const {
  // Group hypotheses by the leading stream's symbol (h & 3), log-sum-exp
  // within each group, then combine groups per bit.
  std::array<double, 4> peak;
  peak.fill(-std::numeric_limits<double>::infinity());
  for (int h = 0; h < count_; ++h) peak[h & 3] = std::max(peak[h & 3], -metrics[h] / n0_);
  std::array<double, 4> sum{};
  for (int h = 0; h < count_; ++h) sum[h & 3] += std::exp(-metrics[h] / n0_ - peak[h & 3]);
  std::array<double, 4> lse;
  for (int g = 0; g < 4; ++g) lse[g] = peak[g] + std::log(sum[g]);

  auto combine = [](double a, double b) {
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
  };
  // b0 = g & 1, b1 = g >> 1
  const double b0_zero = combine(lse[0], lse[2]);
  const double b0_one = combine(lse[1], lse[3]);
  const double b1_zero = combine(lse[0], lse[1]);
  const double b1_one = combine(lse[2], lse[3]);
  return {b0_zero - b0_one, b1_zero - b1_one};
}

std::array<double, 2> MlsicDemapper::llrs(const ComplexVector& y) const {
  if (y.size() != rows_) throw ContractViolation("mlsic: observation length mismatch");
  for (int r = 0; r < rows_; ++r) {
    y_[2 * r] = y[r].real();
    y_[2 * r + 1] = y[r].imag();
  }
  kernels::active().squared_distances(y_, points_, metrics_);
  return from_metrics(metrics_);
}

void MlsicDemapper::demap(const ComplexMatrix& y, std::span<double> out) const {
  if (y.rows() != rows_ || out.size() != static_cast<std::size_t>(2 * y.cols()))
    throw ContractViolation("mlsic: block dimension mismatch");
  const auto& k = kernels::active();
  for (Eigen::Index t = 0; t < y.cols(); ++t) {
    for (int r = 0; r < rows_; ++r) {
      y_[2 * r] = y(r, t).real();
      y_[2 * r + 1] = y(r, t).imag();
    }
    k.squared_distances(y_, points_, metrics_);
    const auto pair = from_metrics(metrics_);
    out[2 * t] = pair[0];
    out[2 * t + 1] = pair[1];
  }
}

std::array<double, 2> mlsic_llrs(const ComplexVector& y, const ComplexMatrix& g_tail, double es, double n0,
                                 int m_total) {
  return MlsicDemapper(g_tail, es, n0, m_total).llrs(y);
}

}  // namespace polarprec
