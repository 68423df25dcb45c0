#include "polarprec/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "boxplus_poly.hpp"

namespace polarprec::kernels::scalar {

namespace {
constexpr std::uint64_t kSignMask = 0x8000000000000000ULL;

double abs_bits(double x) { return std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) & ~kSignMask); }
}  // namespace

double boxplus_correction(double x) {
  using namespace detail;
  x = std::min(x, kCorrectionCap);
  const double z = -x;
  const double k = std::nearbyint(z * kLog2e);
  const double r = (z - k * kLn2Hi) - k * kLn2Lo;
  double p = kExp[0];
  for (std::size_t j = 1; j < kExp.size(); ++j) p = p * r + kExp[j];
  const auto scale = std::bit_cast<double>(static_cast<std::uint64_t>(static_cast<std::int64_t>(k) + 1023) << 52);
  const double t = p * scale;

  const double s = t / (2.0 + t);
  const double s2 = s * s;
  double q = kAtanh[0];
  for (std::size_t j = 1; j < kAtanh.size(); ++j) q = q * s2 + kAtanh[j];
  return (2.0 * s) * q;
}

void check_node(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto ab = std::bit_cast<std::uint64_t>(a[i]);
    const auto bb = std::bit_cast<std::uint64_t>(b[i]);
    const double mag = std::min(std::bit_cast<double>(ab & ~kSignMask), std::bit_cast<double>(bb & ~kSignMask));
    const double minsum = std::bit_cast<double>(std::bit_cast<std::uint64_t>(mag) | ((ab ^ bb) & kSignMask));
    out[i] = (minsum + boxplus_correction(abs_bits(a[i] + b[i]))) - boxplus_correction(abs_bits(a[i] - b[i]));
  }
}

void bit_node(std::span<const double> a, std::span<const double> b, std::span<const std::uint8_t> u,
              std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] ? b[i] - a[i] : b[i] + a[i];
}

void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> rhs) {
  const std::size_t n = acc.size();
  for (std::size_t i = 0; i < n; ++i) acc[i] ^= rhs[i];
}

void squared_distances(std::span<const double> y, std::span<const double> points, std::span<double> out) {
  const std::size_t count = out.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t d = 0; d < y.size(); ++d) {
    const double* row = points.data() + d * count;
    for (std::size_t h = 0; h < count; ++h) {
      const double diff = y[d] - row[h];
      out[h] += diff * diff;
    }
  }
}

}  // namespace polarprec::kernels::scalar
