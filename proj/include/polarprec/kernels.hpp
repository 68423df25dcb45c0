#pragma once

// Data-parallel inner loops of the decoder and the soft demapper.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. The variant is picked once at runtime from CPUID; the environment
// variable POLARPREC_ISA=scalar|avx2 overrides the choice. The check node,
// the bit node and the XOR are bit-exact across variants; the
// squared-distance kernel may differ in the last ulp because of FMA.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace polarprec::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // out[i] = 2 atanh(tanh(a[i]/2) tanh(b[i]/2)), evaluated as
  // sign(a) sign(b) min(|a|, |b|) + ln(1 + e^{-|a+b|}) - ln(1 + e^{-|a-b|})
  void (*check_node)(std::span<const double> a, std::span<const double> b, std::span<double> out);
  // out[i] = b[i] + (1 - 2 u[i]) a[i]
  void (*bit_node)(std::span<const double> a, std::span<const double> b,
                   std::span<const std::uint8_t> u, std::span<double> out);
  // acc[i] ^= rhs[i]
  void (*xor_into)(std::span<std::uint8_t> acc, std::span<const std::uint8_t> rhs);
  // out[h] = sum_d (y[d] - points[d * out.size() + h])^2, points stored
  // dimension-major (structure of arrays).
  void (*squared_distances)(std::span<const double> y, std::span<const double> points,
                            std::span<double> out);
};

bool supported(Isa isa);
std::string_view name(Isa isa);

/// Table for a specific instruction set; throws std::runtime_error when the
/// CPU or the build lacks it.
const KernelTable& table(Isa isa);

/// The table selected for this process.
const KernelTable& active();
/// Replaces the process-wide selection; for equivalence tests and benchmarks.
/// Not meant to be called while decoders are running on other threads.
void set_active(Isa isa);

namespace scalar {
/// ln(1 + e^{-x}) for x >= 0, to about 1e-16 absolute.
double boxplus_correction(double x);
void check_node(std::span<const double> a, std::span<const double> b, std::span<double> out);
void bit_node(std::span<const double> a, std::span<const double> b, std::span<const std::uint8_t> u,
              std::span<double> out);
void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> rhs);
void squared_distances(std::span<const double> y, std::span<const double> points, std::span<double> out);
}  // namespace scalar

#if defined(POLARPREC_HAVE_AVX2)
namespace avx2 {
void check_node(std::span<const double> a, std::span<const double> b, std::span<double> out);
void bit_node(std::span<const double> a, std::span<const double> b, std::span<const std::uint8_t> u,
              std::span<double> out);
void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> rhs);
void squared_distances(std::span<const double> y, std::span<const double> points, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace polarprec::kernels
