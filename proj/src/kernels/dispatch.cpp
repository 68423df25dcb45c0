#include "polarprec/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace polarprec::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::check_node, &scalar::bit_node, &scalar::xor_into,
                              &scalar::squared_distances};

#if defined(POLARPREC_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::check_node, &avx2::bit_node, &avx2::xor_into,
                            &avx2::squared_distances};
#endif

const KernelTable& select_at_startup() {
  if (const char* forced = std::getenv("POLARPREC_ISA")) {
    const std::string want(forced);
    if (want == "scalar") return kScalar;
    if (want == "avx2") return table(Isa::avx2);
    throw std::runtime_error("POLARPREC_ISA: unknown value '" + want + "'");
  }
  return supported(Isa::avx2) ? table(Isa::avx2) : kScalar;
}

}  // namespace

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(POLARPREC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) throw std::runtime_error("kernel set not available: " + std::string(name(isa)));
  switch (isa) {
    case Isa::scalar:
      return kScalar;
    case Isa::avx2:
#if defined(POLARPREC_HAVE_AVX2)
      return kAvx2;
#else
      break;
#endif
  }
  return kScalar;
}

namespace {
std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> selected{&select_at_startup()};
  return selected;
}
}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

void set_active(Isa isa) { current().store(&table(isa), std::memory_order_relaxed); }

}  // namespace polarprec::kernels
