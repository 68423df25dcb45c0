#include "polarprec/kernels.hpp"

#if defined(POLARPREC_HAVE_AVX2)

#include <cstring>
#include <immintrin.h>

#include "boxplus_poly.hpp"

namespace polarprec::kernels::avx2 {

namespace {

// Lane-wise copy of scalar::boxplus_correction.
__m256d boxplus_correction(__m256d x) {
  using namespace detail;
  x = _mm256_min_pd(x, _mm256_set1_pd(kCorrectionCap));
  const __m256d z = _mm256_sub_pd(_mm256_setzero_pd(), x);
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(z, _mm256_set1_pd(kLog2e)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_sub_pd(_mm256_sub_pd(z, _mm256_mul_pd(k, _mm256_set1_pd(kLn2Hi))),
                                  _mm256_mul_pd(k, _mm256_set1_pd(kLn2Lo)));
  __m256d p = _mm256_set1_pd(kExp[0]);
  for (std::size_t j = 1; j < kExp.size(); ++j) p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(kExp[j]));
  const __m256i ki = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(ki, _mm256_set1_epi64x(1023)), 52));
  const __m256d t = _mm256_mul_pd(p, scale);

  const __m256d s = _mm256_div_pd(t, _mm256_add_pd(_mm256_set1_pd(2.0), t));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d q = _mm256_set1_pd(kAtanh[0]);
  for (std::size_t j = 1; j < kAtanh.size(); ++j) q = _mm256_add_pd(_mm256_mul_pd(q, s2), _mm256_set1_pd(kAtanh[j]));
  return _mm256_mul_pd(_mm256_add_pd(s, s), q);
}

}  // namespace

void check_node(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a.data() + i);
    const __m256d vb = _mm256_loadu_pd(b.data() + i);
    const __m256d mag = _mm256_min_pd(_mm256_andnot_pd(sign, va), _mm256_andnot_pd(sign, vb));
    const __m256d s = _mm256_and_pd(_mm256_xor_pd(va, vb), sign);
    const __m256d plus = boxplus_correction(_mm256_andnot_pd(sign, _mm256_add_pd(va, vb)));
    const __m256d minus = boxplus_correction(_mm256_andnot_pd(sign, _mm256_sub_pd(va, vb)));
    _mm256_storeu_pd(out.data() + i, _mm256_sub_pd(_mm256_add_pd(_mm256_or_pd(mag, s), plus), minus));
  }
  if (i < n) scalar::check_node(a.subspan(i), b.subspan(i), out.subspan(i));
}

void bit_node(std::span<const double> a, std::span<const double> b, std::span<const std::uint8_t> u,
              std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    std::int32_t packed;
    std::memcpy(&packed, u.data() + i, sizeof(packed));
    const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
    const __m256d flip = _mm256_andnot_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(wide, zero)), sign);
    const __m256d va = _mm256_xor_pd(_mm256_loadu_pd(a.data() + i), flip);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(_mm256_loadu_pd(b.data() + i), va));
  }
  if (i < n) scalar::bit_node(a.subspan(i), b.subspan(i), u.subspan(i), out.subspan(i));
}

void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> rhs) {
  const std::size_t n = acc.size();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    auto* dst = reinterpret_cast<__m256i*>(acc.data() + i);
    const auto* src = reinterpret_cast<const __m256i*>(rhs.data() + i);
    _mm256_storeu_si256(dst, _mm256_xor_si256(_mm256_loadu_si256(dst), _mm256_loadu_si256(src)));
  }
  if (i < n) scalar::xor_into(acc.subspan(i), rhs.subspan(i));
}

void squared_distances(std::span<const double> y, std::span<const double> points, std::span<double> out) {
  const std::size_t count = out.size();
  const std::size_t dims = y.size();
  std::size_t h = 0;
  for (; h + 4 <= count; h += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < dims; ++d) {
      const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(y[d]), _mm256_loadu_pd(points.data() + d * count + h));
      acc = _mm256_fmadd_pd(diff, diff, acc);
    }
    _mm256_storeu_pd(out.data() + h, acc);
  }
  for (; h < count; ++h) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const double diff = y[d] - points[d * count + h];
      acc += diff * diff;
    }
    out[h] = acc;
  }
}

}  // namespace polarprec::kernels::avx2

#endif
