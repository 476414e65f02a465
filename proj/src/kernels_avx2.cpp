#include "homtest/kernels.hpp"

#include <cstring>

#if defined(HOMTEST_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace homtest::kernels {

#if defined(HOMTEST_HAVE_AVX2)

namespace {

// Runs body on 32-byte blocks; a short tail is staged through zeroed buffers.
template <class Body>
inline void blocks2(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len,
                    Body body) {
  std::size_t i = 0;
  for (; i + 32 <= len; i += 32) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), body(va, vb));
  }
  if (i < len) {
    alignas(32) std::uint8_t ta[32] = {};
    alignas(32) std::uint8_t tb[32] = {};
    std::memcpy(ta, a + i, len - i);
    std::memcpy(tb, b + i, len - i);
    __m256i r = body(_mm256_load_si256(reinterpret_cast<const __m256i*>(ta)),
                     _mm256_load_si256(reinterpret_cast<const __m256i*>(tb)));
    _mm256_store_si256(reinterpret_cast<__m256i*>(ta), r);
    std::memcpy(dst + i, ta, len - i);
  }
}

void add_mod(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len,
             std::uint8_t p) {
  if (p > 128) {
    scalar_table().add_mod(dst, a, b, len, p);
    return;
  }
  const __m256i vp = _mm256_set1_epi8(static_cast<char>(p));
  blocks2(dst, a, b, len, [vp](__m256i x, __m256i y) {
    __m256i s = _mm256_add_epi8(x, y);
    return _mm256_min_epu8(s, _mm256_sub_epi8(s, vp));
  });
}

void sub_mod(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len,
             std::uint8_t p) {
  if (p > 128) {
    scalar_table().sub_mod(dst, a, b, len, p);
    return;
  }
  const __m256i vp = _mm256_set1_epi8(static_cast<char>(p));
  blocks2(dst, a, b, len, [vp](__m256i x, __m256i y) {
    __m256i d = _mm256_sub_epi8(x, y);
    return _mm256_min_epu8(d, _mm256_add_epi8(d, vp));
  });
}

void xor_bytes(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len) {
  blocks2(dst, a, b, len, [](__m256i x, __m256i y) { return _mm256_xor_si256(x, y); });
}

__m256i reduce16(__m256i x, __m256i magic, __m256i vp) {
  __m256i q = _mm256_mulhi_epu16(x, magic);
  __m256i r = _mm256_sub_epi16(x, _mm256_mullo_epi16(q, vp));
  return _mm256_min_epu16(r, _mm256_sub_epi16(r, vp));
}

void scale_mod(std::uint8_t* dst, const std::uint8_t* a, std::uint8_t c, std::size_t len,
               std::uint8_t p) {
  if (p > 127) {
    scalar_table().scale_mod(dst, a, c, len, p);
    return;
  }
  if (p <= 16) {
    alignas(16) std::uint8_t lut[16] = {};
    for (unsigned d = 0; d < p; ++d) lut[d] = static_cast<std::uint8_t>((d * c) % p);
    const __m256i vlut =
        _mm256_broadcastsi128_si256(_mm_load_si128(reinterpret_cast<const __m128i*>(lut)));
    blocks2(dst, a, a, len, [vlut](__m256i x, __m256i) { return _mm256_shuffle_epi8(vlut, x); });
    return;
  }
  const __m256i vc = _mm256_set1_epi16(c);
  const __m256i vp = _mm256_set1_epi16(p);
  const __m256i magic = _mm256_set1_epi16(static_cast<short>(65536 / p));
  blocks2(dst, a, a, len, [=](__m256i x, __m256i) {
    __m256i lo = _mm256_cvtepu8_epi16(_mm256_castsi256_si128(x));
    __m256i hi = _mm256_cvtepu8_epi16(_mm256_extracti128_si256(x, 1));
    lo = reduce16(_mm256_mullo_epi16(lo, vc), magic, vp);
    hi = reduce16(_mm256_mullo_epi16(hi, vc), magic, vp);
    return _mm256_permute4x64_epi64(_mm256_packus_epi16(lo, hi), 0xD8);
  });
}

void walsh_hadamard(std::int32_t* data, std::size_t n) {
  if (n < 16) {
    scalar_table().walsh_hadamard(data, n);
    return;
  }
  // Strides below 8 stay inside one register; do them with the scalar loop.
  for (std::size_t h = 1; h < 8; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        std::int32_t x = data[j];
        std::int32_t y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
    }
  }
  for (std::size_t h = 8; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; j += 8) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + j));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + j + h));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(data + j), _mm256_add_epi32(x, y));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(data + j + h), _mm256_sub_epi32(x, y));
      }
    }
  }
}

}  // namespace

const Table& avx2_table() {
  static const Table table{add_mod, sub_mod, scale_mod, xor_bytes, walsh_hadamard};
  return table;
}

#else

const Table& avx2_table() { return scalar_table(); }

#endif

}  // namespace homtest::kernels
