#include "homtest/kernels.hpp"

namespace homtest::kernels {

namespace {

void add_mod(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len,
             std::uint8_t p) {
  for (std::size_t i = 0; i < len; ++i) {
    unsigned s = unsigned{a[i]} + b[i];
    dst[i] = static_cast<std::uint8_t>(s >= p ? s - p : s);
  }
}

void sub_mod(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len,
             std::uint8_t p) {
  for (std::size_t i = 0; i < len; ++i) {
    dst[i] = static_cast<std::uint8_t>(a[i] >= b[i] ? a[i] - b[i] : a[i] + p - b[i]);
  }
}

void scale_mod(std::uint8_t* dst, const std::uint8_t* a, std::uint8_t c, std::size_t len,
               std::uint8_t p) {
  for (std::size_t i = 0; i < len; ++i) {
    dst[i] = static_cast<std::uint8_t>((unsigned{a[i]} * c) % p);
  }
}

void xor_bytes(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) dst[i] = a[i] ^ b[i];
}

void walsh_hadamard(std::int32_t* data, std::size_t n) {
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        std::int32_t x = data[j];
        std::int32_t y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
    }
  }
}

}  // namespace

const Table& scalar_table() {
  static const Table table{add_mod, sub_mod, scale_mod, xor_bytes, walsh_hadamard};
  return table;
}

}  // namespace homtest::kernels
