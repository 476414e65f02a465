#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Data-parallel kernels behind the vector-space arithmetic and the exact distance
// transform. Every kernel has a scalar reference; an AVX2 variant is picked at
// runtime when the CPU supports it.
namespace homtest::kernels {

enum class Isa { Scalar, Avx2 };

struct Table {
  // Digit vectors over F_p, one byte per digit, digits already reduced.
  void (*add_mod)(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len,
                  std::uint8_t p);
  void (*sub_mod)(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len,
                  std::uint8_t p);
  void (*scale_mod)(std::uint8_t* dst, const std::uint8_t* a, std::uint8_t c, std::size_t len,
                    std::uint8_t p);
  void (*xor_bytes)(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t len);
  // In-place unnormalized Walsh-Hadamard transform; n must be a power of two.
  void (*walsh_hadamard)(std::int32_t* data, std::size_t n);
};

const Table& scalar_table();
const Table& avx2_table();  // falls back to scalar entries when built without AVX2

bool supported(Isa isa);
const Table& active();
Isa active_isa();
// Forces a kernel set; throws DomainError when the CPU lacks it.
void select(Isa isa);
std::string isa_name(Isa isa);

}  // namespace homtest::kernels
