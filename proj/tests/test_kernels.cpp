#include <bit>
#include <vector>

#include "doctest.h"
#include "homtest/errors.hpp"
#include "homtest/kernels.hpp"
#include "homtest/rng.hpp"

using namespace homtest;
namespace k = homtest::kernels;

namespace {

std::vector<std::uint8_t> digits(std::size_t len, std::uint32_t p, Rng& rng) {
  std::vector<std::uint8_t> v(len);
  for (auto& d : v) d = static_cast<std::uint8_t>(rng.below(p));
  return v;
}

const std::uint32_t kPrimes[] = {2, 3, 5, 7, 13, 17, 31, 97, 127, 131, 251};

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar kernels match modular arithmetic") {
    Rng rng(11);
    const auto& s = k::scalar_table();
    for (std::uint32_t p : kPrimes) {
      for (std::size_t len : {0u, 1u, 7u, 32u, 33u, 100u}) {
        auto a = digits(len, p, rng), b = digits(len, p, rng);
        std::vector<std::uint8_t> out(len);
        s.add_mod(out.data(), a.data(), b.data(), len, static_cast<std::uint8_t>(p));
        for (std::size_t i = 0; i < len; ++i) CHECK(out[i] == (a[i] + b[i]) % p);
        s.sub_mod(out.data(), a.data(), b.data(), len, static_cast<std::uint8_t>(p));
        for (std::size_t i = 0; i < len; ++i) CHECK(out[i] == (a[i] + p - b[i]) % p);
        const auto c = static_cast<std::uint8_t>(rng.below(p));
        s.scale_mod(out.data(), a.data(), c, len, static_cast<std::uint8_t>(p));
        for (std::size_t i = 0; i < len; ++i) CHECK(out[i] == (a[i] * c) % p);
      }
    }
  }

  TEST_CASE("walsh-hadamard matches the quadratic definition") {
    Rng rng(12);
    for (std::size_t n = 1; n <= 256; n *= 2) {
      std::vector<std::int32_t> in(n);
      for (auto& x : in) x = static_cast<std::int32_t>(rng.below(7)) - 3;
      std::vector<std::int32_t> expect(n, 0);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t x = 0; x < n; ++x) expect[a] += (std::popcount(a & x) % 2 ? -1 : 1) * in[x];
      }
      for (const k::Table* t : {&k::scalar_table(), &k::avx2_table()}) {
        auto out = in;
        t->walsh_hadamard(out.data(), n);
        CHECK(out == expect);
      }
    }
  }

  TEST_CASE("avx2 kernels are equivalent to the scalar reference") {
    if (!k::supported(k::Isa::Avx2)) {
      MESSAGE("AVX2 unavailable; equivalence not exercised");
      return;
    }
    Rng rng(13);
    const auto& s = k::scalar_table();
    const auto& v = k::avx2_table();
    for (std::uint32_t p : kPrimes) {
      for (std::size_t len = 0; len <= 130; ++len) {
        auto a = digits(len, p, rng), b = digits(len, p, rng);
        std::vector<std::uint8_t> x(len), y(len);
        const auto pp = static_cast<std::uint8_t>(p);
        s.add_mod(x.data(), a.data(), b.data(), len, pp);
        v.add_mod(y.data(), a.data(), b.data(), len, pp);
        CHECK(x == y);
        s.sub_mod(x.data(), a.data(), b.data(), len, pp);
        v.sub_mod(y.data(), a.data(), b.data(), len, pp);
        CHECK(x == y);
        for (std::uint32_t c = 0; c < std::min<std::uint32_t>(p, 20); ++c) {
          s.scale_mod(x.data(), a.data(), static_cast<std::uint8_t>(c), len, pp);
          v.scale_mod(y.data(), a.data(), static_cast<std::uint8_t>(c), len, pp);
          CHECK(x == y);
        }
        std::vector<std::uint8_t> ra(len), rb(len);
        for (std::size_t i = 0; i < len; ++i) {
          ra[i] = static_cast<std::uint8_t>(rng());
          rb[i] = static_cast<std::uint8_t>(rng());
        }
        s.xor_bytes(x.data(), ra.data(), rb.data(), len);
        v.xor_bytes(y.data(), ra.data(), rb.data(), len);
        CHECK(x == y);
      }
    }
    for (std::size_t n = 1; n <= 4096; n *= 2) {
      std::vector<std::int32_t> in(n);
      for (auto& e : in) e = static_cast<std::int32_t>(rng.below(3)) - 1;
      auto x = in, y = in;
      s.walsh_hadamard(x.data(), n);
      v.walsh_hadamard(y.data(), n);
      CHECK(x == y);
    }
  }

  TEST_CASE("kernel selection") {
    const k::Isa before = k::active_isa();
    k::select(k::Isa::Scalar);
    CHECK(k::active_isa() == k::Isa::Scalar);
    CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
    if (k::supported(k::Isa::Avx2)) {
      k::select(k::Isa::Avx2);
      CHECK(k::active_isa() == k::Isa::Avx2);
    } else {
      CHECK_THROWS_AS(k::select(k::Isa::Avx2), DomainError);
    }
    k::select(before);
  }
}
