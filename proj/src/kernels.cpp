#include "homtest/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "homtest/errors.hpp"

namespace homtest::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(HOMTEST_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("HOMTEST_ISA");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

bool supported(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

const Table& active() {
  return current().load(std::memory_order_relaxed) == Isa::Avx2 ? avx2_table() : scalar_table();
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (!supported(isa)) throw DomainError("kernel set not supported on this CPU: " + isa_name(isa));
  current().store(isa, std::memory_order_relaxed);
}

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace homtest::kernels
