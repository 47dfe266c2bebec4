#include <atomic>
#include <cstdlib>
#include <string_view>

#include "fraclab/simd/kernels.hpp"

namespace fraclab::simd {

namespace detail {
#if !defined(FRACLAB_HAVE_AVX2)
const KernelTable* avx2_table_if_compiled() noexcept { return nullptr; }
#endif
#if !defined(FRACLAB_HAVE_NEON)
const KernelTable* neon_table_if_compiled() noexcept { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() noexcept {
#if defined(FRACLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_default() noexcept {
  const char* env = std::getenv("FRACLAB_SIMD");
  const std::string_view request = env ? env : "";
  if (request == "scalar") return &scalar_kernels();
  if (request == "avx2") {
    if (auto* t = avx2_kernels()) return t;
  }
  if (request == "neon") {
    if (auto* t = neon_kernels()) return t;
  }
  if (auto* t = avx2_kernels()) return t;
  if (auto* t = neon_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{pick_default()};
  return slot;
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
  static const bool ok = cpu_has_avx2();
  return ok ? detail::avx2_table_if_compiled() : nullptr;
}

// Advanced SIMD is mandatory on AArch64.
const KernelTable* neon_kernels() noexcept { return detail::neon_table_if_compiled(); }

const KernelTable& active_kernels() noexcept {
  return *active_slot().load(std::memory_order_relaxed);
}

bool select_isa(Isa isa) noexcept {
  const KernelTable* t = nullptr;
  switch (isa) {
    case Isa::Scalar: t = &scalar_kernels(); break;
    case Isa::Avx2: t = avx2_kernels(); break;
    case Isa::Neon: t = neon_kernels(); break;
  }
  if (!t) return false;
  active_slot().store(t, std::memory_order_relaxed);
  return true;
}

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace fraclab::simd
