#pragma once

// Data-parallel inner loops used by the eigensolver and the density
// accumulations. Each kernel has a scalar reference and ISA-specific
// variants; the variant is chosen once at startup from CPUID (override with
// FRACLAB_SIMD=scalar|avx2|neon).

#include <cstddef>
#include <span>
#include <string_view>

namespace fraclab::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  /// sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// Plane rotation of two rows: (x, y) <- (c x - s y, s x + c y)
  void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
  /// acc[i] += x[i]^2
  void (*accumulate_squares)(const double* x, double* acc, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

/// Table selected for this process.
const KernelTable& active_kernels() noexcept;

/// Force a variant (tests, benchmarks). Returns false if unavailable.
bool select_isa(Isa isa) noexcept;

std::string_view to_string(Isa isa) noexcept;

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active_kernels().dot(x.data(), y.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(a, x.data(), y.data(), x.size());
}
inline void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  active_kernels().rotate(x.data(), y.data(), c, s, x.size());
}
inline void accumulate_squares(std::span<const double> x, std::span<double> acc) {
  active_kernels().accumulate_squares(x.data(), acc.data(), x.size());
}

namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept;
const KernelTable* neon_table_if_compiled() noexcept;
}  // namespace detail

}  // namespace fraclab::simd
