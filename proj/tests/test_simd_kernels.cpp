#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fraclab/linalg.hpp"
#include "fraclab/simd/kernels.hpp"
#include "fraclab/ssh_lattice.hpp"

using namespace fraclab;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

std::vector<const simd::KernelTable*> variants() {
  std::vector<const simd::KernelTable*> out;
  if (auto* t = simd::avx2_kernels()) out.push_back(t);
  if (auto* t = simd::neon_kernels()) out.push_back(t);
  return out;
}

struct IsaGuard {
  simd::Isa saved = simd::active_kernels().isa;
  ~IsaGuard() { simd::select_isa(saved); }
};

}  // namespace

TEST_CASE("scalar kernels match their definitions") {
  const auto& k = simd::scalar_kernels();
  std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  CHECK(k.dot(x.data(), y.data(), 3) == 32.0);
  k.axpy(2.0, x.data(), y.data(), 3);
  CHECK(y == std::vector<double>{6, 9, 12});
  std::vector<double> a{1, 0}, b{0, 1};
  k.rotate(a.data(), b.data(), 0.0, 1.0, 2);  // 90 degrees
  CHECK(a == std::vector<double>{0, -1});
  CHECK(b == std::vector<double>{1, 0});
  std::vector<double> acc{1, 1, 1};
  k.accumulate_squares(x.data(), acc.data(), 3);
  CHECK(acc == std::vector<double>{2, 5, 10});
}

TEST_CASE("SIMD variants agree with the scalar reference") {
  const auto& ref = simd::scalar_kernels();
  std::mt19937_64 rng(7);
  for (const auto* simd_table : variants()) {
    CAPTURE(simd::to_string(simd_table->isa));
    // Odd lengths and offsets exercise the remainder loops and unaligned loads.
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 65u, 257u}) {
      for (std::size_t offset : {0u, 1u, 3u}) {
        CAPTURE(n);
        CAPTURE(offset);
        auto xs = random_vector(rng, n + offset);
        auto ys = random_vector(rng, n + offset);
        const double* x = xs.data() + offset;
        const double* y = ys.data() + offset;

        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(x[i] * y[i]);
        CHECK(std::abs(simd_table->dot(x, y, n) - ref.dot(x, y, n)) <= 4e-16 * (scale + 1.0) * 8);

        auto y1 = ys, y2 = ys;
        simd_table->axpy(0.37, x, y1.data() + offset, n);
        ref.axpy(0.37, x, y2.data() + offset, n);
        for (std::size_t i = 0; i < n + offset; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));

        auto r1x = xs, r1y = ys, r2x = xs, r2y = ys;
        const double c = std::cos(0.3), s = std::sin(0.3);
        simd_table->rotate(r1x.data() + offset, r1y.data() + offset, c, s, n);
        ref.rotate(r2x.data() + offset, r2y.data() + offset, c, s, n);
        for (std::size_t i = 0; i < n + offset; ++i) {
          CHECK(std::abs(r1x[i] - r2x[i]) <= 1e-15);
          CHECK(std::abs(r1y[i] - r2y[i]) <= 1e-15);
        }

        auto a1 = ys, a2 = ys;
        simd_table->accumulate_squares(x, a1.data() + offset, n);
        ref.accumulate_squares(x, a2.data() + offset, n);
        for (std::size_t i = 0; i < n + offset; ++i) CHECK(std::abs(a1[i] - a2[i]) <= 1e-15);
      }
    }
  }
}

TEST_CASE("ISA selection") {
  IsaGuard guard;
  CHECK(simd::select_isa(simd::Isa::Scalar));
  CHECK(simd::active_kernels().isa == simd::Isa::Scalar);
  if (simd::avx2_kernels()) {
    CHECK(simd::select_isa(simd::Isa::Avx2));
    CHECK(simd::active_kernels().isa == simd::Isa::Avx2);
  } else {
    CHECK_FALSE(simd::select_isa(simd::Isa::Avx2));
  }
}

TEST_CASE("full lattice pipeline agrees across kernel variants") {
  IsaGuard guard;
  lattice::ChainConfig cfg;
  cfg.sites = 120;
  cfg.walls = {30, 90};
  cfg.xi = 3;
  cfg.delta_t = 0.2;
  const lattice::Window window{0, 60};

  REQUIRE(simd::select_isa(simd::Isa::Scalar));
  const auto ref = lattice::analyze(cfg, window);
  for (const auto* t : variants()) {
    REQUIRE(simd::select_isa(t->isa));
    const auto got = lattice::analyze(cfg, window);
    CHECK(got.zero_mode_count == ref.zero_mode_count);
    CHECK(std::abs(got.charge - ref.charge) < 1e-12);
    CHECK(std::abs(got.total_charge - ref.total_charge) < 1e-12);
  }
}
