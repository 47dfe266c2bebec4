#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/linalg.hpp"

using namespace fraclab;
using linalg::DenseMatrix;

namespace {

DenseMatrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  DenseMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

// Independent route: Eigen's self-adjoint solver.
Eigen::VectorXd oracle_eigenvalues(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a(i, j);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

double residual(const DenseMatrix& a, const linalg::EigenSystem& es) {
  const std::size_t n = a.size();
  double worst = 0.0;
  std::vector<double> av(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = es.vectors.row(k);
    linalg::multiply(a, v, av);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += (av[i] - es.values[k] * v[i]) * (av[i] - es.values[k] * v[i]);
    worst = std::max(worst, std::sqrt(r));
    for (std::size_t j = 0; j < n; ++j) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += v[i] * es.vectors(j, i);
      worst = std::max(worst, std::abs(d - (j == k ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("2x2 by hand") {
  DenseMatrix a(2);
  a(0, 1) = a(1, 0) = -1.0;
  const auto es = linalg::symmetric_eigen(a);
  CHECK(es.values[0] == doctest::Approx(-1.0));
  CHECK(es.values[1] == doctest::Approx(1.0));
  const double r = 1.0 / std::sqrt(2.0);
  // E = -1: (1, 1)/sqrt2, E = +1: (1, -1)/sqrt2 up to the sign rule
  // (first of the tied largest components positive).
  CHECK(es.vectors(0, 0) == doctest::Approx(r));
  CHECK(es.vectors(0, 1) == doctest::Approx(r));
  CHECK(es.vectors(1, 0) == doctest::Approx(r));
  CHECK(es.vectors(1, 1) == doctest::Approx(-r));
}

TEST_CASE("random symmetric matrices against Eigen") {
  std::mt19937_64 rng(42);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 17u, 40u, 101u}) {
    CAPTURE(n);
    const auto a = random_symmetric(rng, n);
    const auto es = linalg::symmetric_eigen(a);
    const auto ref = oracle_eigenvalues(a);
    CHECK(std::is_sorted(es.values.begin(), es.values.end()));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(es.values[i] - ref[static_cast<Eigen::Index>(i)]) < 1e-11);
    CHECK(residual(a, es) < 1e-12 * (a.norm_inf() + 1.0));
  }
}

TEST_CASE("tridiagonal path") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::size_t n = 64;
  std::vector<double> d(n), e(n - 1);
  for (double& x : d) x = u(rng);
  for (double& x : e) x = u(rng);
  DenseMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = d[i];
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = e[i];

  const auto es = linalg::tridiagonal_eigen(d, e);
  const auto ref = oracle_eigenvalues(a);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(es.values[i] - ref[static_cast<Eigen::Index>(i)]) < 1e-12);
  CHECK(residual(a, es) < 1e-12);

  CHECK_THROWS_AS(linalg::tridiagonal_eigen(d, std::span<const double>(e).first(3)), Error);
}

TEST_CASE("degenerate spectra and exact zeros") {
  // Identity, zero matrix and a block-diagonal matrix with repeated values.
  for (std::size_t n : {4u, 9u}) {
    const auto id = DenseMatrix::identity(n);
    const auto es = linalg::symmetric_eigen(id);
    for (double v : es.values) CHECK(v == doctest::Approx(1.0));
    CHECK(residual(id, es) < 1e-14);

    const DenseMatrix zero(n);
    const auto ez = linalg::symmetric_eigen(zero);
    for (double v : ez.values) CHECK(v == 0.0);
  }
}

TEST_CASE("sign convention: largest component positive, deterministic") {
  std::mt19937_64 rng(11);
  const auto a = random_symmetric(rng, 30);
  const auto e1 = linalg::symmetric_eigen(a);
  const auto e2 = linalg::symmetric_eigen(a);
  CHECK(e1.values == e2.values);
  CHECK(e1.vectors == e2.vectors);
  for (std::size_t k = 0; k < 30; ++k) {
    const auto v = e1.vectors.row(k);
    const auto it = std::max_element(v.begin(), v.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    CHECK(*it > 0.0);
  }
}
