#include "fraclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/simd/kernels.hpp"

namespace fraclab::linalg {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::is_symmetric() const noexcept {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

double DenseMatrix::norm_inf() const noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (double v : row(i)) sum += std::abs(v);
    best = std::max(best, sum);
  }
  return best;
}

void multiply(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.size(); ++i) y[i] = simd::dot(a.row(i), x);
}

namespace {

struct Tridiagonal {
  std::vector<double> d;
  std::vector<double> e;  // e[i] couples i and i+1; e[n-1] = 0
};

// Reduces `a` (destroyed) to tridiagonal form. On return q holds Q^T, so
// a_original = Q T Q^T and row j of q is column j of Q.
Tridiagonal householder(DenseMatrix& a, DenseMatrix& q) {
  const std::size_t n = a.size();
  Tridiagonal t;
  t.d.assign(n, 0.0);
  t.e.assign(n, 0.0);
  std::vector<double> v(n), p(n), r(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    const std::size_t off = k + 1;
    t.d[k] = a(k, k);

    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(a(k, off + i)));
    if (scale == 0.0) {
      t.e[k] = 0.0;
      continue;
    }
    double sigma = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(k, off + i) / scale;
      sigma += v[i] * v[i];
    }
    const double norm = std::sqrt(sigma);
    const double alpha = v[0] > 0.0 ? -norm : norm;
    v[0] -= alpha;
    const double vtv = sigma - 2.0 * alpha * (v[0] + alpha) + alpha * alpha;
    t.e[k] = alpha * scale;
    if (vtv == 0.0) continue;
    const double beta = 2.0 / vtv;

    // Trailing block B <- P B P with P = I - beta v v^T.
    const std::span<const double> vs(v.data(), m);
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = beta * simd::dot(a.row(off + i).subspan(off, m), vs);
    }
    const double kappa = 0.5 * beta * std::inner_product(p.begin(), p.begin() + m, v.begin(), 0.0);
    for (std::size_t i = 0; i < m; ++i) p[i] -= kappa * v[i];
    const std::span<const double> ws(p.data(), m);
    for (std::size_t i = 0; i < m; ++i) {
      auto row = a.row(off + i).subspan(off, m);
      simd::axpy(-v[i], ws, row);
      simd::axpy(-p[i], vs, row);
    }

    // q <- P q on rows off..n-1.
    std::fill(r.begin(), r.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) simd::axpy(v[i], q.row(off + i), r);
    for (std::size_t i = 0; i < m; ++i) simd::axpy(-beta * v[i], r, q.row(off + i));
  }
  if (n >= 2) {
    t.d[n - 2] = a(n - 2, n - 2);
    t.e[n - 2] = a(n - 2, n - 1);
  }
  if (n >= 1) t.d[n - 1] = a(n - 1, n - 1);
  return t;
}

// Implicit QL on (d, e); rotations are applied to rows of z.
int ql_implicit(std::vector<double>& d, std::vector<double>& e, DenseMatrix& z) {
  const std::size_t n = d.size();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const int max_iter_per_value = 60;
  int total = 0;
  double shift = 0.0;
  double tst1 = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iter_per_value) {
          throw Error(ErrorCode::ConvergenceFailure,
                      "QL iteration stalled at eigenvalue " + std::to_string(l) + " of " +
                          std::to_string(n) + " after " + std::to_string(iter - 1) +
                          " sweeps (|e| = " + std::to_string(std::abs(e[l])) +
                          ", tol = " + std::to_string(eps * tst1) + ")");
        }
        ++total;
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        shift += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          simd::rotate(z.row(ii), z.row(ii + 1), c, s);
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += shift;
    e[l] = 0.0;
  }
  return total;
}

EigenSystem finish(std::vector<double>& d, DenseMatrix& z, int iterations) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  EigenSystem out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n);
  out.ql_iterations = iterations;
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    auto src = z.row(order[k]);
    auto dst = out.vectors.row(k);
    std::copy(src.begin(), src.end(), dst.begin());

    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(dst[i]) > std::abs(dst[pivot])) pivot = i;
    }
    if (dst[pivot] < 0) {
      for (double& x : dst) x = -x;
    }
  }
  return out;
}

}  // namespace

EigenSystem symmetric_eigen(const DenseMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  DenseMatrix work = a;
  DenseMatrix z = DenseMatrix::identity(n);
  Tridiagonal t = householder(work, z);
  const int iterations = ql_implicit(t.d, t.e, z);
  return finish(t.d, z, iterations);
}

EigenSystem tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (offdiag.size() + 1 != n) {
    throw Error(ErrorCode::ConfigInvalid, "off-diagonal length must be n-1");
  }
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());
  DenseMatrix z = DenseMatrix::identity(n);
  const int iterations = ql_implicit(d, e, z);
  return finish(d, z, iterations);
}

}  // namespace fraclab::linalg
