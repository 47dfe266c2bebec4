#include "fraclab/ssh_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/simd/kernels.hpp"

namespace fraclab::lattice {

using linalg::DenseMatrix;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

int bond_count(const ChainConfig& c) { return c.boundary == Boundary::Ring ? c.sites : c.sites - 1; }

// Distance between two sites, periodic on a ring.
double site_distance(double a, double b, const ChainConfig& c) {
  const double d = std::abs(a - b);
  return c.boundary == Boundary::Ring ? std::min(d, c.sites - d) : d;
}

double stagger(std::size_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }

bool is_tridiagonal(const DenseMatrix& h) {
  const std::size_t n = h.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j)
      if (h(i, j) != 0.0 || h(j, i) != 0.0) return false;
  return true;
}

// Symmetric partition of the sorted spectrum into near-degenerate clusters.
// Returns cluster start offsets followed by n.
std::vector<std::size_t> spectral_clusters(const std::vector<double>& e, double tol) {
  const std::size_t n = e.size();
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t mirror = n - 2 - i;
    const bool split = (e[i + 1] - e[i] > tol) && (e[mirror + 1] - e[mirror] > tol);
    if (split) starts.push_back(i + 1);
  }
  starts.push_back(n);
  return starts;
}

}  // namespace

void validate(const ChainConfig& c) {
  if (c.sites < 4) invalid("sites must be >= 4, got " + std::to_string(c.sites));
  if (!(c.t0 > 0.0)) invalid("t0 must be positive");
  if (!(c.delta_t > 0.0 && c.delta_t < c.t0)) invalid("need 0 < delta_t < t0");
  if (!(c.xi >= 1.0)) invalid("xi must be >= 1 lattice spacing");
  if (c.left_vacuum != 1 && c.left_vacuum != -1) invalid("left_vacuum must be +1 or -1");
  if (!(c.midgap_fraction > 0.0 && c.midgap_fraction < 0.5)) invalid("midgap_fraction must lie in (0, 0.5)");
  const bool ring = c.boundary == Boundary::Ring;
  if (ring && c.sites % 2 != 0) invalid("a ring needs an even number of sites");
  if (ring && c.walls.size() % 2 != 0) invalid("a ring needs an even number of walls");
  for (std::size_t k = 0; k < c.walls.size(); ++k) {
    const int w = c.walls[k];
    if (w < 1 || w > c.sites - 2) invalid("wall " + std::to_string(w) + " outside the chain interior");
    if (k > 0) {
      if (w <= c.walls[k - 1]) invalid("walls must be strictly ascending");
      if (w - c.walls[k - 1] < 4.0 * c.xi) {
        invalid("walls " + std::to_string(c.walls[k - 1]) + " and " + std::to_string(w) +
                " closer than 4*xi");
      }
    }
  }
  if (ring && !c.walls.empty()) {
    const int first = c.walls.front();
    const int last = c.walls.back();
    if (c.sites - last + first < 4.0 * c.xi) invalid("walls closer than 4*xi across the ring seam");
    if (first < 2.0 * c.xi || c.sites - last < 2.0 * c.xi) invalid("walls closer than 2*xi to the ring seam");
  }
}

std::vector<double> envelope(const ChainConfig& c) {
  const int bonds = bond_count(c);
  const double parity = (c.walls.size() % 2 == 0) ? 1.0 : -1.0;
  std::vector<double> s(static_cast<std::size_t>(bonds));
  for (int n = 0; n < bonds; ++n) {
    double v = c.left_vacuum * parity;
    for (int w : c.walls) v *= std::tanh((n - w) / c.xi);
    s[static_cast<std::size_t>(n)] = v;
  }
  return s;
}

HoppingProfile build_hoppings(const ChainConfig& c) {
  validate(c);
  const auto s = envelope(c);
  HoppingProfile p;
  p.boundary = c.boundary;
  p.t.resize(s.size());
  for (std::size_t n = 0; n < s.size(); ++n) p.t[n] = c.t0 + stagger(n) * c.delta_t * s[n];
  return p;
}

DenseMatrix build_hamiltonian(const HoppingProfile& profile, std::span<const double> onsite) {
  const int sites = profile.sites();
  const auto n = static_cast<std::size_t>(sites);
  if (!onsite.empty() && onsite.size() != n) invalid("on-site energies must have one entry per site");
  DenseMatrix h(n);
  for (std::size_t b = 0; b < profile.t.size(); ++b) {
    const std::size_t i = b;
    const std::size_t j = (b + 1) % n;
    h(i, j) = -profile.t[b];
    h(j, i) = -profile.t[b];
  }
  for (std::size_t i = 0; i < onsite.size(); ++i) h(i, i) = onsite[i];
  return h;
}

SpectralData diagonalize(const DenseMatrix& h) {
  if (!h.is_symmetric()) invalid("Hamiltonian is not symmetric");
  const std::size_t n = h.size();
  linalg::EigenSystem es;
  if (is_tridiagonal(h)) {
    std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = h(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = h(i, i + 1);
    es = linalg::tridiagonal_eigen(d, e);
  } else {
    es = linalg::symmetric_eigen(h);
  }

  SpectralData out;
  out.energies = std::move(es.values);
  out.vectors = std::move(es.vectors);
  out.norm = h.norm_inf();

  double bound = 0.0;
  std::vector<double> hv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = out.vectors.row(i);
    linalg::multiply(h, v, hv);
    simd::axpy(-out.energies[i], v, hv);
    bound = std::max(bound, std::sqrt(simd::dot(hv, hv)));
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = simd::dot(v, out.vectors.row(j)) - (i == j ? 1.0 : 0.0);
      bound = std::max(bound, std::abs(g));
    }
  }
  out.residual_bound = bound;
  if (bound > 1e-10 * std::max(out.norm, std::numeric_limits<double>::min())) {
    throw Error(ErrorCode::ConvergenceFailure,
                "eigen-residual " + std::to_string(bound) + " exceeds 1e-10 * ||H|| = " +
                    std::to_string(1e-10 * out.norm) + " (QL sweeps: " +
                    std::to_string(es.ql_iterations) + ")");
  }
  return out;
}

double subspace_conjugation_defect(const SpectralData& sp, std::span<const std::size_t> modes) {
  const std::size_t n = sp.size();
  std::vector<double> mv(n);
  double captured = 0.0;
  for (std::size_t a : modes) {
    const auto v = sp.vectors.row(a);
    for (std::size_t x = 0; x < n; ++x) mv[x] = stagger(x) * v[x];
    for (std::size_t b : modes) {
      const double o = simd::dot(mv, sp.vectors.row(b));
      captured += o * o;
    }
  }
  return std::abs(static_cast<double>(modes.size()) - captured);
}

ConjugationReport conjugation_check(const DenseMatrix& h, const SpectralData& sp,
                                    std::optional<double> tolerance) {
  const std::size_t n = sp.size();
  ConjugationReport r;
  r.tolerance = tolerance.value_or(1e-10 * h.norm_inf() / 2.0);

  r.anticommutes = h.size() == n;
  for (std::size_t i = 0; i < n && r.anticommutes; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (stagger(i) * h(i, j) * stagger(j) != -h(i, j)) {
        r.anticommutes = false;
        break;
      }

  for (std::size_t i = 0; i < n; ++i) {
    r.pairing_defect = std::max(r.pairing_defect, std::abs(sp.energies[i] + sp.energies[n - 1 - i]));
  }

  const double scale = n ? std::max(std::abs(sp.energies.front()), std::abs(sp.energies.back())) : 0.0;
  // Levels split by g are only resolved to eps ||H|| / g in binary64, so
  // merge anything closer than 1e-4 of the spectral radius. The identity
  // holds exactly for any mirror-symmetric grouping.
  const auto starts = spectral_clusters(sp.energies, 1e-4 * scale);
  std::vector<double> rho(n), rho_mirror(n);
  std::vector<std::size_t> joint;
  for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
    const std::size_t lo = starts[c], hi = starts[c + 1];
    const std::size_t mlo = n - hi;
    if (mlo < lo) continue;  // each pair of mirror clusters once
    std::fill(rho.begin(), rho.end(), 0.0);
    std::fill(rho_mirror.begin(), rho_mirror.end(), 0.0);
    for (std::size_t i = lo; i < hi; ++i) simd::accumulate_squares(sp.vectors.row(i), rho);
    for (std::size_t i = mlo; i < mlo + (hi - lo); ++i) simd::accumulate_squares(sp.vectors.row(i), rho_mirror);
    for (std::size_t x = 0; x < n; ++x) r.density_defect = std::max(r.density_defect, std::abs(rho[x] - rho_mirror[x]));

    // M maps span(cluster) onto span(mirror); check on the union.
    joint.clear();
    for (std::size_t i = lo; i < hi; ++i) joint.push_back(i);
    if (mlo != lo) {
      for (std::size_t i = mlo; i < mlo + (hi - lo); ++i) joint.push_back(i);
    }
    r.vector_defect = std::max(r.vector_defect, subspace_conjugation_defect(sp, joint));
  }

  if (!r.anticommutes || r.pairing_defect > r.tolerance || r.density_defect > r.tolerance ||
      r.vector_defect > r.tolerance) {
    throw Error(ErrorCode::SymmetryViolation,
                std::string("conjugation symmetry broken: anticommutes=") + (r.anticommutes ? "yes" : "no") +
                    " pairing=" + sci(r.pairing_defect) + " density=" + sci(r.density_defect) +
                    " vectors=" + sci(r.vector_defect) + " tol=" + sci(r.tolerance));
  }
  return r;
}

double completeness_check(const SpectralData& sp, std::span<const std::size_t> modes) {
  const std::size_t n = sp.size();
  DenseMatrix g(n);
  for (std::size_t i : modes) {
    const auto v = sp.vectors.row(i);
    for (std::size_t x = 0; x < n; ++x) {
      if (v[x] != 0.0) simd::axpy(v[x], v, g.row(x));
    }
  }
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) worst = std::max(worst, std::abs(g(x, y) - (x == y ? 1.0 : 0.0)));
  return worst;
}

double completeness_check(const SpectralData& sp) {
  std::vector<std::size_t> all(sp.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return completeness_check(sp, all);
}

int topological_count(const ChainConfig& c) {
  const auto s = envelope(c);
  std::vector<int> signs;
  for (double v : s) {
    if (v > 0) signs.push_back(1);
    else if (v < 0) signs.push_back(-1);
  }
  int changes = 0;
  for (std::size_t i = 1; i < signs.size(); ++i)
    if (signs[i] != signs[i - 1]) ++changes;
  if (c.boundary == Boundary::Ring && signs.size() > 1 && signs.back() != signs.front()) ++changes;
  return changes;
}

MidgapResult find_midgap(const SpectralData& sp, const ChainConfig& c) {
  const auto profile = build_hoppings(c);
  const auto& t = profile.t;
  const int bonds = static_cast<int>(t.size());

  // Bulk bond: farthest from every wall.
  int bulk = 0;
  double best = -1.0;
  for (int b = 0; b + 1 < bonds; ++b) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int w : c.walls) nearest = std::min(nearest, site_distance(b + 0.5, w, c));
    if (nearest > best) {
      best = nearest;
      bulk = b;
    }
  }
  MidgapResult r;
  r.gap = 2.0 * std::abs(t[static_cast<std::size_t>(bulk)] - t[static_cast<std::size_t>(bulk + 1)]);
  r.threshold = c.midgap_fraction * r.gap;
  r.predicted = topological_count(c);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (std::abs(sp.energies[i]) < r.threshold) r.indices.push_back(i);
  }
  if (static_cast<int>(r.indices.size()) != r.predicted) {
    throw Error(ErrorCode::IndexMismatch,
                std::to_string(r.indices.size()) + " midgap states below " + std::to_string(r.threshold) +
                    " but the texture has " + std::to_string(r.predicted) +
                    " envelope sign changes (walls too narrow or too close, or open-chain edge states)");
  }
  return r;
}

std::vector<std::size_t> occupied_states(const SpectralData& sp, std::span<const std::size_t> midgap,
                                         Occupancy occupancy) {
  std::vector<std::size_t> occ;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const bool mid = std::find(midgap.begin(), midgap.end(), i) != midgap.end();
    if (mid ? occupancy == Occupancy::ZeroModesFilled : sp.energies[i] < 0.0) occ.push_back(i);
  }
  return occ;
}

std::vector<double> charge_density(const SpectralData& sp, std::span<const std::size_t> midgap,
                                   Occupancy occupancy) {
  std::vector<double> rho(sp.size(), 0.0);
  for (std::size_t i : occupied_states(sp, midgap, occupancy)) simd::accumulate_squares(sp.vectors.row(i), rho);
  for (double& r : rho) r -= 0.5;
  return rho;
}

std::vector<double> vacuum_subtracted_density(const SpectralData& soliton, std::span<const std::size_t> midgap,
                                              Occupancy occupancy, const ChainConfig& config) {
  ChainConfig vac = config;
  vac.walls.clear();
  const auto h = build_hamiltonian(build_hoppings(vac));
  const auto sv = diagonalize(h);

  std::vector<double> rho(soliton.size(), 0.0);
  for (std::size_t i : occupied_states(soliton, midgap, occupancy)) {
    simd::accumulate_squares(soliton.vectors.row(i), rho);
  }
  std::vector<double> rho_v(sv.size(), 0.0);
  for (std::size_t i = 0; i < sv.size(); ++i) {
    if (sv.energies[i] < 0.0) simd::accumulate_squares(sv.vectors.row(i), rho_v);
  }
  for (std::size_t x = 0; x < rho.size(); ++x) rho[x] -= rho_v[x];
  return rho;
}

std::vector<double> zero_mode_density(const SpectralData& sp, std::span<const std::size_t> midgap) {
  std::vector<double> out(sp.size(), 0.0);
  for (std::size_t i : midgap) simd::accumulate_squares(sp.vectors.row(i), out);
  return out;
}

double local_identity_defect(std::span<const double> density, std::span<const double> zm_density,
                             Occupancy occupancy) {
  const double sign = occupancy == Occupancy::ZeroModesEmpty ? 0.5 : -0.5;
  double worst = 0.0;
  for (std::size_t x = 0; x < density.size(); ++x) {
    worst = std::max(worst, std::abs(density[x] + sign * zm_density[x]));
  }
  return worst;
}

double window_charge(std::span<const double> density, Window window, const ChainConfig& c) {
  const int n = static_cast<int>(density.size());
  if (window.lo < 0 || window.hi >= n || window.lo > window.hi) {
    invalid("window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) + "] outside the chain");
  }
  const double margin = 5.0 * c.xi;
  for (int w : c.walls) {
    const double dlo = site_distance(w, window.lo, c);
    const double dhi = site_distance(w, window.hi, c);
    if (dlo < margin || dhi < margin) {
      throw Error(ErrorCode::WindowTouchesWall,
                  "wall " + std::to_string(w) + " lies within 5*xi = " + std::to_string(margin) +
                      " of the window edge");
    }
  }
  double q = 0.0;
  for (int x = window.lo; x <= window.hi; ++x) q += density[static_cast<std::size_t>(x)];
  return q;
}

ChargeReport analyze(const ChainConfig& config, Window window) {
  const auto profile = build_hoppings(config);
  const auto h = build_hamiltonian(profile);
  const auto sp = diagonalize(h);
  const auto conj = conjugation_check(h, sp);
  const auto mid = find_midgap(sp, config);
  const auto rho = charge_density(sp, mid.indices, config.occupancy);
  const auto zm = zero_mode_density(sp, mid.indices);

  ChargeReport r;
  r.window = window;
  r.charge = window_charge(rho, window, config);
  r.occupancy = config.occupancy;
  r.zero_mode_count = static_cast<int>(mid.indices.size());
  for (std::size_t i : mid.indices) r.zero_mode_energies.push_back(sp.energies[i]);
  r.predicted_zero_modes = mid.predicted;
  r.pairing_defect = conj.pairing_defect;
  r.density_symmetry_defect = conj.density_defect;
  r.completeness_defect = completeness_check(sp);
  r.local_identity_defect = local_identity_defect(rho, zm, config.occupancy);
  r.residual_bound = sp.residual_bound;
  r.total_charge = std::accumulate(rho.begin(), rho.end(), 0.0);
  return r;
}

}  // namespace fraclab::lattice
