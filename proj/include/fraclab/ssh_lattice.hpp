#pragma once

// Tight-binding dimerized chain with domain-wall hopping textures: exact
// diagonalization, conjugation-symmetry and completeness checks, midgap
// (zero-mode) detection, and the regularized windowed soliton charge.
//
// Charge convention: rho(n) = sum_{occupied} |psi_E(n)|^2 - 1/2. The -1/2 per
// site is the symmetric-ordering counterterm; it equals subtracting the
// half-filled vacuum density because the vacuum spectrum is E <-> -E paired.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fraclab/linalg.hpp"

namespace fraclab::lattice {

enum class Boundary { Ring, Open };
enum class Occupancy { ZeroModesEmpty, ZeroModesFilled };

struct ChainConfig {
  int sites = 0;
  double t0 = 1.0;
  double delta_t = 0.1;
  /// Wall width in lattice spacings.
  double xi = 8.0;
  Boundary boundary = Boundary::Ring;
  /// Ascending site indices.
  std::vector<int> walls;
  Occupancy occupancy = Occupancy::ZeroModesEmpty;
  /// Sign of the dimerization envelope at the left end: +1 is vacuum A
  /// (bond 0 strong), -1 vacuum B.
  int left_vacuum = +1;
  /// Midgap threshold as a fraction of the bulk gap.
  double midgap_fraction = 0.1;
};

/// Throws ConfigInvalid unless N >= 4, 0 < delta_t < t0, xi >= 1, walls are
/// ascending inside the chain and at least 4*xi apart (periodically on a
/// ring), and a ring has even N and an even wall count.
void validate(const ChainConfig& config);

struct HoppingProfile {
  /// N entries on a ring (t[N-1] closes the ring), N-1 on an open chain.
  std::vector<double> t;
  Boundary boundary = Boundary::Ring;

  int sites() const noexcept {
    return boundary == Boundary::Ring ? static_cast<int>(t.size()) : static_cast<int>(t.size()) + 1;
  }
};

/// Envelope s(n) on each bond: left_vacuum * prod_w tanh((n - w)/xi) * (-1)^W.
std::vector<double> envelope(const ChainConfig& config);

/// t_n = t0 + (-1)^n delta_t s(n).
HoppingProfile build_hoppings(const ChainConfig& config);

/// Nearest-neighbour hopping matrix, H(n, n+1) = -t_n, zero diagonal unless
/// `onsite` is given.
linalg::DenseMatrix build_hamiltonian(const HoppingProfile& profile,
                                      std::span<const double> onsite = {});

struct SpectralData {
  std::vector<double> energies;  // ascending
  linalg::DenseMatrix vectors;   // row i is psi_i
  /// Bounds both max_i ||H v_i - E_i v_i|| and max |V V^T - I|.
  double residual_bound = 0.0;
  double norm = 0.0;  // ||H||_inf

  std::size_t size() const noexcept { return energies.size(); }
};

/// Throws ConvergenceFailure if the residual exceeds 1e-10 ||H||.
SpectralData diagonalize(const linalg::DenseMatrix& h);

struct ConjugationReport {
  bool anticommutes = false;        // M H M == -H exactly, M = diag((-1)^n)
  double pairing_defect = 0.0;      // max_i |E_i + E_{N-1-i}|
  double density_defect = 0.0;      // max |rho_E(n) - rho_{-E}(n)| over spectral clusters
  double vector_defect = 0.0;       // subspace mismatch between M V_E and V_{-E}
  double tolerance = 0.0;
};

/// Conjugation symmetry of a pure-hopping Hamiltonian. Throws
/// SymmetryViolation if any defect exceeds `tolerance` (default
/// 1e-10 * ||H||_inf / 2, i.e. 1e-10 t0 for a dimerized chain).
ConjugationReport conjugation_check(const linalg::DenseMatrix& h, const SpectralData& spectral,
                                    std::optional<double> tolerance = {});

/// |S| - ||V_S^T M V_S||_F^2 for the eigenvectors indexed by S: zero iff
/// span(S) is mapped onto itself by M.
double subspace_conjugation_defect(const SpectralData& spectral, std::span<const std::size_t> modes);

/// max_{x,y} |sum_i psi_i(x) psi_i(y) - delta_xy| over all modes.
double completeness_check(const SpectralData& spectral);
/// Same, restricted to `modes`.
double completeness_check(const SpectralData& spectral, std::span<const std::size_t> modes);

/// Sign changes of the envelope (periodic on a ring); the number of zero
/// modes the topology of the texture demands.
int topological_count(const ChainConfig& config);

struct MidgapResult {
  std::vector<std::size_t> indices;  // ascending energy order
  double gap = 0.0;                  // 2 |t_a - t_b| from the bulk
  double threshold = 0.0;
  int predicted = 0;
};

/// States with |E| < midgap_fraction * gap. Throws IndexMismatch when the
/// count differs from topological_count(config).
MidgapResult find_midgap(const SpectralData& spectral, const ChainConfig& config);

/// Negative-energy states, plus the midgap states when they are filled.
/// Midgap states are excluded from the negative set regardless of the sign
/// of their (exponentially small) energy.
std::vector<std::size_t> occupied_states(const SpectralData& spectral,
                                         std::span<const std::size_t> midgap, Occupancy occupancy);

/// rho(n) = sum_{occupied} |psi(n)|^2 - 1/2.
std::vector<double> charge_density(const SpectralData& spectral,
                                   std::span<const std::size_t> midgap, Occupancy occupancy);

/// rho_s(n) - rho_v(n) with rho_v from a separately diagonalized wall-free
/// chain at half filling. Cross-check of the counterterm form.
std::vector<double> vacuum_subtracted_density(const SpectralData& soliton,
                                              std::span<const std::size_t> midgap,
                                              Occupancy occupancy, const ChainConfig& config);

/// sum_{zero modes} |psi0(n)|^2
std::vector<double> zero_mode_density(const SpectralData& spectral,
                                      std::span<const std::size_t> midgap);

/// max_n |rho(n) -/+ (1/2) sum_zm |psi0(n)|^2| (minus for filled, plus for
/// empty zero modes).
double local_identity_defect(std::span<const double> density, std::span<const double> zm_density,
                             Occupancy occupancy);

struct Window {
  int lo = 0;
  int hi = 0;  // inclusive
};

/// sum_{n in window} rho(n). Every wall must sit at least 5 xi from both
/// window edges (periodic distance on a ring), otherwise WindowTouchesWall.
double window_charge(std::span<const double> density, Window window, const ChainConfig& config);

struct ChargeReport {
  Window window;
  double charge = 0.0;
  int zero_mode_count = 0;
  std::vector<double> zero_mode_energies;
  Occupancy occupancy = Occupancy::ZeroModesEmpty;

  // Diagnostics gathered along the way.
  int predicted_zero_modes = 0;
  double pairing_defect = 0.0;
  double density_symmetry_defect = 0.0;
  double completeness_defect = 0.0;
  double local_identity_defect = 0.0;
  double residual_bound = 0.0;
  double total_charge = 0.0;
};

/// Full pipeline: hoppings, diagonalization, all checks, windowed charge.
ChargeReport analyze(const ChainConfig& config, Window window);

}  // namespace fraclab::lattice
