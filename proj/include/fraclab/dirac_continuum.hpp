#pragma once

// Continuum Dirac problem H = sigma_2 p + sigma_1 phi(x) on a uniform grid.
// Conjugation is M = sigma_3 (M H M = -H). A zero mode has a single nonzero
// spinor component: upper with u' = -phi u, lower with l' = +phi l. Exactly
// one of the two is normalizable when phi changes sign between the two ends
// of the line, and neither is for a vacuum profile.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fraclab/ssh_lattice.hpp"

namespace fraclab::continuum {

struct PhononProfile {
  double x_min = 0.0;
  double grid_step = 0.0;
  std::vector<double> phi;
  double phi_minus_inf = 0.0;
  double phi_plus_inf = 0.0;

  double x(std::size_t i) const noexcept { return x_min + grid_step * static_cast<double>(i); }
  double x_max() const noexcept { return x(phi.empty() ? 0 : phi.size() - 1); }
};

/// Samples f on [-L, L] with step h (L rounded to a whole number of steps).
PhononProfile sample_profile(const std::function<double(double)>& f, double L, double h,
                             double phi_minus_inf, double phi_plus_inf);

/// phi0 * tanh(x / xi)
PhononProfile tanh_profile(double phi0, double xi, double L, double h);

/// Two-column table (x, phi) on a uniform grid; asymptotes are the end values.
PhononProfile table_profile(std::span<const double> x, std::span<const double> phi);

/// Continuum image of a single-wall lattice texture, in lattice spacings
/// `a` measured from the wall center (site w + 1/2):
/// phi(x) = ln((t0 + dt s) / (t0 - dt s)) / (2a).
PhononProfile profile_from_chain(const lattice::ChainConfig& config, double L, double h, double a = 1.0);

/// Throws ConfigInvalid unless grid_step > 0, there are >= 3 samples and the
/// end samples sit within 1e-6 |phi_inf| of the asymptotes.
void validate(const PhononProfile& profile);

enum class Topology { Vacuum, Kink, Antikink };

/// Kink: phi(-inf) < 0 < phi(+inf); antikink: reversed; vacuum: same sign.
/// Throws AmbiguousAsymptotics if an asymptote is within 1e-9 of zero, or
/// if the parity of the sign changes of phi disagrees with the asymptotics.
Topology classify(const PhononProfile& profile);

int sign_changes(const PhononProfile& profile);

enum class Component { Upper, Lower };

struct ZeroMode {
  double x_min = 0.0;
  double grid_step = 0.0;
  std::vector<double> psi;  // nonnegative
  double norm_check = 0.0;  // integral of psi^2
  Component component = Component::Upper;
  double decay_left = 0.0;   // -d ln psi / d|x| at x = -L
  double decay_right = 0.0;  // same at x = +L
  /// Sup-norm change against the same construction on the 2h subgrid.
  double refinement_delta = 0.0;

  double x(std::size_t i) const noexcept { return x_min + grid_step * static_cast<double>(i); }
  double tail_decay_rate() const noexcept { return decay_left < decay_right ? decay_left : decay_right; }
  /// Linear interpolation; zero outside the grid.
  double evaluate(double x) const noexcept;
};

/// Normalized zero mode. NonNormalizable for a vacuum profile;
/// GridTooCoarse if the 2h self-check moves psi by more than 1e-6 or the
/// domain truncates the tail above 1e-6 of the peak.
ZeroMode zero_mode(const PhononProfile& profile);

/// -(1/2) integral psi^2. NotNormalized if the norm is off by more than 1e-8.
double zero_mode_charge(const ZeroMode& zm);

/// Integral on the grid: trapezoid with Euler-Maclaurin end correction.
double integrate(std::span<const double> f, double h);

struct LatticeAlignment {
  double spacing = 1.0;
  /// Lattice coordinate (in sites) of the continuum origin.
  double center_site = 0.0;
  double lattice_xi = 1.0;
  double continuum_xi = 1.0;
};

/// L2 distance between the normalized continuum zero mode and the normalized
/// envelope |psi_n| of the lattice state on its dominant sublattice.
/// ScaleMismatch if the two widths differ by more than 2x.
double compare_to_lattice(const ZeroMode& zm, std::span<const double> lattice_mode,
                          const LatticeAlignment& align);

}  // namespace fraclab::continuum
