#pragma once

// Bond-pattern bookkeeping for a dimerized chain: alternating single/double
// bonds with domain walls, link counting, and the spin/charge assignment of
// solitons. Everything here is exact integer/rational arithmetic.

#include <cstdint>
#include <string>
#include <vector>

#include "fraclab/rational.hpp"

namespace fraclab::dimer {

enum class Bond : std::uint8_t { Single, Double };

/// The two degenerate dimerization vacua. Vacuum A starts with a double bond
/// on edge 0, vacuum B with a single bond.
enum class Vacuum : std::uint8_t { A, B };

/// Inclusive site interval [lo, hi]. lo > hi denotes the empty region.
struct SiteInterval {
  int lo = 0;
  int hi = -1;

  bool empty() const noexcept { return lo > hi; }
  bool contains(int site) const noexcept { return site >= lo && site <= hi; }
};

struct DomainWallSpec {
  /// Requested wall locations (site indices). Order does not matter.
  std::vector<int> wall_positions;
};

struct BondPattern {
  int sites = 0;
  std::vector<Bond> bonds;  // bonds[i] joins sites i and i+1
  Vacuum vacuum_left = Vacuum::A;
  /// Realized soliton sites (both adjacent bonds single), ascending.
  std::vector<int> defect_sites;
};

struct QuantumNumbers {
  /// Charge deficit in units of the electron charge (-e); +1 means one
  /// electron missing relative to the vacuum.
  Rational charge;
  /// Net spin in units of hbar.
  Rational spin;

  friend bool operator==(const QuantumNumbers&, const QuantumNumbers&) = default;
};

struct LinkDeficit {
  Rational total;
  Rational per_wall;
};

/// Alternating pattern starting in `vacuum`, flipping phase at each wall.
///
/// A requested wall position names the edge at which the alternation phase
/// flips. The soliton sits on the first site at or right of that position
/// whose left bond is single in the incoming phase, so both bonds touching it
/// end up single. Walls closer than two sites (before or after placement)
/// raise WallTooClose; walls outside [1, sites-2] raise PositionOutOfRange.
BondPattern build_pattern(int sites, Vacuum vacuum, const DomainWallSpec& walls);

/// Double bonds with both endpoints inside `region`.
int count_links(const BondPattern& pattern, SiteInterval region);

/// Links lost relative to the vacuum inside `region`, in total and per wall.
/// The region must cover every soliton of `with_walls`.
LinkDeficit link_deficit(const BondPattern& with_walls, const BondPattern& vacuum,
                         SiteInterval region);

/// Spin/charge of the physical (spin-1/2) chain, with the x2 spin degeneracy
/// applied to the half-link deficit each soliton carries.
QuantumNumbers spin_charge(bool soliton_present, int extra_electrons);

/// Structural invariants: no site touches two double bonds, every interior
/// non-soliton site touches exactly one, soliton sites touch none.
bool satisfies_invariants(const BondPattern& pattern);

/// Left-right mirror image of the chain.
BondPattern reflect(const BondPattern& pattern);

/// One character per site and bond, e.g. "o=o-o=o-*-o=o".
std::string render_ascii(const BondPattern& pattern);

}  // namespace fraclab::dimer
