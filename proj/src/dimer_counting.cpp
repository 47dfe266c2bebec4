#include "fraclab/dimer_counting.hpp"

#include <algorithm>

#include "fraclab/errors.hpp"

namespace fraclab::dimer {

namespace {

bool is_double(int bond_index, int phase) { return (bond_index + phase) % 2 == 0; }

void check_region(const BondPattern& pattern, SiteInterval region) {
  if (region.empty()) return;
  if (region.lo < 0 || region.hi >= pattern.sites) {
    throw Error(ErrorCode::RegionOutOfRange,
                "region [" + std::to_string(region.lo) + ", " + std::to_string(region.hi) +
                    "] outside chain of " + std::to_string(pattern.sites) + " sites");
  }
}

int doubles_at(const BondPattern& p, int site) {
  int n = 0;
  if (site > 0 && p.bonds[site - 1] == Bond::Double) ++n;
  if (site < p.sites - 1 && p.bonds[site] == Bond::Double) ++n;
  return n;
}

}  // namespace

BondPattern build_pattern(int sites, Vacuum vacuum, const DomainWallSpec& walls) {
  if (sites < 2) {
    throw Error(ErrorCode::PositionOutOfRange, "a chain needs at least 2 sites");
  }
  std::vector<int> requested = walls.wall_positions;
  std::sort(requested.begin(), requested.end());
  for (std::size_t k = 0; k < requested.size(); ++k) {
    const int w = requested[k];
    if (w < 1 || w > sites - 2) {
      throw Error(ErrorCode::PositionOutOfRange,
                  "wall at site " + std::to_string(w) + " outside [1, " +
                      std::to_string(sites - 2) + "]");
    }
    if (k > 0 && w - requested[k - 1] < 2) {
      throw Error(ErrorCode::WallTooClose, "walls at " + std::to_string(requested[k - 1]) +
                                               " and " + std::to_string(w));
    }
  }

  BondPattern out;
  out.sites = sites;
  out.vacuum_left = vacuum;
  out.bonds.resize(static_cast<std::size_t>(sites - 1));

  int phase = vacuum == Vacuum::A ? 0 : 1;
  std::size_t next_wall = 0;
  for (int i = 0; i < sites - 1; ++i) {
    if (next_wall < requested.size() && i >= requested[next_wall]) {
      // Defect sits at site i: bond i-1 must already be single.
      if (!is_double(i - 1, phase)) {
        if (!out.defect_sites.empty() && i - out.defect_sites.back() < 2) {
          throw Error(ErrorCode::WallTooClose,
                      "solitons at " + std::to_string(out.defect_sites.back()) + " and " +
                          std::to_string(i));
        }
        out.defect_sites.push_back(i);
        phase ^= 1;
        ++next_wall;
      }
    }
    out.bonds[static_cast<std::size_t>(i)] = is_double(i, phase) ? Bond::Double : Bond::Single;
  }
  if (next_wall != requested.size()) {
    throw Error(ErrorCode::PositionOutOfRange,
                "wall " + std::to_string(requested[next_wall]) + " cannot be placed before the chain end");
  }
  return out;
}

int count_links(const BondPattern& pattern, SiteInterval region) {
  check_region(pattern, region);
  if (region.empty()) return 0;
  int links = 0;
  for (int i = region.lo; i < region.hi; ++i) {
    if (pattern.bonds[static_cast<std::size_t>(i)] == Bond::Double) ++links;
  }
  return links;
}

LinkDeficit link_deficit(const BondPattern& with_walls, const BondPattern& vacuum,
                         SiteInterval region) {
  if (with_walls.sites != vacuum.sites) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(with_walls.sites) + " vs " +
                                               std::to_string(vacuum.sites) + " sites");
  }
  for (int d : with_walls.defect_sites) {
    if (!region.contains(d)) {
      throw Error(ErrorCode::RegionOutOfRange,
                  "region does not cover the soliton at site " + std::to_string(d));
    }
  }
  LinkDeficit out;
  out.total = Rational(count_links(vacuum, region) - count_links(with_walls, region));
  const auto walls = static_cast<std::int64_t>(with_walls.defect_sites.size());
  out.per_wall = walls == 0 ? Rational(0) : out.total / walls;
  return out;
}

QuantumNumbers spin_charge(bool soliton_present, int extra_electrons) {
  if (extra_electrons != 0 && extra_electrons != 1) {
    throw Error(ErrorCode::UnsupportedFilling,
                "extra_electrons must be 0 or 1, got " + std::to_string(extra_electrons));
  }
  // Half a link per soliton, and every link holds a spin-up and a spin-down electron.
  const Rational per_species = soliton_present ? Rational(1, 2) : Rational(0);
  const Rational spin_degeneracy(2);

  QuantumNumbers q;
  q.charge = per_species * spin_degeneracy - extra_electrons;
  // All valence spins are paired; only an inserted electron is unpaired.
  q.spin = extra_electrons == 1 ? Rational(1, 2) : Rational(0);
  return q;
}

bool satisfies_invariants(const BondPattern& p) {
  if (p.sites < 2 || static_cast<int>(p.bonds.size()) != p.sites - 1) return false;
  for (int s = 0; s < p.sites; ++s) {
    const int n = doubles_at(p, s);
    if (n > 1) return false;
    const bool defect = std::binary_search(p.defect_sites.begin(), p.defect_sites.end(), s);
    const bool end = s == 0 || s == p.sites - 1;
    if (defect && n != 0) return false;
    if (!defect && !end && n != 1) return false;
  }
  return true;
}

BondPattern reflect(const BondPattern& p) {
  BondPattern out;
  out.sites = p.sites;
  out.bonds.assign(p.bonds.rbegin(), p.bonds.rend());
  out.vacuum_left = (!out.bonds.empty() && out.bonds.front() == Bond::Double) ? Vacuum::A : Vacuum::B;
  for (auto it = p.defect_sites.rbegin(); it != p.defect_sites.rend(); ++it) {
    out.defect_sites.push_back(p.sites - 1 - *it);
  }
  return out;
}

std::string render_ascii(const BondPattern& p) {
  std::string out;
  out.reserve(static_cast<std::size_t>(2 * p.sites));
  for (int s = 0; s < p.sites; ++s) {
    const bool defect = std::binary_search(p.defect_sites.begin(), p.defect_sites.end(), s);
    out.push_back(defect ? '*' : 'o');
    if (s < p.sites - 1) {
      out.push_back(p.bonds[static_cast<std::size_t>(s)] == Bond::Double ? '=' : '-');
    }
  }
  return out;
}

}  // namespace fraclab::dimer
