#pragma once

// Occupation-number states for the soliton sector: K conduction modes (b),
// K valence-hole modes (d) and an optional unpaired zero mode (a). The charge
// operator in symmetric (Schwinger) ordering reduces to
//   Q = sum_E (b_E^+ b_E - d_E^+ d_E) + a^+ a - 1/2,
// so basis states carry exact half-integer charge. All arithmetic is exact.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fraclab/rational.hpp"

namespace fraclab::fock {

struct ModeSet {
  std::vector<int> labels;  // one per positive-energy mode
  bool has_zero_mode = true;

  /// Labels 1..k.
  static ModeSet with_modes(int k, bool zero_mode = true);

  std::size_t size() const noexcept { return labels.size(); }
  /// Position of `label`; throws UnknownLabel.
  std::size_t index_of(int label) const;
  /// b, d and a modes together.
  std::size_t mode_count() const noexcept { return 2 * labels.size() + (has_zero_mode ? 1 : 0); }
};

/// Throws ConfigInvalid for duplicate labels or more than 31 modes.
void validate(const ModeSet& modes);

struct FockState {
  std::uint64_t b_occ = 0;  // bit i: conduction particle in mode labels[i]
  std::uint64_t d_occ = 0;  // bit i: valence hole in mode labels[i]
  bool a_occ = false;       // |+> when set, |-> otherwise

  friend bool operator==(const FockState&, const FockState&) = default;
};

enum class Ladder { A, ADagger, B, BDagger, D, DDagger };

struct SignedState {
  int sign = 1;
  FockState state;
};

/// Fermionic action with Jordan-Wigner signs over the fixed order
/// b_1..b_K, d_1..d_K, a. std::nullopt is the zero vector.
std::optional<SignedState> apply_ladder(const ModeSet& modes, const FockState& state, Ladder op,
                                        int label = 0);

Rational charge_eigenvalue(const ModeSet& modes, const FockState& state);

/// <Q^2> - <Q>^2 in a basis state, with Q applied through the ladder operators.
Rational charge_variance(const ModeSet& modes, const FockState& state);

/// Basis state together with |amplitude|^2.
struct WeightedState {
  FockState state;
  Rational weight;
};

/// <Q^2> - <Q>^2 for a superposition of distinct basis states. Q is diagonal
/// in this basis, so only the weights matter. Weights must sum to 1.
Rational charge_variance(const ModeSet& modes, std::span<const WeightedState> superposition);

/// Particle-hole conjugate: b <-> d, a <-> a^+.
FockState conjugate(const FockState& state);

/// "b:1,3;d:2;a:1". Missing groups are empty; "" is the all-empty |->.
FockState parse_state(const ModeSet& modes, std::string_view text);
std::string format_state(const ModeSet& modes, const FockState& state);

/// Fock-space index: b bits, then d bits, then a.
std::uint64_t basis_index(const ModeSet& modes, const FockState& state);
FockState basis_state(const ModeSet& modes, std::uint64_t index);

/// Sorted distinct eigenvalues of Q over the whole Fock space.
std::vector<Rational> charge_spectrum(const ModeSet& modes);

enum class SignConvention { JordanWigner, None };

struct CarReport {
  std::size_t dimension = 0;
  bool canonical = false;       // {c_i, c_j^+} = delta_ij
  bool mixed_vanish = false;    // {c_i, c_j} = {c_i^+, c_j^+} = 0
  bool charge_commutes = false; // [Q, c_i^+ c_i] = 0
  bool charge_matches = false;  // Schwinger-ordered Q == diag(charge_eigenvalue)
  bool spectrum_ok = false;     // half-integers iff a zero mode is present
  int checks = 0;

  bool all_passed() const noexcept {
    return canonical && mixed_vanish && charge_commutes && charge_matches && spectrum_ok;
  }
};

/// Builds every ladder operator as an exact integer matrix on the full
/// 2^(2K+1)-dimensional space and checks the algebra. DimensionTooLarge if
/// K > max_k.
CarReport verify_car_algebra(const ModeSet& modes, int max_k,
                             SignConvention convention = SignConvention::JordanWigner);

}  // namespace fraclab::fock
