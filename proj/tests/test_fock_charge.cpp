#include <doctest.h>

#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/fock_charge.hpp"

using namespace fraclab;
using namespace fraclab::fock;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ConfigInvalid;
}

const Rational half(1, 2);

}  // namespace

TEST_CASE("zero-mode ladder") {
  const auto m = ModeSet::with_modes(2);
  const FockState minus{};
  const FockState plus{0, 0, true};

  const auto down = apply_ladder(m, plus, Ladder::A);
  REQUIRE(down);
  CHECK(down->state == minus);
  CHECK(down->sign == 1);
  CHECK_FALSE(apply_ladder(m, minus, Ladder::A));
  CHECK_FALSE(apply_ladder(m, plus, Ladder::ADagger));
  const auto up = apply_ladder(m, minus, Ladder::ADagger);
  REQUIRE(up);
  CHECK(up->state == plus);
}

TEST_CASE("Pauli blocking and Jordan-Wigner signs") {
  const auto m = ModeSet::with_modes(3);
  const FockState vac{};
  for (Ladder up : {Ladder::BDagger, Ladder::DDagger}) {
    for (int label : {1, 2, 3}) {
      const auto once = apply_ladder(m, vac, up, label);
      REQUIRE(once);
      CHECK_FALSE(apply_ladder(m, once->state, up, label));
    }
  }
  // b_1^+ then b_2^+ vs b_2^+ then b_1^+ differ by a sign.
  const auto s12 = apply_ladder(m, apply_ladder(m, vac, Ladder::BDagger, 2)->state, Ladder::BDagger, 1);
  const auto s21 = apply_ladder(m, apply_ladder(m, vac, Ladder::BDagger, 1)->state, Ladder::BDagger, 2);
  REQUIRE(s12);
  REQUIRE(s21);
  CHECK(s12->state == s21->state);
  CHECK(s12->sign == -s21->sign);
  // The zero mode sits last in the ordering: a^+ past an occupied b picks up -1.
  const FockState one_b{1, 0, false};
  CHECK(apply_ladder(m, one_b, Ladder::ADagger)->sign == -1);
  CHECK(apply_ladder(m, vac, Ladder::ADagger)->sign == 1);
}

TEST_CASE("charge eigenvalues") {
  const auto m = ModeSet::with_modes(2);
  const FockState minus{};
  const FockState plus{0, 0, true};
  CHECK(charge_eigenvalue(m, minus) == -half);
  CHECK(charge_eigenvalue(m, plus) == half);
  CHECK(charge_eigenvalue(m, apply_ladder(m, minus, Ladder::BDagger, 1)->state) == half);
  CHECK(charge_eigenvalue(m, apply_ladder(m, minus, Ladder::DDagger, 2)->state) == Rational(-3, 2));
  CHECK(charge_eigenvalue(m, parse_state(m, "b:1,2;d:1;a:1")) == Rational(3, 2));

  const auto k0 = ModeSet::with_modes(0);
  CHECK(charge_eigenvalue(k0, minus) == -half);
  CHECK(charge_eigenvalue(k0, plus) == half);
}

TEST_CASE("variance") {
  for (int k : {0, 1, 2, 3}) {
    const auto m = ModeSet::with_modes(k);
    const std::uint64_t dim = std::uint64_t{1} << m.mode_count();
    for (std::uint64_t i = 0; i < dim; ++i) CHECK(charge_variance(m, basis_state(m, i)) == Rational(0));
  }
  const auto m = ModeSet::with_modes(1);
  const std::vector<WeightedState> cat{{FockState{0, 0, true}, half}, {FockState{}, half}};
  CHECK(charge_variance(m, cat) == Rational(1, 4));
  const std::vector<WeightedState> lopsided{{FockState{0, 0, true}, Rational(1, 4)},
                                            {FockState{}, Rational(3, 4)}};
  CHECK(charge_variance(m, lopsided) == Rational(3, 16));
  // Same charge, different states: still sharp.
  const std::vector<WeightedState> degenerate{{parse_state(m, "a:1"), half}, {parse_state(m, "b:1"), half}};
  CHECK(charge_variance(m, degenerate) == Rational(0));
  const std::vector<WeightedState> bad{{FockState{}, half}};
  CHECK(code_of([&] { charge_variance(m, bad); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("conjugation flips the charge") {
  const auto m = ModeSet::with_modes(3);
  const std::uint64_t dim = std::uint64_t{1} << m.mode_count();
  for (std::uint64_t i = 0; i < dim; ++i) {
    const auto s = basis_state(m, i);
    CHECK(charge_eigenvalue(m, conjugate(s)) == -charge_eigenvalue(m, s));
    CHECK(conjugate(conjugate(s)) == s);
    CHECK(basis_index(m, s) == i);
  }
}

TEST_CASE("CAR algebra") {
  for (int k : {0, 1, 2, 3}) {
    CAPTURE(k);
    const auto rep = verify_car_algebra(ModeSet::with_modes(k), 3);
    CHECK(rep.dimension == (std::size_t{1} << (2 * k + 1)));
    CHECK(rep.all_passed());
    CHECK(rep.checks > 0);
  }
  const auto wrong = verify_car_algebra(ModeSet::with_modes(2), 3, SignConvention::None);
  CHECK_FALSE(wrong.mixed_vanish);
  CHECK_FALSE(wrong.all_passed());

  const auto no_zero = verify_car_algebra(ModeSet::with_modes(2, false), 3);
  CHECK(no_zero.dimension == 16);
  CHECK(no_zero.all_passed());

  CHECK(code_of([] { verify_car_algebra(ModeSet::with_modes(4), 3); }) == ErrorCode::DimensionTooLarge);
}

TEST_CASE("spectrum parity") {
  const auto with_zero = charge_spectrum(ModeSet::with_modes(2));
  const std::vector<Rational> want{Rational(-5, 2), Rational(-3, 2), -half, half, Rational(3, 2), Rational(5, 2)};
  CHECK(with_zero == want);
  for (const auto& q : charge_spectrum(ModeSet::with_modes(2, false))) CHECK(q.denominator() == 1);
}

TEST_CASE("state text") {
  ModeSet m{{2, 5, 7}, true};
  const auto s = parse_state(m, "b:5,7;d:2;a:1");
  CHECK(s.b_occ == 0b110);
  CHECK(s.d_occ == 0b001);
  CHECK(s.a_occ);
  CHECK(parse_state(m, format_state(m, s)) == s);
  CHECK(parse_state(m, "") == FockState{});
  CHECK(code_of([&] { parse_state(m, "b:3"); }) == ErrorCode::UnknownLabel);
  CHECK(code_of([&] { apply_ladder(m, FockState{}, Ladder::B, 4); }) == ErrorCode::UnknownLabel);
  CHECK(code_of([&] { parse_state(m, "x:1"); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { validate(ModeSet{{1, 1}, true}); }) == ErrorCode::ConfigInvalid);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t i = rng() % (std::uint64_t{1} << m.mode_count());
    const auto st = basis_state(m, i);
    CHECK(parse_state(m, format_state(m, st)) == st);
  }
}
