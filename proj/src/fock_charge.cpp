#include "fraclab/fock_charge.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <set>

#include "fraclab/errors.hpp"

namespace fraclab::fock {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

// Dense integer matrix; entries stay small (ladder products, 2Q).
class IntMatrix {
 public:
  explicit IntMatrix(std::size_t n) : n_(n), v_(n * n, 0) {}
  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
  std::size_t size() const { return n_; }

  IntMatrix operator*(const IntMatrix& o) const {
    IntMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        const std::int64_t a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }
  IntMatrix operator+(const IntMatrix& o) const {
    IntMatrix r = *this;
    for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] += o.v_[i];
    return r;
  }
  IntMatrix operator-(const IntMatrix& o) const {
    IntMatrix r = *this;
    for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] -= o.v_[i];
    return r;
  }
  IntMatrix transpose() const {
    IntMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  bool is_zero() const {
    return std::all_of(v_.begin(), v_.end(), [](std::int64_t x) { return x == 0; });
  }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::int64_t> v_;
};

// Bit position of each mode in the global order b..., d..., a.
std::size_t bit_of(const ModeSet& m, Ladder op, std::size_t idx) {
  switch (op) {
    case Ladder::B:
    case Ladder::BDagger: return idx;
    case Ladder::D:
    case Ladder::DDagger: return m.size() + idx;
    default: return 2 * m.size();
  }
}

bool is_creation(Ladder op) {
  return op == Ladder::ADagger || op == Ladder::BDagger || op == Ladder::DDagger;
}

// Annihilator for global mode `bit`, as a matrix on the full space.
IntMatrix annihilator(std::size_t dim, std::size_t bit, SignConvention conv) {
  IntMatrix c(dim);
  for (std::uint64_t ket = 0; ket < dim; ++ket) {
    if (!((ket >> bit) & 1U)) continue;
    const std::uint64_t bra = ket & ~(std::uint64_t{1} << bit);
    int sign = 1;
    if (conv == SignConvention::JordanWigner) {
      const std::uint64_t below = ket & ((std::uint64_t{1} << bit) - 1);
      sign = (std::popcount(below) % 2 == 0) ? 1 : -1;
    }
    c(bra, ket) = sign;
  }
  return c;
}

// Twice the charge of a basis state, as an integer.
std::int64_t twice_charge(const ModeSet& m, const FockState& s) {
  std::int64_t q = 2 * (std::popcount(s.b_occ) - std::popcount(s.d_occ));
  if (m.has_zero_mode) q += s.a_occ ? 1 : -1;
  return q;
}

std::vector<int> parse_labels(std::string_view text) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) invalid("bad label '" + std::string(item) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

ModeSet ModeSet::with_modes(int k, bool zero_mode) {
  if (k < 0) invalid("mode count must be >= 0");
  ModeSet m;
  for (int i = 1; i <= k; ++i) m.labels.push_back(i);
  m.has_zero_mode = zero_mode;
  return m;
}

std::size_t ModeSet::index_of(int label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error(ErrorCode::UnknownLabel, "no mode labelled " + std::to_string(label));
  return static_cast<std::size_t>(it - labels.begin());
}

void validate(const ModeSet& m) {
  if (m.mode_count() > 63) invalid("at most 31 paired modes are supported");
  std::set<int> seen(m.labels.begin(), m.labels.end());
  if (seen.size() != m.labels.size()) invalid("mode labels must be distinct");
}

std::optional<SignedState> apply_ladder(const ModeSet& m, const FockState& s, Ladder op, int label) {
  std::size_t idx = 0;
  if (op == Ladder::A || op == Ladder::ADagger) {
    if (!m.has_zero_mode) throw Error(ErrorCode::UnknownLabel, "mode set has no zero mode");
  } else {
    idx = m.index_of(label);
  }
  const std::uint64_t index = basis_index(m, s);
  const std::size_t bit = bit_of(m, op, idx);
  const bool occupied = (index >> bit) & 1U;
  if (is_creation(op) == occupied) return std::nullopt;  // Pauli blocking / empty mode
  const std::uint64_t below = index & ((std::uint64_t{1} << bit) - 1);
  SignedState out;
  out.sign = (std::popcount(below) % 2 == 0) ? 1 : -1;
  out.state = basis_state(m, index ^ (std::uint64_t{1} << bit));
  return out;
}

Rational charge_eigenvalue(const ModeSet& m, const FockState& s) { return Rational(twice_charge(m, s), 2); }

namespace {

using SparseVector = std::map<std::uint64_t, Rational>;

// n = c^+ c applied through the ladder operators.
void add_number(const ModeSet& m, const FockState& s, Ladder down, Ladder up, int label, Rational coeff,
                SparseVector& out) {
  const auto lowered = apply_ladder(m, s, down, label);
  if (!lowered) return;
  const auto raised = apply_ladder(m, lowered->state, up, label);
  if (!raised) return;
  out[basis_index(m, raised->state)] += coeff * (lowered->sign * raised->sign);
}

// Q|s> built term by term from the operator expansion, not from the
// occupation-count shortcut.
SparseVector apply_charge(const ModeSet& m, const FockState& s) {
  SparseVector out;
  for (int label : m.labels) {
    add_number(m, s, Ladder::B, Ladder::BDagger, label, Rational(1), out);
    add_number(m, s, Ladder::D, Ladder::DDagger, label, Rational(-1), out);
  }
  if (m.has_zero_mode) {
    add_number(m, s, Ladder::A, Ladder::ADagger, 0, Rational(1), out);
    out[basis_index(m, s)] -= Rational(1, 2);
  }
  return out;
}

}  // namespace

Rational charge_variance(const ModeSet& m, const FockState& s) {
  validate(m);
  const SparseVector q = apply_charge(m, s);
  Rational second(0), mean(0);
  for (const auto& [index, amplitude] : q) second += amplitude * amplitude;
  if (auto it = q.find(basis_index(m, s)); it != q.end()) mean = it->second;
  return second - mean * mean;
}

Rational charge_variance(const ModeSet& m, std::span<const WeightedState> sup) {
  Rational total(0), mean(0), second(0);
  for (std::size_t i = 0; i < sup.size(); ++i) {
    if (sup[i].weight < 0) invalid("negative weight");
    for (std::size_t j = 0; j < i; ++j)
      if (sup[j].state == sup[i].state) invalid("superposition lists a basis state twice");
    const Rational q = charge_eigenvalue(m, sup[i].state);
    total += sup[i].weight;
    mean += sup[i].weight * q;
    second += sup[i].weight * q * q;
  }
  if (total != Rational(1)) invalid("weights sum to " + to_string(total) + ", not 1");
  return second - mean * mean;
}

FockState conjugate(const FockState& s) { return FockState{s.d_occ, s.b_occ, !s.a_occ}; }

FockState parse_state(const ModeSet& m, std::string_view text) {
  FockState s;
  while (!text.empty()) {
    const auto semi = text.find(';');
    auto group = text.substr(0, semi);
    const auto colon = group.find(':');
    if (colon == std::string_view::npos) invalid("expected '<b|d|a>:<labels>' in '" + std::string(group) + "'");
    const auto kind = group.substr(0, colon);
    const auto values = parse_labels(group.substr(colon + 1));
    if (kind == "b" || kind == "d") {
      std::uint64_t& mask = kind == "b" ? s.b_occ : s.d_occ;
      for (int label : values) mask |= std::uint64_t{1} << m.index_of(label);
    } else if (kind == "a") {
      if (values.size() != 1 || (values[0] != 0 && values[0] != 1)) invalid("a occupation must be 0 or 1");
      if (values[0] == 1 && !m.has_zero_mode) throw Error(ErrorCode::UnknownLabel, "mode set has no zero mode");
      s.a_occ = values[0] == 1;
    } else {
      invalid("unknown mode group '" + std::string(kind) + "'");
    }
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return s;
}

std::string format_state(const ModeSet& m, const FockState& s) {
  auto list = [&](std::uint64_t mask) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!((mask >> i) & 1U)) continue;
      if (!out.empty()) out += ',';
      out += std::to_string(m.labels[i]);
    }
    return out;
  };
  std::string out;
  if (s.b_occ) out += "b:" + list(s.b_occ);
  if (s.d_occ) out += (out.empty() ? "" : ";") + std::string("d:") + list(s.d_occ);
  if (m.has_zero_mode) out += (out.empty() ? "" : ";") + std::string("a:") + (s.a_occ ? "1" : "0");
  return out;
}

std::uint64_t basis_index(const ModeSet& m, const FockState& s) {
  const std::size_t k = m.size();
  std::uint64_t idx = s.b_occ | (s.d_occ << k);
  if (m.has_zero_mode && s.a_occ) idx |= std::uint64_t{1} << (2 * k);
  return idx;
}

FockState basis_state(const ModeSet& m, std::uint64_t index) {
  const std::size_t k = m.size();
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  FockState s;
  s.b_occ = index & mask;
  s.d_occ = (index >> k) & mask;
  s.a_occ = m.has_zero_mode && ((index >> (2 * k)) & 1U);
  return s;
}

std::vector<Rational> charge_spectrum(const ModeSet& m) {
  validate(m);
  std::set<std::int64_t> twice;
  const std::uint64_t dim = std::uint64_t{1} << m.mode_count();
  for (std::uint64_t i = 0; i < dim; ++i) twice.insert(twice_charge(m, basis_state(m, i)));
  std::vector<Rational> out;
  for (std::int64_t q : twice) out.emplace_back(q, 2);
  return out;
}

CarReport verify_car_algebra(const ModeSet& m, int max_k, SignConvention conv) {
  validate(m);
  if (static_cast<int>(m.size()) > max_k) {
    throw Error(ErrorCode::DimensionTooLarge, "K = " + std::to_string(m.size()) + " exceeds max_K = " +
                                                  std::to_string(max_k));
  }
  const std::size_t modes = m.mode_count();
  const std::size_t dim = std::size_t{1} << modes;

  std::vector<IntMatrix> c, cdag;
  for (std::size_t j = 0; j < modes; ++j) {
    c.push_back(annihilator(dim, j, conv));
    cdag.push_back(c.back().transpose());
  }
  const IntMatrix id = IntMatrix::identity(dim);
  const IntMatrix zero(dim);

  CarReport r;
  r.dimension = dim;
  r.canonical = true;
  r.mixed_vanish = true;
  for (std::size_t i = 0; i < modes; ++i) {
    for (std::size_t j = 0; j < modes; ++j) {
      const IntMatrix cc_dag = c[i] * cdag[j] + cdag[j] * c[i];
      r.canonical = r.canonical && (cc_dag == (i == j ? id : zero));
      r.mixed_vanish = r.mixed_vanish && (c[i] * c[j] + c[j] * c[i]).is_zero();
      r.mixed_vanish = r.mixed_vanish && (cdag[i] * cdag[j] + cdag[j] * cdag[i]).is_zero();
      r.checks += 3;
    }
  }

  // 2Q in symmetric ordering, straight from the mode expansion:
  // sum (b^+b + d d^+ - b b^+ - d^+d) + (a^+a - a a^+).
  const std::size_t k = m.size();
  IntMatrix two_q(dim);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& b = c[i];
    const auto& bd = cdag[i];
    const auto& d = c[k + i];
    const auto& dd = cdag[k + i];
    two_q = two_q + bd * b + d * dd - b * bd - dd * d;
  }
  if (m.has_zero_mode) two_q = two_q + cdag[2 * k] * c[2 * k] - c[2 * k] * cdag[2 * k];

  r.charge_matches = true;
  r.spectrum_ok = true;
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t y = 0; y < dim; ++y) {
      const std::int64_t want = x == y ? twice_charge(m, basis_state(m, x)) : 0;
      if (two_q(x, y) != want) r.charge_matches = false;
    }
    const bool odd = (two_q(x, x) % 2) != 0;
    if (odd != m.has_zero_mode) r.spectrum_ok = false;
  }
  ++r.checks;
  ++r.checks;

  r.charge_commutes = true;
  for (std::size_t j = 0; j < modes; ++j) {
    const IntMatrix number = cdag[j] * c[j];
    r.charge_commutes = r.charge_commutes && (two_q * number == number * two_q);
    ++r.checks;
  }
  return r;
}

}  // namespace fraclab::fock
