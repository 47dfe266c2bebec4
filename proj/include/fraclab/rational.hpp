#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace fraclab {

// Compare only Rational against Rational. Boost 1.74's mixed rational/int
// operator== recurses forever under C++20's reversed-operator rules.
using Rational = boost::rational<std::int64_t>;

/// "p/q" with q > 0, or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace fraclab
