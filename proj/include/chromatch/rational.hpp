#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace chromatch {

// Exact arithmetic for convex-combination weights and rounding targets.
// Doubles cannot certify "weighted sum is exactly zero"; rationals can.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline Rational l1_norm(const RationalVector& v) {
  Rational s = 0;
  for (const Rational& x : v) s += x < 0 ? -x : x;
  return s;
}

inline bool is_zero(const RationalVector& v) {
  for (const Rational& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace chromatch
