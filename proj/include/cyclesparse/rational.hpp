#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace cyclesparse {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<BigInt>;

inline Rat pow2_rat(int e) {
  if (e >= 0) return Rat(BigInt(1) << e, 1);
  return Rat(1, BigInt(1) << (-e));
}

inline double rat_to_double(const Rat& r) {
  return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

}  // namespace cyclesparse
