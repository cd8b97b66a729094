#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ffenergy {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_pow(std::uint64_t base, unsigned exponent) {
  return boost::multiprecision::pow(BigInt(base), exponent);
}

inline std::string to_decimal(const BigInt& value) { return value.str(); }

inline double to_double(const BigInt& value) { return value.convert_to<double>(); }

}  // namespace ffenergy
