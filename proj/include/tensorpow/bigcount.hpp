#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace tensorpow {

// Exact counting integer.  Lattice counts near the safety ceiling reach a
// few hundred bits; nothing in this library ever rounds a count.
using BigCount = boost::multiprecision::cpp_int;

BigCount big_factorial(std::uint64_t n);
BigCount big_binomial(std::uint64_t n, std::uint64_t k);  // 0 for k > n
BigCount big_pow(std::uint64_t base, std::uint64_t exp);

// Natural log of a positive count (for ratio diagnostics, not for counting).
double log_big(const BigCount& v);

std::string to_string(const BigCount& v);

}  // namespace tensorpow
