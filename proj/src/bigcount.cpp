#include "tensorpow/bigcount.hpp"

#include <cmath>
#include <stdexcept>

namespace tensorpow {

BigCount big_factorial(std::uint64_t n) {
  BigCount r(1);
  for (std::uint64_t k = 2; k <= n; ++k) r *= k;
  return r;
}

BigCount big_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return BigCount(0);
  if (k > n - k) k = n - k;
  BigCount r(1);
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact: r is binom(n-k+i, i) after this step
  }
  return r;
}

BigCount big_pow(std::uint64_t base, std::uint64_t exp) {
  BigCount r(1), b(base);
  while (exp != 0) {
    if (exp & 1) r *= b;
    exp >>= 1;
    if (exp != 0) b *= b;
  }
  return r;
}

double log_big(const BigCount& v) {
  if (v <= 0) throw std::domain_error("log_big: argument must be positive");
  const std::size_t bits = boost::multiprecision::msb(v);
  if (bits < 62) return std::log(static_cast<double>(v));
  // Top 62 bits as mantissa, remainder as a power of two.
  const BigCount top = v >> (bits - 61);
  return std::log(static_cast<double>(top)) +
         static_cast<double>(bits - 61) * std::log(2.0);
}

std::string to_string(const BigCount& v) { return v.str(); }

}  // namespace tensorpow
