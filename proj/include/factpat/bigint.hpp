#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "factpat/errors.hpp"

namespace factpat {

using BigInt = boost::multiprecision::cpp_int;
using Ratio = boost::multiprecision::cpp_rational;

inline Ratio make_ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("ratio with zero denominator");
  return Ratio(num, den);
}

inline std::string to_string(const Ratio& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline double to_double(const Ratio& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

inline BigInt big_pow(const BigInt& base, unsigned e) { return boost::multiprecision::pow(base, e); }

// Bit access shared by the square-and-multiply routines, for machine and big exponents.
inline unsigned bit_length(std::uint64_t e) noexcept { return static_cast<unsigned>(std::bit_width(e)); }
inline bool test_bit(std::uint64_t e, unsigned i) noexcept { return (e >> i) & 1U; }
inline unsigned popcount(std::uint64_t e) noexcept { return static_cast<unsigned>(std::popcount(e)); }

inline unsigned bit_length(const BigInt& e) {
  return e == 0 ? 0U : static_cast<unsigned>(boost::multiprecision::msb(e)) + 1U;
}
inline bool test_bit(const BigInt& e, unsigned i) { return boost::multiprecision::bit_test(e, i); }
inline unsigned popcount(const BigInt& e) {
  unsigned n = 0;
  for (unsigned i = 0, len = bit_length(e); i < len; ++i) n += test_bit(e, i) ? 1U : 0U;
  return n;
}

/// Multiplications used by left-to-right square-and-multiply for exponent e >= 1:
/// floor(log2 e) + popcount(e) - 1.
template <class E>
unsigned square_multiply_count(const E& e) {
  const unsigned len = bit_length(e);
  return len == 0 ? 0U : (len - 1) + popcount(e) - 1;
}

/// floor(n^(1/k)) for n >= 0, k >= 1.
inline BigInt floor_root(const BigInt& n, unsigned k) {
  if (n < 0 || k == 0) throw DomainError("floor_root: bad arguments");
  if (n < 2 || k == 1) return n;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (bit_length(n) / k + 1);
  while (lo < hi) {  // largest x with x^k <= n
    BigInt mid = (lo + hi + 1) >> 1;
    if (big_pow(mid, k) <= n)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

/// Closed rational interval [lo, hi].
struct Interval {
  Ratio lo;
  Ratio hi;
};

/// Enclosure of n^(1/k) of width at most 2^-bits.
inline Interval root_interval(const BigInt& n, unsigned k, unsigned bits = 64) {
  const BigInt scale = BigInt(1) << bits;
  const BigInt s = floor_root(n * big_pow(scale, k), k);
  Ratio lo(s, scale);
  Ratio hi = big_pow(s, k) == n * big_pow(scale, k) ? lo : Ratio(s + 1, scale);
  return {lo, hi};
}

}  // namespace factpat
