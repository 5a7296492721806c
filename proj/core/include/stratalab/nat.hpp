#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stratalab {

// Arbitrary-precision naturals. Godel numbers and program indices outgrow 64 bits immediately.
using Nat = boost::multiprecision::cpp_int;

std::string to_decimal(const Nat& n);
std::optional<Nat> parse_decimal(std::string_view digits);

// Big-endian base-256 digits; the empty vector denotes 0.
std::vector<std::uint8_t> to_bytes_be(const Nat& n);
Nat from_bytes_be(const std::vector<std::uint8_t>& bytes);

// Cantor pairing pi(a,b) = (a+b)(a+b+1)/2 + b and its inverse.
Nat pair(const Nat& a, const Nat& b);
std::pair<Nat, Nat> unpair(const Nat& z);

// <a,b,c> = pi(pi(a,b),c).
Nat triple(const Nat& a, const Nat& b, const Nat& c);
struct Triple {
  Nat a, b, c;
  bool operator==(const Triple&) const = default;
};
Triple untriple(const Nat& n);

// Bit length of n (0 for n == 0).
std::size_t bit_length(const Nat& n);

// Returns nullopt when n does not fit.
std::optional<std::uint64_t> to_u64(const Nat& n);

}  // namespace stratalab
