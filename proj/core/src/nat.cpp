#include "stratalab/nat.hpp"

#include <algorithm>

namespace stratalab {

std::string to_decimal(const Nat& n) { return n.str(); }

std::optional<Nat> parse_decimal(std::string_view digits) {
  if (digits.empty()) return std::nullopt;
  Nat out = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    out *= 10;
    out += static_cast<unsigned>(c - '0');
  }
  return out;
}

std::vector<std::uint8_t> to_bytes_be(const Nat& n) {
  std::vector<std::uint8_t> out;
  boost::multiprecision::export_bits(n, std::back_inserter(out), 8, true);
  if (out.size() == 1 && out[0] == 0) out.clear();
  return out;
}

Nat from_bytes_be(const std::vector<std::uint8_t>& bytes) {
  Nat out = 0;
  if (bytes.empty()) return out;
  boost::multiprecision::import_bits(out, bytes.begin(), bytes.end(), 8, true);
  return out;
}

Nat pair(const Nat& a, const Nat& b) {
  Nat s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<Nat, Nat> unpair(const Nat& z) {
  // w = floor((sqrt(8z+1)-1)/2) is the diagonal holding z.
  Nat disc = 8 * z + 1;
  Nat w = (boost::multiprecision::sqrt(disc) - 1) / 2;
  Nat t = w * (w + 1) / 2;
  Nat b = z - t;
  return {w - b, b};
}

Nat triple(const Nat& a, const Nat& b, const Nat& c) { return pair(pair(a, b), c); }

Triple untriple(const Nat& n) {
  auto [ab, c] = unpair(n);
  auto [a, b] = unpair(ab);
  return {a, b, c};
}

std::size_t bit_length(const Nat& n) {
  if (n == 0) return 0;
  return boost::multiprecision::msb(n) + 1;
}

std::optional<std::uint64_t> to_u64(const Nat& n) {
  if (n < 0 || bit_length(n) > 64) return std::nullopt;
  return n.convert_to<std::uint64_t>();
}

}  // namespace stratalab
