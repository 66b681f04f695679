#include "kripke/coding.hpp"

#include <algorithm>
#include <limits>

#include "kripke/error.hpp"

namespace kripke {

BigNat cantor_pair(const BigNat& a, const BigNat& b) {
  BigNat s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<BigNat, BigNat> cantor_unpair(const BigNat& z) {
  // w = floor((sqrt(8z+1)-1)/2)
  BigNat w = (boost::multiprecision::sqrt(BigNat(8 * z + 1)) - 1) / 2;
  BigNat t = w * (w + 1) / 2;
  BigNat b = z - t;
  return {w - b, b};
}

BigNat code_seq(const std::vector<BigNat>& s) {
  BigNat acc = 0;
  for (auto it = s.rbegin(); it != s.rend(); ++it) acc = cantor_pair(*it, acc);
  return cantor_pair(BigNat(s.size()), acc);
}

BigNat code_seq_u64(const std::vector<std::uint64_t>& s) {
  std::vector<BigNat> b(s.begin(), s.end());
  return code_seq(b);
}

BigNat code_seq(std::initializer_list<std::uint64_t> s) {
  return code_seq_u64(std::vector<std::uint64_t>(s));
}

std::vector<BigNat> decode_seq(const BigNat& code) {
  auto [len, rest] = cantor_unpair(code);
  std::vector<BigNat> out;
  for (BigNat i = 0; i < len; ++i) {
    auto [a, r] = cantor_unpair(rest);
    out.push_back(a);
    rest = r;
  }
  if (rest != 0) throw Error("not a sequence code");
  return out;
}

std::optional<std::uint64_t> to_u64(const BigNat& n) {
  if (n < 0 || n > BigNat(std::numeric_limits<std::uint64_t>::max())) return std::nullopt;
  return static_cast<std::uint64_t>(n);
}

BigNat godel(const Formula& f) {
  // bijective base 256: digits 1..256 for bytes 0..255
  BigNat n = 0;
  for (unsigned char c : render(f)) n = n * 256 + (c + 1);
  return n;
}

Formula formula_from_godel(const BigNat& code) {
  std::string s;
  BigNat n = code;
  while (n > 0) {
    BigNat d = n % 256;
    if (d == 0) d = 256;
    s.push_back(static_cast<char>(static_cast<unsigned>(d) - 1));
    n = (n - d) / 256;
  }
  std::reverse(s.begin(), s.end());
  return parse_any(s);
}

}  // namespace kripke
