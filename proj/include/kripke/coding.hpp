#pragma once

// Sequence codes and Goedel numbers.
//
// pi(a,b) = (a+b)(a+b+1)/2 + b is the Cantor pairing. A sequence s is coded
// as pi(|s|, fold(s)) with fold([]) = 0 and fold(a:rest) = pi(a, fold(rest)).
// A formula's Goedel number is the bijective base-256 numeral of its
// rendering (render/parse round-trip, so this is injective and decodable).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kripke/syntax.hpp"

namespace kripke {

using BigNat = boost::multiprecision::cpp_int;

BigNat cantor_pair(const BigNat& a, const BigNat& b);
std::pair<BigNat, BigNat> cantor_unpair(const BigNat& z);

BigNat code_seq(const std::vector<BigNat>& s);
BigNat code_seq(std::initializer_list<std::uint64_t> s);
BigNat code_seq_u64(const std::vector<std::uint64_t>& s);
std::vector<BigNat> decode_seq(const BigNat& code);

std::optional<std::uint64_t> to_u64(const BigNat& n);

BigNat godel(const Formula& f);
Formula formula_from_godel(const BigNat& n);

}  // namespace kripke
