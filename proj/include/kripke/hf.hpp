#pragma once

// Hereditarily finite sets. Every set is interned in a process-wide pool, so
// extensional equality is id equality.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kripke {

class HFSet {
 public:
  HFSet();  // the empty set

  static HFSet make(std::vector<HFSet> elems);
  // id must come from id()/element_ids() of an existing set.
  static HFSet from_id(std::uint32_t id);

  std::uint32_t id() const { return id_; }
  std::span<const std::uint32_t> element_ids() const;
  std::vector<HFSet> elements() const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::uint32_t rank() const;
  bool contains(HFSet x) const;

  bool is_ordinal() const;
  // The n with this == ordinal(n), if this is an ordinal.
  std::optional<std::size_t> as_natural() const;
  // Kuratowski decomposition {{a},{a,b}} -> (a,b).
  std::optional<std::pair<HFSet, HFSet>> as_pair() const;

  friend bool operator==(HFSet a, HFSet b) { return a.id_ == b.id_; }
  friend auto operator<=>(HFSet a, HFSet b) { return a.id_ <=> b.id_; }

 private:
  explicit HFSet(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

struct HFSetHash {
  std::size_t operator()(HFSet s) const { return std::hash<std::uint32_t>()(s.id()); }
};

HFSet ordinal(std::size_t n);
HFSet singleton(HFSet a);
HFSet unordered_pair(HFSet a, HFSet b);
HFSet kpair(HFSet a, HFSet b);  // Kuratowski pair
HFSet successor(HFSet a);       // a ∪ {a}
HFSet set_union(HFSet a);       // ∪a
std::uint32_t rank(HFSet x);

// Transitive closure: every set reachable by ∈ from x (x itself excluded),
// sorted by id.
std::vector<HFSet> tc(HFSet x);
std::vector<HFSet> tc_of(std::span<const HFSet> xs);  // ∪ tc(x) ∪ xs

// Deterministic ordering independent of interning order.
bool canonical_less(HFSet a, HFSet b);
void sort_canonical(std::vector<HFSet>& v);

// Literal syntax: {} | { lit, ... } | ord(n) | pair(lit, lit)
std::string to_literal(HFSet x);
HFSet parse_hf_literal(std::string_view text);
nlohmann::json to_nested_json(HFSet x);

std::size_t hf_pool_size();

}  // namespace kripke
