#include "kripke/hf.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "kripke/error.hpp"

namespace kripke {
namespace {

constexpr std::uint32_t kNone = 0xffffffffu;
constexpr unsigned kChunkBits = 14;
constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
constexpr std::size_t kMaxChunks = 1 << 12;  // 67M sets

struct Node {
  std::vector<std::uint32_t> elems;  // sorted ids
  std::uint32_t rank = 0;
  std::uint32_t fst = kNone, snd = kNone;
  std::int64_t natural = -1;
};

struct VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Nodes live in fixed chunks that never move, so readers need no lock once
// they hold an id. Interning is serialized by a mutex.
class Pool {
 public:
  Pool() { intern({}); }

  const Node& node(std::uint32_t id) const {
    const Node* chunk = chunks_[id >> kChunkBits].load(std::memory_order_acquire);
    return chunk[id & (kChunkSize - 1)];
  }

  std::uint32_t intern(std::vector<std::uint32_t> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(elems);
    if (it != index_.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(count_);
    std::size_t c = id >> kChunkBits;
    if (c >= kMaxChunks) throw BudgetError("hereditarily finite set pool exhausted");
    if (!chunks_[c].load(std::memory_order_relaxed)) {
      owned_.push_back(std::make_unique<Node[]>(kChunkSize));
      chunks_[c].store(owned_.back().get(), std::memory_order_release);
    }
    Node& n = owned_[c][id & (kChunkSize - 1)];
    n.elems = elems;
    for (auto e : elems) n.rank = std::max(n.rank, node(e).rank + 1);
    classify(n);
    index_.emplace(std::move(elems), id);
    ++count_;
    return id;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return count_;
  }

 private:
  void classify(Node& n) {
    // ordinal iff elements are exactly the ordinals below |n|
    bool ord = true;
    for (auto e : n.elems) {
      auto k = node(e).natural;
      if (k < 0 || k >= static_cast<std::int64_t>(n.elems.size())) {
        ord = false;
        break;
      }
    }
    if (ord) n.natural = static_cast<std::int64_t>(n.elems.size());
    // {{a}} or {{a},{a,b}}
    if (n.elems.size() == 1) {
      const Node& s = node(n.elems[0]);
      if (s.elems.size() == 1) n.fst = n.snd = s.elems[0];
    } else if (n.elems.size() == 2) {
      const Node& x = node(n.elems[0]);
      const Node& y = node(n.elems[1]);
      const Node* one = nullptr;
      const Node* two = nullptr;
      if (x.elems.size() == 1 && y.elems.size() == 2) {
        one = &x;
        two = &y;
      } else if (y.elems.size() == 1 && x.elems.size() == 2) {
        one = &y;
        two = &x;
      }
      if (one) {
        std::uint32_t a = one->elems[0];
        if (two->elems[0] == a) {
          n.fst = a;
          n.snd = two->elems[1];
        } else if (two->elems[1] == a) {
          n.fst = a;
          n.snd = two->elems[0];
        }
      }
    }
  }

  mutable std::mutex mu_;
  std::array<std::atomic<Node*>, kMaxChunks> chunks_{};
  std::vector<std::unique_ptr<Node[]>> owned_;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> index_;
  std::size_t count_ = 0;
};

Pool& pool() {
  static Pool p;
  return p;
}

}  // namespace

HFSet::HFSet() : id_(0) {}

HFSet HFSet::make(std::vector<HFSet> elems) {
  std::vector<std::uint32_t> ids;
  ids.reserve(elems.size());
  for (auto e : elems) ids.push_back(e.id());
  return HFSet(pool().intern(std::move(ids)));
}

HFSet HFSet::from_id(std::uint32_t id) { return HFSet(id); }

std::span<const std::uint32_t> HFSet::element_ids() const { return pool().node(id_).elems; }

std::vector<HFSet> HFSet::elements() const {
  std::vector<HFSet> out;
  for (auto e : element_ids()) out.push_back(HFSet(e));
  return out;
}

std::size_t HFSet::size() const { return pool().node(id_).elems.size(); }
std::uint32_t HFSet::rank() const { return pool().node(id_).rank; }

bool HFSet::contains(HFSet x) const {
  auto ids = element_ids();
  return std::binary_search(ids.begin(), ids.end(), x.id());
}

bool HFSet::is_ordinal() const { return pool().node(id_).natural >= 0; }

std::optional<std::size_t> HFSet::as_natural() const {
  auto n = pool().node(id_).natural;
  if (n < 0) return std::nullopt;
  return static_cast<std::size_t>(n);
}

std::optional<std::pair<HFSet, HFSet>> HFSet::as_pair() const {
  const Node& n = pool().node(id_);
  if (n.fst == kNone) return std::nullopt;
  return std::make_pair(HFSet(n.fst), HFSet(n.snd));
}

HFSet ordinal(std::size_t n) {
  static std::mutex mu;
  static std::vector<HFSet> cache{HFSet()};
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= n) cache.push_back(successor(cache.back()));
  return cache[n];
}

HFSet singleton(HFSet a) { return HFSet::make({a}); }
HFSet unordered_pair(HFSet a, HFSet b) { return HFSet::make({a, b}); }
HFSet kpair(HFSet a, HFSet b) { return HFSet::make({singleton(a), unordered_pair(a, b)}); }

HFSet successor(HFSet a) {
  auto e = a.elements();
  e.push_back(a);
  return HFSet::make(std::move(e));
}

HFSet set_union(HFSet a) {
  std::vector<HFSet> out;
  for (auto x : a.elements())
    for (auto y : x.elements()) out.push_back(y);
  return HFSet::make(std::move(out));
}

std::uint32_t rank(HFSet x) { return x.rank(); }

std::vector<HFSet> tc_of(std::span<const HFSet> xs) {
  std::vector<char> seen;
  std::vector<std::uint32_t> stack;
  std::vector<HFSet> out;
  auto visit = [&](std::uint32_t id) {
    if (id >= seen.size()) seen.resize(std::max<std::size_t>(id + 1, seen.size() * 2), 0);
    if (seen[id]) return;
    seen[id] = 1;
    stack.push_back(id);
    out.push_back(HFSet::from_id(id));
  };
  for (auto x : xs) visit(x.id());
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    for (auto e : pool().node(id).elems) visit(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<HFSet> tc(HFSet x) {
  std::vector<HFSet> elems = x.elements();
  return tc_of(elems);
}

namespace {

// Total order on sets by (rank, size, sorted children lexicographically),
// independent of the order sets were interned.
int canonical_cmp(HFSet a, HFSet b) {
  if (a == b) return 0;
  if (a.rank() != b.rank()) return a.rank() < b.rank() ? -1 : 1;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  auto ea = a.elements();
  auto eb = b.elements();
  auto less = [](HFSet x, HFSet y) { return canonical_cmp(x, y) < 0; };
  std::sort(ea.begin(), ea.end(), less);
  std::sort(eb.begin(), eb.end(), less);
  for (std::size_t i = 0; i < ea.size(); ++i) {
    int c = canonical_cmp(ea[i], eb[i]);
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace

bool canonical_less(HFSet a, HFSet b) { return canonical_cmp(a, b) < 0; }

void sort_canonical(std::vector<HFSet>& v) { std::sort(v.begin(), v.end(), canonical_less); }

std::string to_literal(HFSet x) {
  if (x.empty()) return "{}";
  if (auto n = x.as_natural()) return "ord(" + std::to_string(*n) + ")";
  if (auto p = x.as_pair()) return "pair(" + to_literal(p->first) + "," + to_literal(p->second) + ")";
  auto elems = x.elements();
  sort_canonical(elems);
  std::string s = "{";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) s += ",";
    s += to_literal(elems[i]);
  }
  return s + "}";
}

namespace {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view t) : t_(t) {}

  HFSet parse_all() {
    HFSet s = parse();
    skip();
    if (pos_ != t_.size()) throw ParseError("trailing input in set literal", pos_);
    return s;
  }

  HFSet parse() {
    skip();
    if (eat('{')) {
      std::vector<HFSet> elems;
      skip();
      if (eat('}')) return HFSet();
      do {
        elems.push_back(parse());
        skip();
      } while (eat(','));
      expect('}');
      return HFSet::make(std::move(elems));
    }
    if (keyword("ord")) {
      expect('(');
      skip();
      std::size_t start = pos_;
      while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected a natural number", pos_);
      std::size_t n = std::stoul(std::string(t_.substr(start, pos_ - start)));
      expect(')');
      return ordinal(n);
    }
    if (keyword("pair")) {
      expect('(');
      HFSet a = parse();
      expect(',');
      HFSet b = parse();
      expect(')');
      return kpair(a, b);
    }
    throw ParseError("expected set literal", pos_);
  }

  std::size_t pos() const { return pos_; }

 private:
  void skip() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < t_.size() && t_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }
  bool keyword(std::string_view kw) {
    skip();
    if (t_.substr(pos_, kw.size()) == kw) {
      pos_ += kw.size();
      return true;
    }
    return false;
  }

  std::string_view t_;
  std::size_t pos_ = 0;
};

}  // namespace

HFSet parse_hf_literal(std::string_view text) { return LiteralParser(text).parse_all(); }

nlohmann::json to_nested_json(HFSet x) {
  auto elems = x.elements();
  sort_canonical(elems);
  nlohmann::json arr = nlohmann::json::array();
  for (auto e : elems) arr.push_back(to_nested_json(e));
  return arr;
}

std::size_t hf_pool_size() { return pool().size(); }

}  // namespace kripke
