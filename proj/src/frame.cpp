#include "kripke/frame.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "kripke/error.hpp"

namespace kripke {

Frame::Frame(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& leq)
    : names_(std::move(nodes)) {
  if (names_.size() > kMaxFrameNodes) throw ModelError("frames are limited to 64 nodes");
  up_.assign(names_.size(), 0);
  for (auto& [a, b] : leq) {
    auto ia = std::find(names_.begin(), names_.end(), a);
    auto ib = std::find(names_.begin(), names_.end(), b);
    if (ia == names_.end() || ib == names_.end()) {
      dangling_.emplace_back(a, b);
      continue;
    }
    up_[ia - names_.begin()] |= NodeSet{1} << (ib - names_.begin());
  }
}

Frame Frame::from_indices(std::size_t n, const std::vector<std::pair<int, int>>& leq) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  std::vector<std::pair<std::string, std::string>> p;
  for (auto [a, b] : leq) p.emplace_back(std::to_string(a), std::to_string(b));
  return Frame(std::move(names), p);
}

Frame Frame::from_hasse(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& cover) {
  Frame f(std::move(nodes), cover);
  for (std::size_t v = 0; v < f.size(); ++v) f.up_[v] |= NodeSet{1} << v;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 0; v < f.size(); ++v) {
      NodeSet acc = f.up_[v];
      for (std::size_t w = 0; w < f.size(); ++w)
        if (f.up_[v] >> w & 1) acc |= f.up_[w];
      if (acc != f.up_[v]) {
        f.up_[v] = acc;
        changed = true;
      }
    }
  }
  return f;
}

Frame Frame::chain(std::size_t n) {
  std::vector<std::pair<int, int>> p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) p.emplace_back(i, j);
  return from_indices(n, p);
}

Frame Frame::antichain(std::size_t n) {
  std::vector<std::pair<int, int>> p;
  for (std::size_t i = 0; i < n; ++i) p.emplace_back(i, i);
  return from_indices(n, p);
}

int Frame::index(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ModelError("unknown node '" + std::string(name) + "'");
  return static_cast<int>(it - names_.begin());
}

NodeSet Frame::down(int v) const {
  NodeSet d = 0;
  for (std::size_t u = 0; u < size(); ++u)
    if (leq(static_cast<int>(u), v)) d |= NodeSet{1} << u;
  return d;
}

NodeSet Frame::all() const { return size() == 64 ? ~NodeSet{0} : (NodeSet{1} << size()) - 1; }

std::vector<int> Frame::up_list(int v) const {
  std::vector<int> out;
  for (std::size_t w = 0; w < size(); ++w)
    if (leq(v, static_cast<int>(w))) out.push_back(static_cast<int>(w));
  return out;
}

std::vector<std::pair<int, int>> Frame::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t v = 0; v < size(); ++v)
    for (std::size_t w = 0; w < size(); ++w)
      if (leq(static_cast<int>(v), static_cast<int>(w))) out.emplace_back(v, w);
  return out;
}

std::vector<int> Frame::roots() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < size(); ++v) {
    NodeSet below = down(static_cast<int>(v)) & ~(NodeSet{1} << v);
    if (!below) out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string FrameViolation::describe() const {
  std::string s;
  switch (kind) {
    case Kind::DuplicateNode: s = "duplicate node"; break;
    case Kind::UnknownNode: s = "pair mentions unknown node"; break;
    case Kind::Reflexivity: s = "reflexivity fails"; break;
    case Kind::Antisymmetry: s = "antisymmetry fails"; break;
    case Kind::Transitivity: s = "transitivity fails"; break;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) s += (i ? ", " : ": ") + nodes[i];
  return s;
}

std::vector<FrameViolation> validate_frame(const Frame& fr) {
  using K = FrameViolation::Kind;
  std::vector<FrameViolation> out;
  std::set<std::string> seen;
  for (auto& n : fr.names())
    if (!seen.insert(n).second) out.push_back({K::DuplicateNode, {n}});
  for (auto& [a, b] : fr.dangling()) out.push_back({K::UnknownNode, {a, b}});
  int n = static_cast<int>(fr.size());
  for (int a = 0; a < n; ++a)
    if (!fr.leq(a, a)) out.push_back({K::Reflexivity, {fr.name(a)}});
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (fr.leq(a, b) && fr.leq(b, a)) out.push_back({K::Antisymmetry, {fr.name(a), fr.name(b)}});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (fr.leq(a, b) && fr.leq(b, c) && !fr.leq(a, c))
          out.push_back({K::Transitivity, {fr.name(a), fr.name(b), fr.name(c)}});
  return out;
}

void require_valid(const Frame& fr) {
  auto v = validate_frame(fr);
  if (!v.empty()) throw ModelError("invalid frame: " + v.front().describe());
}

std::vector<std::string> up_set(const Frame& fr, std::string_view node) {
  int v = fr.index(node);
  std::vector<std::string> out;
  for (int w : fr.up_list(v)) out.push_back(fr.name(w));
  return out;
}

std::vector<NodeSet> up_sets(const Frame& fr) {
  if (fr.size() > 24) throw BudgetError("up-set enumeration limited to 24 nodes");
  std::vector<NodeSet> out;
  NodeSet n = NodeSet{1} << fr.size();
  for (NodeSet s = 0; s < n; ++s) {
    bool ok = true;
    for (std::size_t v = 0; v < fr.size() && ok; ++v)
      if ((s >> v & 1) && (fr.up(static_cast<int>(v)) & ~s)) ok = false;
    if (ok) out.push_back(s);
  }
  return out;
}

bool is_persistent(const Frame& fr, const Valuation& val) {
  for (auto& [p, s] : val.sets)
    for (std::size_t v = 0; v < fr.size(); ++v)
      if ((s >> v & 1) && (fr.up(static_cast<int>(v)) & ~s)) return false;
  return true;
}

ValuationEnumerator::ValuationEnumerator(const Frame& fr, std::vector<std::string> letters)
    : letters_(std::move(letters)), ups_(up_sets(fr)) {
  std::sort(letters_.begin(), letters_.end());
  letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
  size_ = 1;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (size_ > (std::uint64_t{1} << 62) / ups_.size()) throw BudgetError("too many valuations");
    size_ *= ups_.size();
  }
}

void ValuationEnumerator::fill(std::uint64_t i, std::vector<NodeSet>& per_letter) const {
  per_letter.resize(letters_.size());
  for (std::size_t k = 0; k < letters_.size(); ++k) {
    per_letter[k] = ups_[i % ups_.size()];
    i /= ups_.size();
  }
}

Valuation ValuationEnumerator::at(std::uint64_t i) const {
  std::vector<NodeSet> s;
  fill(i, s);
  Valuation v;
  for (std::size_t k = 0; k < letters_.size(); ++k) v.sets[letters_[k]] = s[k];
  return v;
}

std::vector<Valuation> enumerate_valuations(const Frame& fr, const std::vector<std::string>& letters) {
  ValuationEnumerator e(fr, letters);
  std::vector<Valuation> out;
  out.reserve(e.size());
  for (std::uint64_t i = 0; i < e.size(); ++i) out.push_back(e.at(i));
  return out;
}

namespace {

// Strict order as lt[i] = bitmask of j with i < j.
using Order = std::vector<NodeSet>;

// Code of the order under relabeling perm (perm[old] = new): the bits of
// new-i < new-j for i < j, read as a number.
std::uint64_t order_code(const Order& lt, const std::vector<int>& perm) {
  std::size_t m = lt.size();
  std::vector<NodeSet> nl(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (lt[i] >> j & 1) nl[perm[i]] |= NodeSet{1} << perm[j];
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) code = code << 1 | (nl[i] >> j & 1);
  return code;
}

bool is_linear_extension(const Order& lt, const std::vector<int>& perm) {
  for (std::size_t i = 0; i < lt.size(); ++i)
    for (std::size_t j = 0; j < lt.size(); ++j)
      if ((lt[i] >> j & 1) && perm[i] > perm[j]) return false;
  return true;
}

// Canonical relabeling: the linear extension with the largest code.
std::pair<std::uint64_t, std::vector<int>> canonical(const Order& lt) {
  std::vector<int> perm(lt.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = 0;
  std::vector<int> best_perm;
  bool have = false;
  do {
    if (!is_linear_extension(lt, perm)) continue;
    auto c = order_code(lt, perm);
    if (!have || c > best) {
      best = c;
      best_perm = perm;
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, best_perm};
}

// Naturally labeled posets on m nodes: node k is added maximal with a
// down-closed set of predecessors.
void extend(Order& lt, std::size_t m, std::map<std::uint64_t, Order>& reps) {
  std::size_t have = lt.size();
  if (have == m) {
    auto [code, perm] = canonical(lt);
    if (!reps.count(code)) {
      Order canon(m, 0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (lt[i] >> j & 1) canon[perm[i]] |= NodeSet{1} << perm[j];
      reps.emplace(code, canon);
    }
    return;
  }
  for (NodeSet down = 0; down < (NodeSet{1} << have); ++down) {
    // down-closed: every predecessor of a member is a member
    bool ok = true;
    for (std::size_t i = 0; i < have && ok; ++i)
      if (down >> i & 1)
        for (std::size_t j = 0; j < have; ++j)
          if ((lt[j] >> i & 1) && !(down >> j & 1)) ok = false;
    if (!ok) continue;
    Order next = lt;
    next.push_back(0);
    for (std::size_t i = 0; i < have; ++i)
      if (down >> i & 1) next[i] |= NodeSet{1} << have;
    extend(next, m, reps);
  }
}

}  // namespace

std::vector<Frame> rooted_frames(std::size_t n) {
  if (n == 0) return {};
  if (n > 8) throw BudgetError("rooted frame enumeration limited to 8 nodes");
  std::size_t m = n - 1;
  std::map<std::uint64_t, Order> reps;
  Order empty;
  extend(empty, m, reps);
  std::vector<Frame> out;
  // larger codes first: more comparable pairs, chains before antichains
  for (auto it = reps.rbegin(); it != reps.rend(); ++it) {
    const Order& lt = it->second;
    std::vector<std::pair<int, int>> leq;
    for (std::size_t i = 0; i < n; ++i) leq.emplace_back(i, i);
    for (std::size_t i = 1; i < n; ++i) leq.emplace_back(0, i);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (lt[i] >> j & 1) leq.emplace_back(i + 1, j + 1);
    out.push_back(Frame::from_indices(n, leq));
  }
  return out;
}

std::vector<Frame> rooted_frames_up_to(std::size_t n) {
  std::vector<Frame> out;
  for (std::size_t k = 1; k <= n; ++k) {
    auto f = rooted_frames(k);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

std::string to_dot(const Frame& fr) {
  std::ostringstream os;
  os << "digraph frame {\n  rankdir=BT;\n";
  for (std::size_t v = 0; v < fr.size(); ++v) os << "  \"" << fr.name(v) << "\";\n";
  int n = static_cast<int>(fr.size());
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      if (v == w || !fr.leq(v, w)) continue;
      bool cover = true;
      for (int u = 0; u < n && cover; ++u)
        if (u != v && u != w && fr.leq(v, u) && fr.leq(u, w)) cover = false;
      if (cover) os << "  \"" << fr.name(v) << "\" -> \"" << fr.name(w) << "\";\n";
    }
  os << "}\n";
  return os.str();
}

nlohmann::json frame_to_json(const Frame& fr) {
  nlohmann::json j;
  j["nodes"] = fr.names();
  nlohmann::json leq = nlohmann::json::array();
  for (auto [a, b] : fr.pairs()) leq.push_back({fr.name(a), fr.name(b)});
  j["leq"] = leq;
  return j;
}

Frame frame_from_json(const nlohmann::json& j) {
  std::vector<std::string> nodes;
  for (auto& n : j.at("nodes")) nodes.push_back(n.get<std::string>());
  std::vector<std::pair<std::string, std::string>> leq;
  for (auto& p : j.at("leq")) {
    if (!p.is_array() || p.size() != 2) throw ModelError("leq entries must be [a, b] pairs");
    leq.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  Frame fr(std::move(nodes), leq);
  require_valid(fr);
  return fr;
}

std::string node_set_str(const Frame& fr, NodeSet s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t v = 0; v < fr.size(); ++v)
    if (s >> v & 1) {
      out += (first ? "" : ",") + fr.name(v);
      first = false;
    }
  return out + "}";
}

}  // namespace kripke
