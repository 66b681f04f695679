#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kripke {

using NodeSet = std::uint64_t;  // bitmask over node indices; frames have <= 64 nodes

inline constexpr std::size_t kMaxFrameNodes = 64;

// Finite frame with the full order relation. Construction does not validate;
// call validate_frame (loaders and model builders do).
class Frame {
 public:
  Frame() = default;
  Frame(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& leq);
  static Frame from_indices(std::size_t n, const std::vector<std::pair<int, int>>& leq);
  // Reflexive-transitive closure of the given covering pairs.
  static Frame from_hasse(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& cover);
  static Frame chain(std::size_t n);
  static Frame antichain(std::size_t n);

  std::size_t size() const { return names_.size(); }
  const std::string& name(int v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }
  int index(std::string_view name) const;  // throws ModelError on unknown node
  bool leq(int v, int w) const { return up_[v] >> w & 1; }
  NodeSet up(int v) const { return up_[v]; }
  NodeSet down(int v) const;
  NodeSet all() const;
  std::vector<int> up_list(int v) const;
  std::vector<std::pair<int, int>> pairs() const;
  // (a,b) pairs whose names were not declared as nodes, kept for validation.
  const std::vector<std::pair<std::string, std::string>>& dangling() const { return dangling_; }
  std::vector<int> roots() const;  // minimal nodes
  bool is_rooted() const { return roots().size() == 1; }

  bool operator==(const Frame& o) const { return names_ == o.names_ && up_ == o.up_; }

 private:
  std::vector<std::string> names_;
  std::vector<NodeSet> up_;
  std::vector<std::pair<std::string, std::string>> dangling_;
};

struct FrameViolation {
  enum class Kind { DuplicateNode, UnknownNode, Reflexivity, Antisymmetry, Transitivity };
  Kind kind;
  std::vector<std::string> nodes;
  std::string describe() const;
};

std::vector<FrameViolation> validate_frame(const Frame& fr);
void require_valid(const Frame& fr);  // throws ModelError listing the first violation

std::vector<std::string> up_set(const Frame& fr, std::string_view node);

// All up-closed node sets, in increasing mask order.
std::vector<NodeSet> up_sets(const Frame& fr);

struct Valuation {
  std::map<std::string, NodeSet> sets;
  NodeSet at(const std::string& p) const {
    auto it = sets.find(p);
    return it == sets.end() ? 0 : it->second;
  }
  bool operator==(const Valuation& o) const = default;
};

bool is_persistent(const Frame& fr, const Valuation& v);

// Random-access enumeration of persistent valuations: index i decodes in
// mixed radix over the up-sets, so ranges can be split across threads.
class ValuationEnumerator {
 public:
  ValuationEnumerator(const Frame& fr, std::vector<std::string> letters);
  std::uint64_t size() const { return size_; }
  Valuation at(std::uint64_t i) const;
  void fill(std::uint64_t i, std::vector<NodeSet>& per_letter) const;
  const std::vector<std::string>& letters() const { return letters_; }

 private:
  std::vector<std::string> letters_;
  std::vector<NodeSet> ups_;
  std::uint64_t size_;
};

std::vector<Valuation> enumerate_valuations(const Frame& fr, const std::vector<std::string>& letters);

// Rooted frames with exactly n nodes, one per isomorphism class, nodes named
// "0".."n-1" with "0" the root.
std::vector<Frame> rooted_frames(std::size_t n);
std::vector<Frame> rooted_frames_up_to(std::size_t n);

std::string to_dot(const Frame& fr);

nlohmann::json frame_to_json(const Frame& fr);
Frame frame_from_json(const nlohmann::json& j);  // validates

std::string node_set_str(const Frame& fr, NodeSet s);

}  // namespace kripke
