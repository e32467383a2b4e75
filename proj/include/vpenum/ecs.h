#ifndef VPENUM_ECS_H_
#define VPENUM_ECS_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace vpenum {

using OutputId = std::int32_t;
inline constexpr OutputId kEpsilonOutput = -1;

// One element of an output word: an output symbol tagged with the input
// position that produced it.
struct Output {
  OutputId symbol = 0;
  std::uint32_t position = 0;

  friend auto operator<=>(const Output&, const Output&) = default;
};
using OutputWord = std::vector<Output>;

class NodeHandle {
 public:
  static constexpr std::uint32_t kEmptyIndex = 0xffffffffu;

  constexpr NodeHandle() = default;
  constexpr explicit NodeHandle(std::uint32_t index) : index_(index) {}

  static constexpr NodeHandle empty_set() { return NodeHandle(); }
  constexpr bool empty() const { return index_ == kEmptyIndex; }
  constexpr std::uint32_t index() const { return index_; }

  friend constexpr bool operator==(NodeHandle, NodeHandle) = default;

 private:
  std::uint32_t index_ = kEmptyIndex;
};

enum class NodeLabel : std::uint8_t { kUnion, kProduct, kSymbol, kEpsilon };

// Where epsilon sits in a node's language:
//   kNoEps: no epsilon leaf reachable at all
//   kIsEps: the node is an epsilon leaf
//   kCase3: union whose left child is an epsilon leaf and whose right child
//           is safe and epsilon-free
enum class EpsilonCase : std::uint8_t { kNoEps, kIsEps, kCase3 };

struct EcsCounters {
  std::uint64_t adds = 0;
  std::uint64_t prods = 0;
  std::uint64_t unions = 0;
  std::uint64_t epsilons = 0;

  std::uint64_t ops() const { return adds + prods + unions + epsilons; }
};

// Enumerable compact set with epsilon: an append-only DAG. Every handle ever
// returned keeps denoting the same language.
//
// unite() requires the languages minus epsilon to be disjoint and prod()
// requires every concatenated word to split uniquely. Neither is checked.
// The empty handle is the identity of unite() and annihilates prod().
class Ecs {
 public:
  Ecs() = default;

  NodeHandle add(Output payload);
  NodeHandle epsilon_node();
  NodeHandle prod(NodeHandle v1, NodeHandle v2);
  NodeHandle unite(NodeHandle v1, NodeHandle v2);

  NodeLabel label(NodeHandle v) const { return nodes_[v.index()].label; }
  NodeHandle left(NodeHandle v) const {
    return NodeHandle(nodes_[v.index()].first);
  }
  NodeHandle right(NodeHandle v) const {
    return NodeHandle(nodes_[v.index()].second);
  }
  Output payload(NodeHandle v) const {
    const Node& n = nodes_[v.index()];
    return {static_cast<OutputId>(n.first), n.second};
  }
  int output_depth(NodeHandle v) const {
    return nodes_[v.index()].output_depth;
  }
  EpsilonCase epsilon_case(NodeHandle v) const {
    return nodes_[v.index()].eps;
  }
  bool contains_epsilon(NodeHandle v) const {
    return nodes_[v.index()].eps != EpsilonCase::kNoEps;
  }
  // Output nodes are symbol leaves and products.
  bool is_output_node(NodeHandle v) const {
    NodeLabel l = label(v);
    return l == NodeLabel::kSymbol || l == NodeLabel::kProduct;
  }
  bool is_safe(NodeHandle v) const;

  std::size_t size() const { return nodes_.size(); }
  const EcsCounters& counters() const { return counters_; }
  void reserve(std::size_t n) { nodes_.reserve(n); }

  // Graphviz dump: dashed edges go to left children, solid to right ones.
  void write_dot(std::ostream& out) const;

 private:
  // Leaves store (symbol, position) in (first, second); inner nodes store
  // child indices.
  struct Node {
    std::uint32_t first;
    std::uint32_t second;
    NodeLabel label;
    std::uint8_t output_depth;
    EpsilonCase eps;
  };

  NodeHandle push_inner(NodeLabel label, NodeHandle l, NodeHandle r);
  NodeHandle push_epsilon();
  NodeHandle plain_union(NodeHandle v3, NodeHandle v4);
  NodeHandle plain_prod(NodeHandle v1, NodeHandle v2) {
    return push_inner(NodeLabel::kProduct, v1, v2);
  }

  std::vector<Node> nodes_;
  EcsCounters counters_;
};

}  // namespace vpenum

#endif  // VPENUM_ECS_H_
