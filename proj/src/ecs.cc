#include "vpenum/ecs.h"

#include <cassert>
#include <ostream>

namespace vpenum {

namespace {

constexpr std::uint8_t kDepthCap = 255;

}  // namespace

NodeHandle Ecs::add(Output payload) {
  ++counters_.adds;
  NodeHandle h(static_cast<std::uint32_t>(nodes_.size()));
  nodes_.push_back({static_cast<std::uint32_t>(payload.symbol),
                    payload.position, NodeLabel::kSymbol, 0,
                    EpsilonCase::kNoEps});
  return h;
}

NodeHandle Ecs::epsilon_node() {
  ++counters_.epsilons;
  return push_epsilon();
}

NodeHandle Ecs::push_epsilon() {
  NodeHandle h(static_cast<std::uint32_t>(nodes_.size()));
  nodes_.push_back({0, 0, NodeLabel::kEpsilon, 0, EpsilonCase::kIsEps});
  return h;
}

NodeHandle Ecs::push_inner(NodeLabel label, NodeHandle l, NodeHandle r) {
  assert(!l.empty() && !r.empty());
  const Node& ln = nodes_[l.index()];
  [[maybe_unused]] const Node& rn = nodes_[r.index()];
  std::uint8_t depth = 0;
  EpsilonCase eps = EpsilonCase::kNoEps;
  if (label == NodeLabel::kUnion) {
    depth = ln.output_depth == kDepthCap ? kDepthCap : ln.output_depth + 1;
    if (ln.eps == EpsilonCase::kIsEps) {
      assert(rn.eps == EpsilonCase::kNoEps);
      eps = EpsilonCase::kCase3;
    } else {
      assert(ln.eps == EpsilonCase::kNoEps && rn.eps == EpsilonCase::kNoEps);
    }
  } else {
    assert(ln.eps == EpsilonCase::kNoEps && rn.eps == EpsilonCase::kNoEps);
  }
  NodeHandle h(static_cast<std::uint32_t>(nodes_.size()));
  nodes_.push_back({l.index(), r.index(), label, depth, eps});
  return h;
}

bool Ecs::is_safe(NodeHandle v) const {
  auto plain_safe = [this](NodeHandle u) {
    int d = output_depth(u);
    if (d == 0) return true;
    return d == 1 && output_depth(right(u)) <= 1;
  };
  switch (epsilon_case(v)) {
    case EpsilonCase::kIsEps:
      return true;
    case EpsilonCase::kCase3:
      return label(left(v)) == NodeLabel::kEpsilon &&
             epsilon_case(right(v)) == EpsilonCase::kNoEps &&
             plain_safe(right(v));
    case EpsilonCase::kNoEps:
      return plain_safe(v);
  }
  return false;
}

// Union of two epsilon-free safe nodes. One node when either side is an
// output node, otherwise the three-node gadget: the two output nodes on the
// left spine, the two right remainders united below them.
NodeHandle Ecs::plain_union(NodeHandle v3, NodeHandle v4) {
  if (is_output_node(v3)) return push_inner(NodeLabel::kUnion, v3, v4);
  if (is_output_node(v4)) return push_inner(NodeLabel::kUnion, v4, v3);
  NodeHandle star = push_inner(NodeLabel::kUnion, right(v3), right(v4));
  NodeHandle mid = push_inner(NodeLabel::kUnion, left(v4), star);
  return push_inner(NodeLabel::kUnion, left(v3), mid);
}

NodeHandle Ecs::unite(NodeHandle v1, NodeHandle v2) {
  ++counters_.unions;
  if (v1.empty()) return v2;
  if (v2.empty()) return v1;
  using E = EpsilonCase;
  E e1 = epsilon_case(v1);
  E e2 = epsilon_case(v2);
  switch (e1) {
    case E::kNoEps:
      switch (e2) {
        case E::kNoEps:
          return plain_union(v1, v2);
        case E::kIsEps:
          return push_inner(NodeLabel::kUnion, v2, v1);
        case E::kCase3:
          return push_inner(NodeLabel::kUnion, left(v2),
                            plain_union(v1, right(v2)));
      }
      break;
    case E::kIsEps:
      switch (e2) {
        case E::kNoEps:
          return push_inner(NodeLabel::kUnion, v1, v2);
        case E::kIsEps:
          return v1;
        case E::kCase3:
          return v2;
      }
      break;
    case E::kCase3:
      switch (e2) {
        case E::kNoEps:
          return push_inner(NodeLabel::kUnion, left(v1),
                            plain_union(right(v1), v2));
        case E::kIsEps:
          return v1;
        case E::kCase3:
          return push_inner(NodeLabel::kUnion, left(v2),
                            plain_union(right(v1), right(v2)));
      }
      break;
  }
  assert(false);
  return v1;
}

NodeHandle Ecs::prod(NodeHandle v1, NodeHandle v2) {
  ++counters_.prods;
  if (v1.empty() || v2.empty()) return NodeHandle::empty_set();
  using E = EpsilonCase;
  E e1 = epsilon_case(v1);
  E e2 = epsilon_case(v2);
  if (e1 == E::kIsEps) return v2;
  if (e2 == E::kIsEps) return v1;
  if (e1 == E::kNoEps && e2 == E::kNoEps) return plain_prod(v1, v2);

  if (e1 == E::kNoEps) {
    // L1 . ({eps} + R2) = L1 R2 + L1; the product goes left so the node
    // stays safe even when v1 is itself a union.
    NodeHandle p = plain_prod(v1, right(v2));
    return push_inner(NodeLabel::kUnion, p, v1);
  }
  if (e2 == E::kNoEps) {
    // ({eps} + R1) . L2 = R1 L2 + L2
    NodeHandle p = plain_prod(right(v1), v2);
    return push_inner(NodeLabel::kUnion, p, v2);
  }

  // ({eps} + R1) . ({eps} + R2) = eps + R1 + R1 R2 + R2
  NodeHandle r1 = right(v1);
  NodeHandle r2 = right(v2);
  NodeHandle v4 = plain_prod(r1, r2);
  if (is_output_node(r1)) {
    NodeHandle v3 = push_inner(NodeLabel::kUnion, v4, r2);
    NodeHandle v2n = push_inner(NodeLabel::kUnion, r1, v3);
    return push_inner(NodeLabel::kUnion, push_epsilon(), v2n);
  }
  // r1 is a union: split it so that its output node heads the spine.
  NodeHandle v5 = push_inner(NodeLabel::kUnion, right(r1), r2);
  NodeHandle v3 = push_inner(NodeLabel::kUnion, v4, v5);
  NodeHandle v2n = push_inner(NodeLabel::kUnion, left(r1), v3);
  return push_inner(NodeLabel::kUnion, left(v1), v2n);
}

void Ecs::write_dot(std::ostream& out) const {
  out << "digraph ecs {\n  node [shape=circle, fontsize=10];\n";
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    out << "  n" << i << " [label=\"";
    switch (n.label) {
      case NodeLabel::kUnion: out << "&cup;"; break;
      case NodeLabel::kProduct: out << "&odot;"; break;
      case NodeLabel::kEpsilon: out << "&epsilon;"; break;
      case NodeLabel::kSymbol:
        out << n.first << "@" << n.second;
        break;
    }
    out << "\\n#" << i << "\"];\n";
    if (n.label == NodeLabel::kUnion || n.label == NodeLabel::kProduct) {
      out << "  n" << i << " -> n" << n.first << " [style=dashed];\n";
      out << "  n" << i << " -> n" << n.second << ";\n";
    }
  }
  out << "}\n";
}

}  // namespace vpenum
