#include "vpenum/enumerate.h"

#include <algorithm>
#include <cassert>
#include <limits>
#include <utility>

namespace vpenum {

OutputTree::OutputTree(const Ecs& ecs, NodeHandle v) : ecs_(&ecs) {
  assert(!v.empty() && ecs.epsilon_case(v) == EpsilonCase::kNoEps);
  pending_.push_back({v, kNil, 0});
  phase_ = Phase::kBuild;
  print_to_ = nullptr;
  while (step()) {}
}

std::uint32_t OutputTree::alloc(NodeHandle v) {
  std::uint32_t t;
  if (!free_.empty()) {
    t = free_.back();
    free_.pop_back();
    pool_[t] = TreeNode{v};
  } else {
    t = static_cast<std::uint32_t>(pool_.size());
    pool_.push_back(TreeNode{v});
  }
  ++live_;
  return t;
}

void OutputTree::release(std::uint32_t t) {
  free_.push_back(t);
  --live_;
}

void OutputTree::link(std::uint32_t parent, std::uint8_t side,
                      std::uint32_t child) {
  if (parent == kNil) {
    root_ = child;
  } else if (side == 0) {
    pool_[parent].first = child;
  } else {
    pool_[parent].second = child;
  }
}

void OutputTree::print(OutputWord& out) const {
  if (root_ == kNil) return;
  std::vector<std::uint32_t> stack{root_};
  while (!stack.empty()) {
    const TreeNode& n = pool_[stack.back()];
    stack.pop_back();
    switch (ecs_->label(n.node)) {
      case NodeLabel::kSymbol:
        out.push_back(ecs_->payload(n.node));
        break;
      case NodeLabel::kProduct:
        stack.push_back(n.second);
        stack.push_back(n.first);
        break;
      case NodeLabel::kUnion:
        stack.push_back(n.first);
        break;
      case NodeLabel::kEpsilon:
        break;
    }
  }
}

std::vector<OutputTree::Entry> OutputTree::preorder() const {
  std::vector<Entry> out;
  if (root_ == kNil) return out;
  std::vector<std::pair<std::uint32_t, int>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto [t, depth] = stack.back();
    stack.pop_back();
    const TreeNode& n = pool_[t];
    out.push_back({n.node, depth});
    if (n.second != kNil) stack.push_back({n.second, depth + 1});
    if (n.first != kNil) stack.push_back({n.first, depth + 1});
  }
  return out;
}

bool OutputTree::advance() {
  begin_advance(nullptr);
  while (step()) {}
  return !exhausted();
}

void OutputTree::begin_advance(OutputWord* print_to) {
  print_to_ = print_to;
  frames_.clear();
  pending_.clear();
  ret_ = Ret::kNone;
  if (root_ == kNil) {
    phase_ = Phase::kIdle;
    return;
  }
  frames_.push_back({root_, 0});
  phase_ = Phase::kSearch;
}

void OutputTree::start_print() {
  print_stack_.clear();
  print_stack_.push_back(root_);
  phase_ = Phase::kPrint;
}

// One visit of the right-to-left post-order search for the last union node
// that still has an alternative. Products try their right subtree first;
// a union whose subtree is spent switches to its right child, and every
// product reached through its left child rebuilds its right subtree.
bool OutputTree::search_step() {
  std::size_t top = frames_.size() - 1;
  std::uint32_t t = frames_[top].tree;
  NodeHandle node = pool_[t].node;
  NodeLabel lab = ecs_->label(node);

  if (ret_ == Ret::kNone) {
    if (lab == NodeLabel::kSymbol || lab == NodeLabel::kEpsilon) {
      release(t);
      frames_.pop_back();
      ret_ = Ret::kExhausted;
    } else if (lab == NodeLabel::kProduct) {
      frames_[top].stage = 1;
      frames_.push_back({pool_[t].second, 0});
    } else {
      frames_[top].stage = 1;
      frames_.push_back({pool_[t].first, 0});
    }
    return true;
  }

  if (lab == NodeLabel::kProduct) {
    if (frames_[top].stage == 1) {
      if (ret_ == Ret::kAdvanced) {
        frames_.pop_back();
      } else {
        frames_[top].stage = 2;
        ret_ = Ret::kNone;
        frames_.push_back({pool_[t].first, 0});
      }
    } else if (ret_ == Ret::kExhausted) {
      release(t);
      frames_.pop_back();
    } else {
      pool_[t].second = kNil;
      pending_.push_back({ecs_->right(node), t, 1});
      frames_.pop_back();
    }
    return true;
  }

  // Union node.
  if (ret_ == Ret::kExhausted) {
    std::uint32_t parent = kNil;
    std::uint8_t side = 0;
    if (top > 0) {
      const Frame& p = frames_[top - 1];
      parent = p.tree;
      side = (ecs_->label(pool_[parent].node) == NodeLabel::kProduct &&
              p.stage == 1)
                 ? 1
                 : 0;
    }
    pending_.push_back({ecs_->right(node), parent, side});
    release(t);
    ret_ = Ret::kAdvanced;
  }
  frames_.pop_back();
  return true;
}

bool OutputTree::step() {
  for (;;) {
    switch (phase_) {
      case Phase::kIdle:
        return false;
      case Phase::kSearch:
        if (frames_.empty()) {
          if (ret_ == Ret::kExhausted) {
            root_ = kNil;
            phase_ = Phase::kIdle;
            return false;
          }
          phase_ = Phase::kBuild;
          continue;
        }
        ++steps_;
        search_step();
        return true;
      case Phase::kBuild: {
        if (pending_.empty()) {
          if (print_to_ != nullptr) {
            start_print();
            continue;
          }
          phase_ = Phase::kIdle;
          return false;
        }
        ++steps_;
        Pending p = pending_.back();
        pending_.pop_back();
        std::uint32_t t = alloc(p.node);
        link(p.parent, p.side, t);
        NodeLabel lab = ecs_->label(p.node);
        if (lab == NodeLabel::kUnion) {
          pending_.push_back({ecs_->left(p.node), t, 0});
        } else if (lab == NodeLabel::kProduct) {
          pending_.push_back({ecs_->right(p.node), t, 1});
          pending_.push_back({ecs_->left(p.node), t, 0});
        }
        return true;
      }
      case Phase::kPrint: {
        if (print_stack_.empty()) {
          phase_ = Phase::kIdle;
          return false;
        }
        ++steps_;
        const TreeNode& n = pool_[print_stack_.back()];
        print_stack_.pop_back();
        switch (ecs_->label(n.node)) {
          case NodeLabel::kSymbol:
            print_to_->push_back(ecs_->payload(n.node));
            break;
          case NodeLabel::kProduct:
            print_stack_.push_back(n.second);
            print_stack_.push_back(n.first);
            break;
          case NodeLabel::kUnion:
            print_stack_.push_back(n.first);
            break;
          case NodeLabel::kEpsilon:
            break;
        }
        return true;
      }
    }
  }
}

Enumerator::Enumerator(const Ecs& ecs, NodeHandle root, std::size_t smoothing)
    : ecs_(&ecs), root_(root), smoothing_(std::max<std::size_t>(1, smoothing)) {}

std::uint64_t Enumerator::run_job(std::uint64_t budget) {
  std::uint64_t start = tree_.steps();
  while (job_running_ && tree_.steps() - start < budget) {
    if (!tree_.step()) job_running_ = false;
  }
  std::uint64_t used = tree_.steps() - start;
  steps_ += used;
  return used;
}

std::optional<OutputWord> Enumerator::emit_pending() {
  last_tree_size_ = tree_.size();
  std::uint64_t budget =
      smoothing_ * std::max<std::size_t>(1, pending_.size());
  job_out_.clear();
  tree_.begin_advance(&job_out_);
  job_running_ = true;
  run_job(budget);
  return std::move(pending_);
}

std::optional<OutputWord> Enumerator::next() {
  std::uint64_t before = steps_;
  std::optional<OutputWord> result;
  ++steps_;

  if (mode_ == Mode::kFresh) {
    if (root_.empty()) {
      mode_ = Mode::kDone;
    } else {
      switch (ecs_->epsilon_case(root_)) {
        case EpsilonCase::kIsEps:
          mode_ = Mode::kDone;
          result = OutputWord{};
          break;
        case EpsilonCase::kCase3:
          tree_root_ = ecs_->right(root_);
          mode_ = Mode::kStartTree;
          result = OutputWord{};
          break;
        case EpsilonCase::kNoEps:
          tree_root_ = root_;
          mode_ = Mode::kStartTree;
          break;
      }
    }
    if (result || mode_ == Mode::kDone) {
      last_delay_ = steps_ - before;
      return result;
    }
  }

  if (mode_ == Mode::kStartTree) {
    tree_ = OutputTree(*ecs_, tree_root_);
    pending_.clear();
    tree_.print(pending_);
    steps_ += tree_.steps() + tree_.size();
    mode_ = Mode::kStreaming;
    result = emit_pending();
  } else if (mode_ == Mode::kStreaming) {
    run_job(std::numeric_limits<std::uint64_t>::max());
    if (tree_.exhausted()) {
      mode_ = Mode::kDone;
    } else {
      std::swap(pending_, job_out_);
      result = emit_pending();
    }
  }
  last_delay_ = steps_ - before;
  return result;
}

std::vector<OutputWord> enumerate_all(const Ecs& ecs, NodeHandle root) {
  std::vector<OutputWord> out;
  Enumerator e(ecs, root);
  while (auto w = e.next()) out.push_back(std::move(*w));
  return out;
}

}  // namespace vpenum
