#ifndef VPENUM_ENUMERATE_H_
#define VPENUM_ENUMERATE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "vpenum/ecs.h"

namespace vpenum {

// A left-tilted output tree over an epsilon-free part of an Ecs. Moving to
// the next tree is a resumable job performed one unit step at a time, so a
// caller can interleave it with emitting the previous result.
class OutputTree {
 public:
  static constexpr std::uint32_t kNil = 0xffffffffu;

  OutputTree() = default;
  // Builds the first tree rooted at v. v must be non-empty and NoEps.
  OutputTree(const Ecs& ecs, NodeHandle v);

  bool exhausted() const { return root_ == kNil; }

  // Appends print(T) to out.
  void print(OutputWord& out) const;
  // Moves to the next tree in place. Returns false (and empties the tree)
  // after the last one.
  bool advance();

  // Resumable form: begin_advance() then step() until it returns false. When
  // print_to is given, the new tree is printed into it as part of the job.
  void begin_advance(OutputWord* print_to);
  bool step();

  // Live tree nodes (union, product and leaf nodes alike).
  std::size_t size() const { return live_; }
  std::uint64_t steps() const { return steps_; }

  // Pre-order listing of the arena nodes referenced by the tree, with depths.
  struct Entry {
    NodeHandle node;
    int depth;
  };
  std::vector<Entry> preorder() const;

 private:
  struct TreeNode {
    NodeHandle node;
    std::uint32_t first = kNil;
    std::uint32_t second = kNil;
  };
  struct Frame {
    std::uint32_t tree;
    std::uint8_t stage;
  };
  struct Pending {
    NodeHandle node;
    std::uint32_t parent;  // kNil: becomes the root
    std::uint8_t side;     // 0 first, 1 second
  };
  enum class Phase : std::uint8_t { kIdle, kSearch, kBuild, kPrint };
  enum class Ret : std::uint8_t { kNone, kAdvanced, kExhausted };

  std::uint32_t alloc(NodeHandle v);
  void release(std::uint32_t t);
  void link(std::uint32_t parent, std::uint8_t side, std::uint32_t child);
  void start_print();
  bool search_step();

  const Ecs* ecs_ = nullptr;
  std::vector<TreeNode> pool_;
  std::vector<std::uint32_t> free_;
  std::uint32_t root_ = kNil;
  std::size_t live_ = 0;
  std::uint64_t steps_ = 0;

  Phase phase_ = Phase::kIdle;
  Ret ret_ = Ret::kNone;
  std::vector<Frame> frames_;
  std::vector<Pending> pending_;
  std::vector<std::uint32_t> print_stack_;
  OutputWord* print_to_ = nullptr;
};

// Streams L(v) without repetition, one word per next() call. Work between
// two emissions is bounded by a constant times the size of the word being
// emitted: the next tree is computed while the current word is held back.
class Enumerator {
 public:
  static constexpr std::size_t kDefaultSmoothing = 16;

  Enumerator(const Ecs& ecs, NodeHandle root,
             std::size_t smoothing = kDefaultSmoothing);

  std::optional<OutputWord> next();

  // Unit steps executed so far, and during the latest next() call.
  std::uint64_t steps() const { return steps_; }
  std::uint64_t last_delay() const { return last_delay_; }
  // Size of the tree behind the most recently emitted non-empty word.
  std::size_t last_tree_size() const { return last_tree_size_; }

 private:
  enum class Mode : std::uint8_t { kFresh, kStartTree, kStreaming, kDone };

  std::uint64_t run_job(std::uint64_t budget);
  std::optional<OutputWord> emit_pending();

  const Ecs* ecs_;
  NodeHandle root_;
  NodeHandle tree_root_;
  std::size_t smoothing_;
  Mode mode_ = Mode::kFresh;
  OutputTree tree_;
  bool job_running_ = false;
  OutputWord pending_;
  OutputWord job_out_;
  std::size_t next_tree_size_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t last_delay_ = 0;
  std::size_t last_tree_size_ = 0;
};

// Convenience: the whole language as a vector, in enumeration order.
std::vector<OutputWord> enumerate_all(const Ecs& ecs, NodeHandle root);

}  // namespace vpenum

#endif  // VPENUM_ENUMERATE_H_
