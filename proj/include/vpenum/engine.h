#ifndef VPENUM_ENGINE_H_
#define VPENUM_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "vpenum/ecs.h"
#include "vpenum/enumerate.h"
#include "vpenum/nested.h"
#include "vpenum/vpt.h"

namespace vpenum {

// How the engine learns that the transducer is I/O-unambiguous.
enum class AmbiguityMode {
  kCheckDeterministic,  // verify structural I/O-determinism, refuse otherwise
  kTrustUnambiguous,    // caller vouches for it
  kDeterminizeFirst,    // run io_determinize first
};

// The transducer to run under `mode`. Throws PreconditionError when the
// structural check fails.
Vpt prepare_transducer(const Vpt& vpt, AmbiguityMode mode);

// L(v) . {(out, k)}, or v itself for the empty output.
NodeHandle if_prod(Ecs& ecs, NodeHandle v, OutputId out, std::uint32_t k);

struct SymbolStats {
  std::uint32_t visits = 0;   // inner-loop visits, each doing O(1) ECS ops
  std::uint32_t ecs_ops = 0;  // add/prod/union calls
  std::uint32_t nodes = 0;    // arena nodes appended
};

struct LevelEntry {
  StateId p;
  StateId q;
  NodeHandle node;
};
struct StackEntry {
  StateId p;
  StackId x;
  StateId q;
  NodeHandle node;
};

// One pass over the document. S maps state pairs to arena nodes, and T is
// a stack of tables keyed by (state, stack symbol, state); before position
// k is read, S holds the outputs of runs over the current level and the top
// of T those of the level below.
class Preprocessor {
 public:
  explicit Preprocessor(const Vpt& vpt, bool record_stats = false);

  // Throws NestingError when a close arrives with an empty stack.
  void feed(const Token& token);
  // EOF. Throws NestingError if an open is still pending.
  NodeHandle finish();
  // Finalization at the current point without ending the stream; only
  // meaningful at depth 0 (returns the empty handle otherwise).
  NodeHandle checkpoint();

  std::size_t position() const { return position_; }
  std::size_t depth() const { return depth_; }
  std::size_t tokens() const { return position_ - 1; }

  const Ecs& ecs() const { return ecs_; }
  Ecs& ecs() { return ecs_; }
  Ecs take_ecs() { return std::move(ecs_); }

  NodeHandle level_entry(StateId p, StateId q) const;
  std::vector<LevelEntry> level_entries() const;
  std::vector<StackEntry> top_entries() const;

  std::uint64_t total_visits() const { return total_visits_; }
  std::uint64_t max_visits() const { return max_visits_; }
  const std::vector<SymbolStats>& symbol_stats() const { return stats_; }

 private:
  class LevelTable {
   public:
    void reset(std::size_t n) {
      n_ = n;
      cells_.assign(n * n, NodeHandle());
      active_.clear();
    }
    NodeHandle get(StateId p, StateId q) const { return cells_[p * n_ + q]; }
    void set(StateId p, StateId q, NodeHandle v) {
      std::size_t i = p * n_ + q;
      if (cells_[i].empty()) active_.push_back(static_cast<std::uint32_t>(i));
      cells_[i] = v;
    }
    void clear() {
      for (std::uint32_t i : active_) cells_[i] = NodeHandle();
      active_.clear();
    }
    const std::vector<std::uint32_t>& active() const { return active_; }
    std::size_t n() const { return n_; }

   private:
    std::size_t n_ = 0;
    std::vector<NodeHandle> cells_;
    std::vector<std::uint32_t> active_;
  };

  struct StackTable {
    std::vector<StackEntry> entries;
    std::unordered_map<std::uint64_t, std::uint32_t> index;

    void clear() {
      entries.clear();
      index.clear();
    }
  };

  void open_step(SymbolId a, std::uint32_t k);
  void close_step(SymbolId a, std::uint32_t k);
  void neutral_step(SymbolId a, std::uint32_t k);
  NodeHandle finalize();
  std::uint64_t stack_key(StateId p, StackId x, StateId q) const {
    return (static_cast<std::uint64_t>(p) * num_stack_ + x) * num_states_ + q;
  }

  const Vpt& vpt_;
  std::size_t num_states_;
  std::size_t num_stack_;
  std::vector<bool> initial_;
  std::vector<std::vector<std::uint32_t>> push_by_symbol_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> pop_by_key_;
  std::vector<std::vector<std::uint32_t>> neutral_by_key_;  // symbol*|Q|+from

  Ecs ecs_;
  NodeHandle eps_;
  LevelTable level_;
  LevelTable next_level_;
  std::vector<StackTable> stack_;
  std::size_t depth_ = 0;
  std::size_t position_ = 1;

  bool record_stats_;
  std::uint64_t step_visits_ = 0;
  std::uint64_t total_visits_ = 0;
  std::uint64_t max_visits_ = 0;
  std::vector<SymbolStats> stats_;
};

struct PreprocessResult {
  Ecs ecs;
  NodeHandle v_out;
  std::size_t tokens = 0;
  std::uint64_t total_visits = 0;
  std::uint64_t max_visits = 0;
  std::vector<SymbolStats> stats;  // per position when recorded
};

template <TokenSource Source>
PreprocessResult preprocess(const Vpt& vpt, Source& source,
                            bool record_stats = false) {
  Preprocessor pre(vpt, record_stats);
  while (auto token = source.next()) pre.feed(*token);
  NodeHandle out = pre.finish();
  PreprocessResult r;
  r.tokens = pre.tokens();
  r.total_visits = pre.total_visits();
  r.max_visits = pre.max_visits();
  r.stats = pre.symbol_stats();
  r.ecs = pre.take_ecs();
  r.v_out = out;
  return r;
}

// Preprocessing result plus its enumerator.
class Evaluation {
 public:
  explicit Evaluation(PreprocessResult result,
                      std::size_t smoothing = Enumerator::kDefaultSmoothing);

  std::optional<OutputWord> next() { return enumerator_.next(); }
  const PreprocessResult& result() const { return *result_; }
  const Enumerator& enumerator() const { return enumerator_; }

 private:
  std::unique_ptr<PreprocessResult> result_;
  Enumerator enumerator_;
};

template <TokenSource Source>
Evaluation evaluate(const Vpt& vpt, Source& source) {
  return Evaluation(preprocess(vpt, source));
}

// All outputs for an in-memory document, in enumeration order.
std::vector<OutputWord> evaluate_all(const Vpt& vpt,
                                     std::span<const Token> tokens);

}  // namespace vpenum

#endif  // VPENUM_ENGINE_H_
