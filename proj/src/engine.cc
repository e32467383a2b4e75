#include "vpenum/engine.h"

#include <string>
#include <utility>

#include "vpenum/errors.h"

namespace vpenum {

Vpt prepare_transducer(const Vpt& vpt, AmbiguityMode mode) {
  switch (mode) {
    case AmbiguityMode::kCheckDeterministic:
      if (!is_io_deterministic(vpt)) {
        throw PreconditionError(
            "transducer is not I/O-deterministic (use --trust-unambiguous or "
            "--determinize-first)");
      }
      return vpt;
    case AmbiguityMode::kTrustUnambiguous:
      return vpt;
    case AmbiguityMode::kDeterminizeFirst:
      return io_determinize(vpt);
  }
  return vpt;
}

NodeHandle if_prod(Ecs& ecs, NodeHandle v, OutputId out, std::uint32_t k) {
  if (out == kEpsilonOutput || v.empty()) return v;
  return ecs.prod(v, ecs.add({out, k}));
}

Preprocessor::Preprocessor(const Vpt& vpt, bool record_stats)
    : vpt_(vpt),
      num_states_(vpt.num_states()),
      num_stack_(vpt.stack_symbols.size()),
      initial_(vpt.num_states(), false),
      record_stats_(record_stats) {
  std::size_t symbols = vpt.alphabet.size();
  push_by_symbol_.resize(symbols);
  neutral_by_key_.resize(symbols * num_states_);
  for (std::uint32_t i = 0; i < vpt.push.size(); ++i) {
    push_by_symbol_[vpt.push[i].symbol].push_back(i);
  }
  for (std::uint32_t i = 0; i < vpt.pop.size(); ++i) {
    const VptPop& r = vpt.pop[i];
    pop_by_key_[(static_cast<std::uint64_t>(r.symbol) << 32) |
                static_cast<std::uint32_t>(r.pop)]
        .push_back(i);
  }
  for (std::uint32_t i = 0; i < vpt.neutral.size(); ++i) {
    const VptNeutral& r = vpt.neutral[i];
    neutral_by_key_[r.symbol * num_states_ + r.from].push_back(i);
  }
  for (StateId q : vpt.initial) initial_[q] = true;

  level_.reset(num_states_);
  next_level_.reset(num_states_);
  eps_ = ecs_.epsilon_node();
  for (StateId q : vpt.initial) level_.set(q, q, eps_);
}

void Preprocessor::feed(const Token& token) {
  auto k = static_cast<std::uint32_t>(position_);
  std::uint64_t ops_before = ecs_.counters().ops();
  std::size_t nodes_before = ecs_.size();
  step_visits_ = 0;
  switch (token.kind) {
    case SymbolKind::kOpen: open_step(token.symbol, k); break;
    case SymbolKind::kClose: close_step(token.symbol, k); break;
    case SymbolKind::kNeutral: neutral_step(token.symbol, k); break;
  }
  total_visits_ += step_visits_;
  if (step_visits_ > max_visits_) max_visits_ = step_visits_;
  if (record_stats_) {
    stats_.push_back({static_cast<std::uint32_t>(step_visits_),
                      static_cast<std::uint32_t>(ecs_.counters().ops() -
                                                 ops_before),
                      static_cast<std::uint32_t>(ecs_.size() - nodes_before)});
  }
  ++position_;
}

void Preprocessor::open_step(SymbolId a, std::uint32_t k) {
  next_level_.clear();
  if (depth_ == stack_.size()) {
    stack_.emplace_back();
  } else {
    stack_[depth_].clear();
  }
  StackTable& top = stack_[depth_];
  ++depth_;
  for (std::uint32_t ri : push_by_symbol_[a]) {
    const VptPush& r = vpt_.push[ri];
    for (StateId p = 0; p < static_cast<StateId>(num_states_); ++p) {
      NodeHandle s = level_.get(p, r.from);
      if (s.empty()) continue;
      ++step_visits_;
      next_level_.set(r.to, r.to, eps_);
      NodeHandle v = if_prod(ecs_, s, r.out, k);
      auto [it, inserted] = top.index.try_emplace(
          stack_key(p, r.push, r.to),
          static_cast<std::uint32_t>(top.entries.size()));
      if (inserted) {
        top.entries.push_back({p, r.push, r.to, v});
      } else {
        NodeHandle& slot = top.entries[it->second].node;
        slot = ecs_.unite(slot, v);
      }
    }
  }
  std::swap(level_, next_level_);
}

void Preprocessor::close_step(SymbolId a, std::uint32_t k) {
  if (depth_ == 0) {
    throw NestingError("unbalanced close at position " + std::to_string(k), k);
  }
  next_level_.clear();
  const StackTable& top = stack_[depth_ - 1];
  for (const StackEntry& e : top.entries) {
    auto it = pop_by_key_.find((static_cast<std::uint64_t>(a) << 32) |
                               static_cast<std::uint32_t>(e.x));
    if (it == pop_by_key_.end()) continue;
    for (std::uint32_t ri : it->second) {
      const VptPop& r = vpt_.pop[ri];
      NodeHandle s = level_.get(e.q, r.from);
      if (s.empty()) continue;
      ++step_visits_;
      NodeHandle v = if_prod(ecs_, ecs_.prod(e.node, s), r.out, k);
      next_level_.set(e.p, r.to, ecs_.unite(next_level_.get(e.p, r.to), v));
    }
  }
  --depth_;
  std::swap(level_, next_level_);
}

void Preprocessor::neutral_step(SymbolId a, std::uint32_t k) {
  next_level_.clear();
  for (std::uint32_t cell : level_.active()) {
    auto p = static_cast<StateId>(cell / num_states_);
    auto q = static_cast<StateId>(cell % num_states_);
    NodeHandle s = level_.get(p, q);
    for (std::uint32_t ri : neutral_by_key_[a * num_states_ + q]) {
      const VptNeutral& r = vpt_.neutral[ri];
      ++step_visits_;
      NodeHandle v = if_prod(ecs_, s, r.out, k);
      next_level_.set(p, r.to, ecs_.unite(next_level_.get(p, r.to), v));
    }
  }
  std::swap(level_, next_level_);
}

NodeHandle Preprocessor::finalize() {
  NodeHandle out;
  for (std::uint32_t cell : level_.active()) {
    auto p = static_cast<StateId>(cell / num_states_);
    auto q = static_cast<StateId>(cell % num_states_);
    if (initial_[p] && vpt_.final[q]) out = ecs_.unite(out, level_.get(p, q));
  }
  return out;
}

NodeHandle Preprocessor::finish() {
  if (depth_ != 0) {
    throw NestingError("unclosed open at end of input (depth " +
                           std::to_string(depth_) + ")",
                       position_);
  }
  return finalize();
}

NodeHandle Preprocessor::checkpoint() {
  if (depth_ != 0) return NodeHandle();
  return finalize();
}

NodeHandle Preprocessor::level_entry(StateId p, StateId q) const {
  return level_.get(p, q);
}

std::vector<LevelEntry> Preprocessor::level_entries() const {
  std::vector<LevelEntry> out;
  for (std::uint32_t cell : level_.active()) {
    auto p = static_cast<StateId>(cell / num_states_);
    auto q = static_cast<StateId>(cell % num_states_);
    out.push_back({p, q, level_.get(p, q)});
  }
  return out;
}

std::vector<StackEntry> Preprocessor::top_entries() const {
  if (depth_ == 0) return {};
  return stack_[depth_ - 1].entries;
}

Evaluation::Evaluation(PreprocessResult result, std::size_t smoothing)
    : result_(std::make_unique<PreprocessResult>(std::move(result))),
      enumerator_(result_->ecs, result_->v_out, smoothing) {}

std::vector<OutputWord> evaluate_all(const Vpt& vpt,
                                     std::span<const Token> tokens) {
  SpanSource source(tokens);
  Evaluation eval = evaluate(vpt, source);
  std::vector<OutputWord> out;
  while (auto w = eval.next()) out.push_back(std::move(*w));
  return out;
}

}  // namespace vpenum
