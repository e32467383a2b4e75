#include "vpenum/vpa.h"

#include <algorithm>
#include <string>

#include "vpenum/errors.h"

namespace vpenum {

namespace {

template <typename T>
void normalize(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

void Vpa::validate() const {
  auto state_ok = [&](StateId q) {
    return q >= 0 && static_cast<std::size_t>(q) < num_states;
  };
  auto stack_ok = [&](StackId x) {
    return x >= 0 && static_cast<std::size_t>(x) < num_stack_symbols;
  };
  auto symbol_ok = [&](SymbolId a, SymbolKind k) {
    return a >= 0 && static_cast<std::size_t>(a) < alphabet.size() &&
           alphabet.kind(a) == k;
  };
  for (const auto& t : push) {
    if (!state_ok(t.from) || !state_ok(t.to) || !stack_ok(t.push) ||
        !symbol_ok(t.symbol, SymbolKind::kOpen)) {
      throw ParseError("malformed push transition");
    }
  }
  for (const auto& t : pop) {
    if (!state_ok(t.from) || !state_ok(t.to) || !stack_ok(t.pop) ||
        !symbol_ok(t.symbol, SymbolKind::kClose)) {
      throw ParseError("malformed pop transition");
    }
  }
  for (const auto& t : neutral) {
    if (!state_ok(t.from) || !state_ok(t.to) ||
        !symbol_ok(t.symbol, SymbolKind::kNeutral)) {
      throw ParseError("malformed neutral transition");
    }
  }
  for (StateId q : initial) {
    if (!state_ok(q)) throw ParseError("undeclared initial state");
  }
  if (final.size() != num_states) throw ParseError("final set size mismatch");
}

PairSet vpa_open_pairs(const Vpa& a, const PairSet& s, SymbolId symbol,
                       TripleSet* pushed) {
  PairSet next;
  for (const auto& [p, p2] : s) {
    for (const auto& t : a.push) {
      if (t.symbol != symbol || t.from != p2) continue;
      next.push_back({t.to, t.to});
      if (pushed) pushed->push_back({p, t.push, t.to});
    }
  }
  normalize(next);
  if (pushed) normalize(*pushed);
  return next;
}

PairSet vpa_close_pairs(const Vpa& a, const PairSet& s, const TripleSet& t,
                        SymbolId symbol) {
  PairSet next;
  for (const auto& [p, x, p2] : t) {
    for (const auto& [r, q2] : s) {
      if (r != p2) continue;
      for (const auto& rule : a.pop) {
        if (rule.symbol == symbol && rule.from == q2 && rule.pop == x) {
          next.push_back({p, rule.to});
        }
      }
    }
  }
  normalize(next);
  return next;
}

PairSet vpa_neutral_pairs(const Vpa& a, const PairSet& s, SymbolId symbol) {
  PairSet next;
  for (const auto& [p, q] : s) {
    for (const auto& rule : a.neutral) {
      if (rule.symbol == symbol && rule.from == q) next.push_back({p, rule.to});
    }
  }
  normalize(next);
  return next;
}

bool Vpa::accepts(std::span<const Token> tokens) const {
  PairSet s;
  for (StateId q : initial) s.push_back({q, q});
  normalize(s);
  std::vector<TripleSet> stack;
  std::vector<PairSet> saved;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& tok = tokens[i];
    switch (tok.kind) {
      case SymbolKind::kOpen: {
        TripleSet t;
        PairSet next = vpa_open_pairs(*this, s, tok.symbol, &t);
        stack.push_back(std::move(t));
        s = std::move(next);
        break;
      }
      case SymbolKind::kClose:
        if (stack.empty()) {
          throw NestingError("unbalanced close at position " +
                                 std::to_string(i + 1),
                             i + 1);
        }
        s = vpa_close_pairs(*this, s, stack.back(), tok.symbol);
        stack.pop_back();
        break;
      case SymbolKind::kNeutral:
        s = vpa_neutral_pairs(*this, s, tok.symbol);
        break;
    }
  }
  if (!stack.empty()) {
    throw NestingError("unclosed open at end of input", tokens.size() + 1);
  }
  for (const auto& [p, q] : s) {
    if (final[q] &&
        std::find(initial.begin(), initial.end(), p) != initial.end()) {
      return true;
    }
  }
  return false;
}

DetVpa::DetVpa(Vpa vpa) : vpa_(std::move(vpa)) {
  PairSet init;
  for (StateId q : vpa_.initial) init.push_back({q, q});
  normalize(init);
  intern_state(std::move(init));
}

DetVpa::State DetVpa::intern_state(PairSet s) const {
  auto it = state_ids_.find(s);
  if (it != state_ids_.end()) return it->second;
  State id = static_cast<State>(states_.size());
  state_ids_.emplace(s, id);
  states_.push_back(std::move(s));
  return id;
}

DetVpa::Stack DetVpa::intern_stack(TripleSet t) const {
  auto it = stack_ids_.find(t);
  if (it != stack_ids_.end()) return it->second;
  Stack id = static_cast<Stack>(stacks_.size());
  stack_ids_.emplace(t, id);
  stacks_.push_back(std::move(t));
  return id;
}

std::pair<DetVpa::State, DetVpa::Stack> DetVpa::open(State s,
                                                     SymbolId symbol) const {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(s, symbol);
  if (auto it = open_.find(key); it != open_.end()) return it->second;
  TripleSet t;
  PairSet next = vpa_open_pairs(vpa_, states_[s], symbol, &t);
  auto result = std::make_pair(intern_state(std::move(next)),
                               intern_stack(std::move(t)));
  open_.emplace(key, result);
  return result;
}

DetVpa::State DetVpa::close(State s, Stack t, SymbolId symbol) const {
  std::lock_guard lock(mu_);
  std::array<std::int32_t, 3> key{s, t, symbol};
  if (auto it = close_.find(key); it != close_.end()) return it->second;
  State result =
      intern_state(vpa_close_pairs(vpa_, states_[s], stacks_[t], symbol));
  close_.emplace(key, result);
  return result;
}

DetVpa::State DetVpa::neutral(State s, SymbolId symbol) const {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(s, symbol);
  if (auto it = neutral_.find(key); it != neutral_.end()) return it->second;
  State result = intern_state(vpa_neutral_pairs(vpa_, states_[s], symbol));
  neutral_.emplace(key, result);
  return result;
}

bool DetVpa::is_final(State s) const {
  std::lock_guard lock(mu_);
  for (const auto& [p, q] : states_[s]) {
    if (vpa_.final[q] && std::find(vpa_.initial.begin(), vpa_.initial.end(),
                                   p) != vpa_.initial.end()) {
      return true;
    }
  }
  return false;
}

bool DetVpa::accepts(std::span<const Token> tokens) const {
  State s = initial();
  std::vector<Stack> stack;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& tok = tokens[i];
    switch (tok.kind) {
      case SymbolKind::kOpen: {
        auto [next, t] = open(s, tok.symbol);
        stack.push_back(t);
        s = next;
        break;
      }
      case SymbolKind::kClose:
        if (stack.empty()) {
          throw NestingError("unbalanced close at position " +
                                 std::to_string(i + 1),
                             i + 1);
        }
        s = close(s, stack.back(), tok.symbol);
        stack.pop_back();
        break;
      case SymbolKind::kNeutral:
        s = neutral(s, tok.symbol);
        break;
    }
  }
  if (!stack.empty()) {
    throw NestingError("unclosed open at end of input", tokens.size() + 1);
  }
  return is_final(s);
}

PairSet DetVpa::state(State s) const {
  std::lock_guard lock(mu_);
  return states_[s];
}

TripleSet DetVpa::stack_symbol(Stack t) const {
  std::lock_guard lock(mu_);
  return stacks_[t];
}

std::size_t DetVpa::num_states() const {
  std::lock_guard lock(mu_);
  return states_.size();
}

std::size_t DetVpa::num_stack_symbols() const {
  std::lock_guard lock(mu_);
  return stacks_.size();
}

DetVpa determinize(const Vpa& vpa) { return DetVpa(vpa); }

}  // namespace vpenum
