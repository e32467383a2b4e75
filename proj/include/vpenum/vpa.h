#ifndef VPENUM_VPA_H_
#define VPENUM_VPA_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "vpenum/nested.h"

namespace vpenum {

using StateId = std::int32_t;
using StackId = std::int32_t;

struct VpaPush {
  StateId from;
  SymbolId symbol;
  StateId to;
  StackId push;
};
struct VpaPop {
  StateId from;
  SymbolId symbol;
  StackId pop;
  StateId to;
};
struct VpaNeutral {
  StateId from;
  SymbolId symbol;
  StateId to;
};

struct Vpa {
  StructuredAlphabet alphabet;
  std::size_t num_states = 0;
  std::size_t num_stack_symbols = 0;
  std::vector<VpaPush> push;
  std::vector<VpaPop> pop;
  std::vector<VpaNeutral> neutral;
  std::vector<StateId> initial;
  std::vector<bool> final;  // indexed by state

  // Throws ParseError if a transition references an undeclared state,
  // stack symbol, or a symbol of the wrong kind.
  void validate() const;

  // Summarizes reachable (level start, current) state pairs, so the cost is
  // polynomial. Throws NestingError on non-well-nested input.
  bool accepts(std::span<const Token> tokens) const;
};

// Sets of state pairs are the states of the determinized automaton; sets of
// (state, stack symbol, state) triples its stack symbols. Both sorted.
using PairSet = std::vector<std::pair<StateId, StateId>>;
using TripleSet = std::vector<std::array<StateId, 3>>;

PairSet vpa_open_pairs(const Vpa& a, const PairSet& s, SymbolId symbol,
                       TripleSet* pushed);
PairSet vpa_close_pairs(const Vpa& a, const PairSet& s, const TripleSet& t,
                        SymbolId symbol);
PairSet vpa_neutral_pairs(const Vpa& a, const PairSet& s, SymbolId symbol);

// Deterministic automaton built lazily: a subset state or stack symbol only
// exists once a transition reaching it has been asked for. Thread-safe.
class DetVpa {
 public:
  using State = std::int32_t;
  using Stack = std::int32_t;

  explicit DetVpa(Vpa vpa);

  const Vpa& source() const { return vpa_; }
  State initial() const { return 0; }
  std::pair<State, Stack> open(State s, SymbolId symbol) const;
  State close(State s, Stack t, SymbolId symbol) const;
  State neutral(State s, SymbolId symbol) const;
  bool is_final(State s) const;

  bool accepts(std::span<const Token> tokens) const;

  PairSet state(State s) const;
  TripleSet stack_symbol(Stack t) const;
  std::size_t num_states() const;
  std::size_t num_stack_symbols() const;

 private:
  State intern_state(PairSet s) const;
  Stack intern_stack(TripleSet t) const;

  Vpa vpa_;
  mutable std::mutex mu_;
  mutable std::vector<PairSet> states_;
  mutable std::map<PairSet, State> state_ids_;
  mutable std::vector<TripleSet> stacks_;
  mutable std::map<TripleSet, Stack> stack_ids_;
  mutable std::map<std::pair<State, SymbolId>, std::pair<State, Stack>> open_;
  mutable std::map<std::array<std::int32_t, 3>, State> close_;
  mutable std::map<std::pair<State, SymbolId>, State> neutral_;
};

DetVpa determinize(const Vpa& vpa);

// Compares acceptance on every well-nested word over `alphabet` of length
// <= max_len. Both acceptors must share the alphabet's symbol ids.
template <typename A, typename B>
bool language_equal_upto(const A& a1, const B& a2,
                         const StructuredAlphabet& alphabet,
                         std::size_t max_len,
                         std::size_t max_words = 5'000'000) {
  bool equal = true;
  for_each_well_nested(
      alphabet, max_len,
      [&](std::span<const Token> w) {
        if (equal && a1.accepts(w) != a2.accepts(w)) equal = false;
      },
      max_words);
  return equal;
}

}  // namespace vpenum

#endif  // VPENUM_VPA_H_
