#ifndef VPENUM_VPT_H_
#define VPENUM_VPT_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vpenum/ecs.h"
#include "vpenum/nested.h"
#include "vpenum/vpa.h"

namespace vpenum {

// Output kEpsilonOutput means the transition emits nothing.
struct VptPush {
  StateId from;
  SymbolId symbol;
  OutputId out;
  StateId to;
  StackId push;

  friend auto operator<=>(const VptPush&, const VptPush&) = default;
};
struct VptPop {
  StateId from;
  SymbolId symbol;
  OutputId out;
  StackId pop;
  StateId to;

  friend auto operator<=>(const VptPop&, const VptPop&) = default;
};
struct VptNeutral {
  StateId from;
  SymbolId symbol;
  OutputId out;
  StateId to;

  friend auto operator<=>(const VptNeutral&, const VptNeutral&) = default;
};

class Vpt {
 public:
  StructuredAlphabet alphabet;
  std::vector<std::string> states;
  std::vector<std::string> stack_symbols;
  std::vector<std::string> outputs;
  std::vector<VptPush> push;
  std::vector<VptPop> pop;
  std::vector<VptNeutral> neutral;
  std::vector<StateId> initial;
  std::vector<bool> final;  // indexed by state

  StateId add_state(std::string name, bool is_initial = false,
                    bool is_final = false);
  StackId add_stack_symbol(std::string name);
  OutputId add_output(std::string name);

  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<StackId> find_stack_symbol(std::string_view name) const;
  std::optional<OutputId> find_output(std::string_view name) const;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_transitions() const {
    return push.size() + pop.size() + neutral.size();
  }
  bool is_initial(StateId q) const;

  // Throws ParseError on dangling references or symbol-kind mismatches.
  void validate() const;

 private:
  std::unordered_map<std::string, StateId> state_ids_;
  std::unordered_map<std::string, StackId> stack_ids_;
  std::unordered_map<std::string, OutputId> output_ids_;
};

// out(rho<from, to>) for a run given by the output of each of its steps;
// step i (1-based) read position i. `to` is exclusive; npos means the end.
OutputWord out_of_run(std::span<const OutputId> step_outputs,
                      std::size_t from = 1,
                      std::size_t to = static_cast<std::size_t>(-1));

struct OracleLimits {
  // Cap on explored run prefixes before giving up.
  std::size_t max_runs = 2'000'000;
};

// Brute-force semantics: a DFS over all runs. Throws ResourceLimitError when
// the cap is hit and NestingError on non-well-nested input.
std::set<OutputWord> oracle_enumerate(const Vpt& vpt,
                                      std::span<const Token> tokens,
                                      OracleLimits limits = {});

bool is_io_deterministic(const Vpt& vpt);

// I/O-deterministic transducer with the same semantics. Only subset states
// reachable by some well-nested prefix are materialized. Throws
// ResourceLimitError past max_states.
Vpt io_determinize(const Vpt& vpt, std::size_t max_states = 200'000);

// Forgets the outputs.
Vpa underlying_vpa(const Vpt& vpt);

// `sym@pos` elements separated by spaces; the empty word is "ε".
std::string format_output_word(const OutputWord& word, const Vpt& vpt);

}  // namespace vpenum

#endif  // VPENUM_VPT_H_
