#include "vpenum/vpt.h"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "vpenum/errors.h"

namespace vpenum {

StateId Vpt::add_state(std::string name, bool is_initial, bool is_final) {
  auto [it, inserted] =
      state_ids_.emplace(name, static_cast<StateId>(states.size()));
  if (!inserted) throw ParseError("duplicate state '" + name + "'");
  states.push_back(std::move(name));
  final.push_back(is_final);
  if (is_initial) initial.push_back(it->second);
  return it->second;
}

StackId Vpt::add_stack_symbol(std::string name) {
  auto [it, inserted] =
      stack_ids_.emplace(name, static_cast<StackId>(stack_symbols.size()));
  if (!inserted) throw ParseError("duplicate stack symbol '" + name + "'");
  stack_symbols.push_back(std::move(name));
  return it->second;
}

OutputId Vpt::add_output(std::string name) {
  auto [it, inserted] =
      output_ids_.emplace(name, static_cast<OutputId>(outputs.size()));
  if (!inserted) throw ParseError("duplicate output symbol '" + name + "'");
  outputs.push_back(std::move(name));
  return it->second;
}

std::optional<StateId> Vpt::find_state(std::string_view name) const {
  auto it = state_ids_.find(std::string(name));
  if (it == state_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<StackId> Vpt::find_stack_symbol(std::string_view name) const {
  auto it = stack_ids_.find(std::string(name));
  if (it == stack_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<OutputId> Vpt::find_output(std::string_view name) const {
  auto it = output_ids_.find(std::string(name));
  if (it == output_ids_.end()) return std::nullopt;
  return it->second;
}

bool Vpt::is_initial(StateId q) const {
  return std::find(initial.begin(), initial.end(), q) != initial.end();
}

void Vpt::validate() const {
  auto out_ok = [&](OutputId o) {
    return o == kEpsilonOutput ||
           (o >= 0 && static_cast<std::size_t>(o) < outputs.size());
  };
  for (const auto& t : push) {
    if (!out_ok(t.out)) throw ParseError("push transition with bad output");
  }
  for (const auto& t : pop) {
    if (!out_ok(t.out)) throw ParseError("pop transition with bad output");
  }
  for (const auto& t : neutral) {
    if (!out_ok(t.out)) throw ParseError("neutral transition with bad output");
  }
  underlying_vpa(*this).validate();
}

Vpa underlying_vpa(const Vpt& vpt) {
  Vpa a;
  a.alphabet = vpt.alphabet;
  a.num_states = vpt.states.size();
  a.num_stack_symbols = vpt.stack_symbols.size();
  for (const auto& t : vpt.push) a.push.push_back({t.from, t.symbol, t.to, t.push});
  for (const auto& t : vpt.pop) a.pop.push_back({t.from, t.symbol, t.pop, t.to});
  for (const auto& t : vpt.neutral) {
    a.neutral.push_back({t.from, t.symbol, t.to});
  }
  a.initial = vpt.initial;
  a.final = vpt.final;
  return a;
}

OutputWord out_of_run(std::span<const OutputId> step_outputs, std::size_t from,
                      std::size_t to) {
  OutputWord w;
  std::size_t end = std::min(to, step_outputs.size() + 1);
  for (std::size_t i = std::max<std::size_t>(from, 1); i < end; ++i) {
    OutputId o = step_outputs[i - 1];
    if (o != kEpsilonOutput) {
      w.push_back({o, static_cast<std::uint32_t>(i)});
    }
  }
  return w;
}

namespace {

class RunSearch {
 public:
  RunSearch(const Vpt& vpt, std::span<const Token> tokens, std::size_t cap)
      : vpt_(vpt), tokens_(tokens), cap_(cap) {}

  std::set<OutputWord> run() {
    for (StateId q : vpt_.initial) visit(0, q);
    return std::move(result_);
  }

 private:
  void visit(std::size_t i, StateId q) {
    if (++explored_ > cap_) {
      throw ResourceLimitError("oracle run cap of " + std::to_string(cap_) +
                               " exceeded");
    }
    if (i == tokens_.size()) {
      if (stack_.empty() && vpt_.final[q]) {
        result_.insert(out_of_run(outputs_));
      }
      return;
    }
    const Token& tok = tokens_[i];
    switch (tok.kind) {
      case SymbolKind::kOpen:
        for (const auto& t : vpt_.push) {
          if (t.from != q || t.symbol != tok.symbol) continue;
          stack_.push_back(t.push);
          outputs_.push_back(t.out);
          visit(i + 1, t.to);
          outputs_.pop_back();
          stack_.pop_back();
        }
        break;
      case SymbolKind::kClose: {
        StackId top = stack_.back();
        for (const auto& t : vpt_.pop) {
          if (t.from != q || t.symbol != tok.symbol || t.pop != top) continue;
          stack_.pop_back();
          outputs_.push_back(t.out);
          visit(i + 1, t.to);
          outputs_.pop_back();
          stack_.push_back(top);
        }
        break;
      }
      case SymbolKind::kNeutral:
        for (const auto& t : vpt_.neutral) {
          if (t.from != q || t.symbol != tok.symbol) continue;
          outputs_.push_back(t.out);
          visit(i + 1, t.to);
          outputs_.pop_back();
        }
        break;
    }
  }

  const Vpt& vpt_;
  std::span<const Token> tokens_;
  std::size_t cap_;
  std::size_t explored_ = 0;
  std::vector<StackId> stack_;
  std::vector<OutputId> outputs_;
  std::set<OutputWord> result_;
};

}  // namespace

std::set<OutputWord> oracle_enumerate(const Vpt& vpt,
                                      std::span<const Token> tokens,
                                      OracleLimits limits) {
  check_nestedness(tokens);
  return RunSearch(vpt, tokens, limits.max_runs).run();
}

bool is_io_deterministic(const Vpt& vpt) {
  if (vpt.initial.size() != 1) return false;
  std::set<std::tuple<StateId, SymbolId, OutputId>> push_keys;
  for (const auto& t : vpt.push) {
    if (!push_keys.insert({t.from, t.symbol, t.out}).second) return false;
  }
  std::set<std::tuple<StateId, SymbolId, OutputId, StackId>> pop_keys;
  for (const auto& t : vpt.pop) {
    if (!pop_keys.insert({t.from, t.symbol, t.out, t.pop}).second) return false;
  }
  std::set<std::tuple<StateId, SymbolId, OutputId>> neutral_keys;
  for (const auto& t : vpt.neutral) {
    if (!neutral_keys.insert({t.from, t.symbol, t.out}).second) return false;
  }
  return true;
}

namespace {

template <typename T>
void normalize(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Subset construction with one successor per (input symbol, output symbol).
// Reachability is computed with level summaries: reach[e] holds the subset
// states reachable inside a level entered at subset state e, and callers[e]
// the (outer entry, pushed stack symbol) pairs that open such a level.
class IoDeterminizer {
 public:
  IoDeterminizer(const Vpt& in, std::size_t max_states)
      : in_(in), max_states_(max_states) {
    out_.alphabet = in.alphabet;
    for (const auto& o : in.outputs) out_.add_output(o);
    for (SymbolId a = 0; a < static_cast<SymbolId>(in.alphabet.size()); ++a) {
      bool used = false;
      for (const auto& t : in.push) used |= t.symbol == a;
      for (const auto& t : in.pop) used |= t.symbol == a;
      for (const auto& t : in.neutral) used |= t.symbol == a;
      if (!used) continue;
      switch (in.alphabet.kind(a)) {
        case SymbolKind::kOpen: opens_.push_back(a); break;
        case SymbolKind::kClose: closes_.push_back(a); break;
        case SymbolKind::kNeutral: neutrals_.push_back(a); break;
      }
    }
  }

  Vpt run() {
    PairSet init;
    for (StateId q : in_.initial) init.push_back({q, q});
    normalize(init);
    StateId s0 = state(std::move(init));
    out_.initial = {s0};
    add_fact(s0, s0);
    while (!work_.empty()) {
      auto [e, s] = work_.front();
      work_.pop_front();
      process(e, s);
    }
    for (const auto& t : push_set_) out_.push.push_back(t);
    for (const auto& t : pop_set_) out_.pop.push_back(t);
    for (const auto& t : neutral_set_) out_.neutral.push_back(t);
    return std::move(out_);
  }

 private:
  StateId state(PairSet s) {
    auto it = state_ids_.find(s);
    if (it != state_ids_.end()) return it->second;
    if (sets_.size() >= max_states_) {
      throw ResourceLimitError("determinization exceeded " +
                               std::to_string(max_states_) + " states");
    }
    bool fin = false;
    for (const auto& [p, q] : s) fin |= in_.is_initial(p) && in_.final[q];
    StateId id = out_.add_state("D" + std::to_string(sets_.size()), false, fin);
    state_ids_.emplace(s, id);
    sets_.push_back(std::move(s));
    reach_.emplace_back();
    callers_.emplace_back();
    return id;
  }

  StackId stack(TripleSet t) {
    auto it = stack_ids_.find(t);
    if (it != stack_ids_.end()) return it->second;
    StackId id = out_.add_stack_symbol("G" + std::to_string(triples_.size()));
    stack_ids_.emplace(t, id);
    triples_.push_back(std::move(t));
    return id;
  }

  void add_fact(StateId e, StateId s) {
    if (reach_[e].insert(s).second) work_.push_back({e, s});
  }

  void process(StateId e, StateId s) {
    for (SymbolId a : neutrals_) {
      std::map<OutputId, PairSet> next;
      for (const auto& [p, q] : sets_[s]) {
        for (const auto& t : in_.neutral) {
          if (t.symbol == a && t.from == q) next[t.out].push_back({p, t.to});
        }
      }
      for (auto& [o, set] : next) {
        normalize(set);
        StateId target = state(std::move(set));
        neutral_set_.insert({s, a, o, target});
        add_fact(e, target);
      }
    }
    for (SymbolId a : opens_) {
      std::map<OutputId, std::pair<PairSet, TripleSet>> next;
      for (const auto& [p, p2] : sets_[s]) {
        for (const auto& t : in_.push) {
          if (t.symbol != a || t.from != p2) continue;
          auto& [set, triples] = next[t.out];
          set.push_back({t.to, t.to});
          triples.push_back({p, t.push, t.to});
        }
      }
      for (auto& [o, pr] : next) {
        normalize(pr.first);
        normalize(pr.second);
        StateId entry = state(std::move(pr.first));
        StackId g = stack(std::move(pr.second));
        push_set_.insert({s, a, o, entry, g});
        if (caller_set_.insert({entry, e, g}).second) {
          callers_[entry].push_back({e, g});
          add_fact(entry, entry);
          std::vector<StateId> inside(reach_[entry].begin(),
                                      reach_[entry].end());
          for (StateId s2 : inside) close_level(e, g, s2);
        }
      }
    }
    for (std::size_t i = 0; i < callers_[e].size(); ++i) {
      auto [outer, g] = callers_[e][i];
      close_level(outer, g, s);
    }
  }

  // Leaves a level: s2 is the state before the close, g the stack symbol
  // pushed when the level was entered from a level with entry `outer`.
  void close_level(StateId outer, StackId g, StateId s2) {
    for (SymbolId b : closes_) {
      std::map<OutputId, PairSet> next;
      for (const auto& [p, x, p2] : triples_[g]) {
        for (const auto& [r, q2] : sets_[s2]) {
          if (r != p2) continue;
          for (const auto& t : in_.pop) {
            if (t.symbol == b && t.from == q2 && t.pop == x) {
              next[t.out].push_back({p, t.to});
            }
          }
        }
      }
      for (auto& [o, set] : next) {
        normalize(set);
        StateId target = state(std::move(set));
        pop_set_.insert({s2, b, o, g, target});
        add_fact(outer, target);
      }
    }
  }

  const Vpt& in_;
  std::size_t max_states_;
  Vpt out_;
  std::vector<SymbolId> opens_, closes_, neutrals_;
  std::vector<PairSet> sets_;
  std::map<PairSet, StateId> state_ids_;
  std::vector<TripleSet> triples_;
  std::map<TripleSet, StackId> stack_ids_;
  std::vector<std::set<StateId>> reach_;
  std::vector<std::vector<std::pair<StateId, StackId>>> callers_;
  std::set<std::tuple<StateId, StateId, StackId>> caller_set_;
  std::deque<std::pair<StateId, StateId>> work_;
  std::set<VptPush> push_set_;
  std::set<VptPop> pop_set_;
  std::set<VptNeutral> neutral_set_;
};

}  // namespace

Vpt io_determinize(const Vpt& vpt, std::size_t max_states) {
  return IoDeterminizer(vpt, max_states).run();
}

std::string format_output_word(const OutputWord& word, const Vpt& vpt) {
  if (word.empty()) return "ε";
  std::string out;
  for (const Output& o : word) {
    if (!out.empty()) out.push_back(' ');
    out += vpt.outputs[o.symbol];
    out.push_back('@');
    out += std::to_string(o.position);
  }
  return out;
}

}  // namespace vpenum
