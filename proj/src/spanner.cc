#include "vpenum/spanner.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "vpenum/errors.h"

namespace vpenum {

std::string Vpeg::capture_name(int code) const {
  const std::string& x = variables[capture_var(code)];
  return capture_closes(code) ? x + ")" : "(" + x;
}

namespace {

struct GrammarLine {
  std::size_t number;
  std::string text;
  std::vector<std::string> words;
};

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

[[noreturn]] void fail(const GrammarLine& line, const std::string& why) {
  throw ParseError("line " + std::to_string(line.number) + ": " + why);
}

class GrammarParser {
 public:
  explicit GrammarParser(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      GrammarLine line{number, raw, split_words(raw)};
      if (!line.words.empty()) lines_.push_back(std::move(line));
    }
  }

  Vpeg parse() {
    std::string start_name;
    for (const GrammarLine& line : lines_) {
      const auto& w = line.words;
      if (w[0] == "var") {
        for (std::size_t i = 1; i < w.size(); ++i) {
          if (var_ids_.count(w[i])) fail(line, "duplicate variable " + w[i]);
          var_ids_[w[i]] = static_cast<int>(g_.variables.size());
          g_.variables.push_back(w[i]);
        }
      } else if (w[0] == "start") {
        if (w.size() != 2) fail(line, "expected 'start NAME'");
        start_name = w[1];
      } else if (w[0] == "open:" || w[0] == "close:" || w[0] == "neutral:") {
        declared_ = true;
        SymbolKind kind = w[0] == "open:"    ? SymbolKind::kOpen
                          : w[0] == "close:" ? SymbolKind::kClose
                                             : SymbolKind::kNeutral;
        for (std::size_t i = 1; i < w.size(); ++i) {
          try {
            g_.alphabet.add(w[i], kind);
          } catch (const ParseError& e) {
            fail(line, e.what());
          }
        }
      } else if (w.size() >= 2 && w[1] == "->") {
        nonterminal(w[0]);
      } else {
        fail(line, "cannot parse '" + line.text + "'");
      }
    }
    if (g_.nonterminals.empty()) {
      throw ParseError("grammar has no productions");
    }
    if (start_name.empty()) {
      g_.start = 0;
    } else {
      auto it = nt_ids_.find(start_name);
      if (it == nt_ids_.end()) {
        throw ParseError("start symbol '" + start_name + "' has no productions");
      }
      g_.start = it->second;
    }
    if (g_.variables.size() > 30) throw ParseError("too many variables");
    for (const GrammarLine& line : lines_) {
      if (line.words.size() >= 2 && line.words[1] == "->") production(line);
    }
    return std::move(g_);
  }

 private:
  NonterminalId nonterminal(const std::string& name) {
    auto [it, inserted] = nt_ids_.emplace(
        name, static_cast<NonterminalId>(g_.nonterminals.size()));
    if (inserted) g_.nonterminals.push_back(name);
    return it->second;
  }

  NonterminalId use_nonterminal(const GrammarLine& line,
                                const std::string& name) {
    auto it = nt_ids_.find(name);
    if (it == nt_ids_.end()) fail(line, "unknown nonterminal '" + name + "'");
    return it->second;
  }

  SymbolId letter(const GrammarLine& line, const std::string& name,
                  SymbolKind kind) {
    if (name.empty() || name.find_first_of("<>()") != std::string::npos) {
      fail(line, "bad symbol name '" + name + "'");
    }
    if (declared_) {
      auto id = g_.alphabet.find(name, kind);
      if (!id) {
        fail(line, std::string("undeclared ") + kind_name(kind) + " symbol '" +
                       name + "'");
      }
      return *id;
    }
    try {
      return g_.alphabet.add(name, kind);
    } catch (const ParseError& e) {
      fail(line, e.what());
    }
  }

  void production(const GrammarLine& line) {
    NonterminalId lhs = nt_ids_.at(line.words[0]);
    std::string rhs = line.text.substr(line.text.find("->") + 2);
    std::size_t begin = 0;
    for (;;) {
      std::size_t bar = rhs.find('|', begin);
      alternative(line, lhs,
                  split_words(rhs.substr(begin, bar == std::string::npos
                                                    ? std::string::npos
                                                    : bar - begin)));
      if (bar == std::string::npos) break;
      begin = bar + 1;
    }
  }

  void alternative(const GrammarLine& line, NonterminalId lhs,
                   const std::vector<std::string>& w) {
    Production p;
    p.lhs = lhs;
    if (w.size() == 1 && (w[0] == "eps" || w[0] == "ε")) {
      p.kind = Production::Kind::kEmpty;
    } else if (w.size() == 2) {
      const std::string& t = w[0];
      if (nt_ids_.count(t)) fail(line, "'" + t + " " + w[1] + "' is not a VPEG shape");
      p.b = use_nonterminal(line, w[1]);
      if (t.size() > 1 && t.front() == '(') {
        auto it = var_ids_.find(t.substr(1));
        if (it == var_ids_.end()) fail(line, "undeclared variable in '" + t + "'");
        p.kind = Production::Kind::kCapture;
        p.capture = capture_code(it->second, false);
      } else if (t.size() > 1 && t.back() == ')') {
        auto it = var_ids_.find(t.substr(0, t.size() - 1));
        if (it == var_ids_.end()) fail(line, "undeclared variable in '" + t + "'");
        p.kind = Production::Kind::kCapture;
        p.capture = capture_code(it->second, true);
      } else {
        p.kind = Production::Kind::kLetter;
        p.letter = letter(line, t, SymbolKind::kNeutral);
      }
    } else if (w.size() == 4 && w[0].size() > 1 && w[0].front() == '<' &&
               w[2].size() > 1 && w[2].back() == '>') {
      p.kind = Production::Kind::kNested;
      p.open = letter(line, w[0].substr(1), SymbolKind::kOpen);
      p.b = use_nonterminal(line, w[1]);
      p.close = letter(line, w[2].substr(0, w[2].size() - 1), SymbolKind::kClose);
      p.c = use_nonterminal(line, w[3]);
    } else {
      std::string alt;
      for (const auto& s : w) alt += (alt.empty() ? "" : " ") + s;
      fail(line, "'" + alt + "' is not a VPEG shape");
    }
    g_.productions.push_back(p);
  }

  std::vector<GrammarLine> lines_;
  Vpeg g_;
  bool declared_ = false;
  std::map<std::string, int> var_ids_;
  std::map<std::string, NonterminalId> nt_ids_;
};

std::vector<bool> direct_empty(const Vpeg& g) {
  std::vector<bool> out(g.nonterminals.size(), false);
  for (const auto& p : g.productions) {
    if (p.kind == Production::Kind::kEmpty) out[p.lhs] = true;
  }
  return out;
}

// Productive and reachable from the start through productive productions.
std::vector<bool> useful_set(const Vpeg& g, const std::vector<bool>& productive) {
  auto rhs_ok = [&](const Production& p) {
    switch (p.kind) {
      case Production::Kind::kEmpty: return true;
      case Production::Kind::kLetter:
      case Production::Kind::kCapture: return bool(productive[p.b]);
      case Production::Kind::kNested:
        return productive[p.b] && productive[p.c];
    }
    return false;
  };
  std::vector<bool> reach(g.nonterminals.size(), false);
  if (!productive[g.start]) return reach;
  reach[g.start] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (!reach[p.lhs] || !rhs_ok(p)) continue;
      for (NonterminalId n : {p.b, p.c}) {
        if (n >= 0 && !reach[n]) reach[n] = changed = true;
      }
    }
  }
  return reach;
}

}  // namespace

Vpeg parse_vpeg(std::string_view text) { return GrammarParser(text).parse(); }

std::vector<bool> nullable_set(const Vpeg& g) {
  std::vector<bool> done(g.nonterminals.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (done[p.lhs]) continue;
      bool ok = false;
      switch (p.kind) {
        case Production::Kind::kEmpty: ok = true; break;
        case Production::Kind::kLetter:
        case Production::Kind::kCapture: ok = done[p.b]; break;
        case Production::Kind::kNested: ok = done[p.b] && done[p.c]; break;
      }
      if (ok) done[p.lhs] = changed = true;
    }
  }
  return done;
}

void check_functional(const Vpeg& g) {
  std::size_t nvars = g.variables.size();
  if (nvars > 7) {
    throw ResourceLimitError("functionality check supports at most 7 variables");
  }
  // A status assigns each variable a digit: 0 unopened, 1 open, 2 closed.
  int statuses = 1;
  std::vector<int> weight(nvars);
  for (std::size_t v = 0; v < nvars; ++v) {
    weight[v] = statuses;
    statuses *= 3;
  }
  auto digit = [&](int s, int v) { return (s / weight[v]) % 3; };
  // Status after applying a capture, or -1 when the capture is invalid.
  auto apply = [&](int s, int code) {
    int v = capture_var(code);
    int want = capture_closes(code) ? 1 : 0;
    return digit(s, v) == want ? s + weight[v] : -1;
  };

  std::size_t n = g.nonterminals.size();
  std::vector<bool> productive = nullable_set(g);
  // trans[A][s]: statuses at the end of valid complete derivations of A
  // started in status s.
  std::vector<std::vector<std::set<int>>> trans(
      n, std::vector<std::set<int>>(statuses));
  for (bool changed = true; changed;) {
    changed = false;
    auto add = [&](NonterminalId a, int s, int t) {
      if (trans[a][s].insert(t).second) changed = true;
    };
    for (const auto& p : g.productions) {
      for (int s = 0; s < statuses; ++s) {
        switch (p.kind) {
          case Production::Kind::kEmpty:
            add(p.lhs, s, s);
            break;
          case Production::Kind::kLetter:
            for (int t : std::set<int>(trans[p.b][s])) add(p.lhs, s, t);
            break;
          case Production::Kind::kCapture: {
            int s2 = apply(s, p.capture);
            if (s2 < 0) break;
            for (int t : std::set<int>(trans[p.b][s2])) add(p.lhs, s, t);
            break;
          }
          case Production::Kind::kNested:
            for (int t : std::set<int>(trans[p.b][s])) {
              for (int u : std::set<int>(trans[p.c][t])) add(p.lhs, s, u);
            }
            break;
        }
      }
    }
  }
  // bad[A][s]: some complete derivation of A from status s makes an invalid
  // capture.
  std::vector<std::vector<bool>> bad(n, std::vector<bool>(statuses, false));
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      for (int s = 0; s < statuses; ++s) {
        if (bad[p.lhs][s]) continue;
        bool b = false;
        switch (p.kind) {
          case Production::Kind::kEmpty:
            break;
          case Production::Kind::kLetter:
            b = bad[p.b][s];
            break;
          case Production::Kind::kCapture: {
            int s2 = apply(s, p.capture);
            b = s2 < 0 ? bool(productive[p.b]) : bool(bad[p.b][s2]);
            break;
          }
          case Production::Kind::kNested:
            b = bad[p.b][s] && productive[p.c];
            for (int t : trans[p.b][s]) b = b || bad[p.c][t];
            break;
        }
        if (b) bad[p.lhs][s] = changed = true;
      }
    }
  }
  if (bad[g.start][0]) {
    throw PreconditionError(
        "grammar is not functional: some derivation opens or closes a "
        "variable twice, or closes it before opening it");
  }
  int all_closed = statuses - 1;  // every digit 2
  for (int t : trans[g.start][0]) {
    if (t == all_closed) continue;
    for (std::size_t v = 0; v < nvars; ++v) {
      if (digit(t, static_cast<int>(v)) != 2) {
        throw PreconditionError(
            "grammar is not functional: some derivation leaves variable '" +
            g.variables[v] + "' unassigned");
      }
    }
  }
}

Evpa to_evpa(const Vpeg& g) {
  Evpa e;
  e.variables = g.variables;
  std::size_t n = g.nonterminals.size();
  std::vector<bool> productive = nullable_set(g);
  std::vector<bool> useful = useful_set(g, productive);
  std::vector<bool> has_empty = direct_empty(g);

  Vpa& a = e.automaton;
  a.alphabet = g.alphabet;
  e.capture_of_symbol.assign(a.alphabet.size(), -1);
  std::vector<SymbolId> capture_symbol(2 * g.variables.size());
  for (int code = 0; code < static_cast<int>(capture_symbol.size()); ++code) {
    capture_symbol[code] = a.alphabet.add(g.capture_name(code), SymbolKind::kNeutral);
    e.capture_of_symbol.push_back(code);
  }

  // One state per nonterminal, then the shared end-of-level state, then a
  // fresh copy of the start symbol that is never re-entered.
  const StateId end = static_cast<StateId>(n);
  const StateId init = static_cast<StateId>(n + 1);
  a.num_states = n + 2;
  a.initial = {init};
  a.final.assign(n + 2, false);
  a.final[end] = true;
  e.level_end = end;
  if (useful[g.start] && has_empty[g.start]) a.final[init] = true;
  std::size_t steps = n + 2;

  for (std::size_t i = 0; i < g.productions.size(); ++i) {
    const Production& p = g.productions[i];
    if (!useful[p.lhs]) continue;
    if (p.b >= 0 && !productive[p.b]) continue;
    if (p.c >= 0 && !productive[p.c]) continue;
    std::vector<StateId> from{p.lhs};
    if (p.lhs == g.start) from.push_back(init);
    ++steps;
    switch (p.kind) {
      case Production::Kind::kEmpty:
        break;
      case Production::Kind::kLetter:
      case Production::Kind::kCapture: {
        SymbolId sym = p.kind == Production::Kind::kLetter
                           ? p.letter
                           : capture_symbol[p.capture];
        for (StateId q : from) {
          a.neutral.push_back({q, sym, p.b});
          if (has_empty[p.b]) a.neutral.push_back({q, sym, end});
          steps += 2;
        }
        break;
      }
      case Production::Kind::kNested: {
        StackId gamma = static_cast<StackId>(a.num_stack_symbols++);
        for (StateId q : from) {
          a.push.push_back({q, p.open, p.b, gamma});
          if (has_empty[p.b]) a.push.push_back({q, p.open, end, gamma});
          steps += 2;
        }
        a.pop.push_back({end, p.close, gamma, p.c});
        if (has_empty[p.c]) a.pop.push_back({end, p.close, gamma, end});
        steps += 2;
        break;
      }
    }
  }
  e.construction_steps = steps;
  return e;
}

CompiledSpanner evpa_to_vpt(const Evpa& e) {
  const Vpa& a = e.automaton;
  auto is_capture = [&](SymbolId s) { return e.capture_of_symbol[s] >= 0; };

  // Capture edges must form a DAG.
  std::vector<std::vector<std::pair<StateId, int>>> cap_edges(a.num_states);
  for (const auto& t : a.neutral) {
    if (is_capture(t.symbol)) {
      cap_edges[t.from].push_back({t.to, e.capture_of_symbol[t.symbol]});
    }
  }
  {
    std::vector<int> color(a.num_states, 0);
    std::vector<std::pair<StateId, std::size_t>> stack;
    for (StateId root = 0; root < static_cast<StateId>(a.num_states); ++root) {
      if (color[root]) continue;
      color[root] = 1;
      stack.push_back({root, 0});
      while (!stack.empty()) {
        auto& [q, i] = stack.back();
        if (i == cap_edges[q].size()) {
          color[q] = 2;
          stack.pop_back();
          continue;
        }
        StateId r = cap_edges[q][i++].first;
        if (color[r] == 1) {
          throw PreconditionError(
              "capture transitions form a cycle through automaton state " +
              std::to_string(r));
        }
        if (color[r] == 0) {
          color[r] = 1;
          stack.push_back({r, 0});
        }
      }
    }
  }

  CompiledSpanner c;
  c.variables = e.variables;
  Vpt& t = c.vpt;
  std::vector<SymbolId> symbol_map(a.alphabet.size(), kNoSymbol);
  for (SymbolId s = 0; s < static_cast<SymbolId>(a.alphabet.size()); ++s) {
    if (!is_capture(s)) {
      symbol_map[s] = t.alphabet.add(a.alphabet.name(s), a.alphabet.kind(s));
    }
  }
  c.end_marker = t.alphabet.add("#", SymbolKind::kNeutral);
  for (std::size_t q = 0; q < a.num_states; ++q) {
    t.add_state("s" + std::to_string(q));
  }
  StateId accept = t.add_state("accept", false, true);
  for (StateId q : a.initial) t.initial.push_back(q);
  for (std::size_t x = 0; x < a.num_stack_symbols; ++x) {
    t.add_stack_symbol("g" + std::to_string(x));
  }

  std::map<std::uint64_t, OutputId> output_of_mask;
  auto output_for = [&](std::uint64_t mask) -> OutputId {
    if (mask == 0) return kEpsilonOutput;
    auto it = output_of_mask.find(mask);
    if (it != output_of_mask.end()) return it->second;
    std::vector<int> codes;
    std::string name;
    for (int code = 0; code < 64; ++code) {
      if (!(mask >> code & 1)) continue;
      codes.push_back(code);
      const std::string& x = e.variables[capture_var(code)];
      if (!name.empty()) name += "+";
      name += capture_closes(code) ? x + ")" : "(" + x;
    }
    OutputId o = t.add_output(name);
    c.capture_sets.push_back(codes);
    output_of_mask.emplace(mask, o);
    return o;
  };

  std::vector<std::vector<std::uint32_t>> push_from(a.num_states),
      pop_from(a.num_states), neutral_from(a.num_states);
  for (std::uint32_t i = 0; i < a.push.size(); ++i) {
    push_from[a.push[i].from].push_back(i);
  }
  for (std::uint32_t i = 0; i < a.pop.size(); ++i) {
    pop_from[a.pop[i].from].push_back(i);
  }
  for (std::uint32_t i = 0; i < a.neutral.size(); ++i) {
    if (!is_capture(a.neutral[i].symbol)) {
      neutral_from[a.neutral[i].from].push_back(i);
    }
  }

  StateId end = e.level_end;
  if (end >= 0 && !cap_edges[end].empty()) end = -1;
  // Capture sets of the non-empty chains from q to the level end.
  std::vector<std::set<std::uint64_t>> ends_at(a.num_states);

  std::set<VptPush> pushes;
  std::set<VptPop> pops;
  std::set<VptNeutral> neutrals;
  std::size_t steps = 0;
  for (StateId p = 0; p < static_cast<StateId>(a.num_states); ++p) {
    // All capture paths leaving p, including the empty one.
    std::set<std::pair<std::uint64_t, StateId>> paths;
    std::vector<std::pair<std::uint64_t, StateId>> stack{{0, p}};
    while (!stack.empty()) {
      auto [mask, q] = stack.back();
      stack.pop_back();
      ++steps;
      if (!paths.insert({mask, q}).second) continue;
      for (auto [r, code] : cap_edges[q]) {
        stack.push_back({mask | (std::uint64_t{1} << code), r});
      }
    }
    for (auto [mask, q] : paths) {
      OutputId o = output_for(mask);
      if (q == end && mask != 0) {
        ends_at[p].insert(mask);
        if (a.final[q]) neutrals.insert({p, c.end_marker, o, accept});
        ++steps;
        continue;
      }
      for (std::uint32_t i : push_from[q]) {
        const VpaPush& r = a.push[i];
        pushes.insert({p, symbol_map[r.symbol], o, r.to, r.push});
      }
      for (std::uint32_t i : pop_from[q]) {
        const VpaPop& r = a.pop[i];
        pops.insert({p, symbol_map[r.symbol], o, r.pop, r.to});
      }
      for (std::uint32_t i : neutral_from[q]) {
        const VpaNeutral& r = a.neutral[i];
        neutrals.insert({p, symbol_map[r.symbol], o, r.to});
      }
      if (a.final[q]) neutrals.insert({p, c.end_marker, o, accept});
      steps += push_from[q].size() + pop_from[q].size() +
               neutral_from[q].size() + 1;
    }
  }

  if (end >= 0) {
    std::map<std::uint64_t, StateId> end_copy;
    for (const auto& masks : ends_at) {
      for (std::uint64_t mask : masks) {
        if (end_copy.count(mask)) continue;
        StateId q = t.add_state("s" + std::to_string(end) + "/" +
                                t.outputs[output_for(mask)]);
        end_copy.emplace(mask, q);
        OutputId o = output_for(mask);
        for (std::uint32_t i : pop_from[end]) {
          const VpaPop& r = a.pop[i];
          pops.insert({q, symbol_map[r.symbol], o, r.pop, r.to});
        }
        steps += pop_from[end].size() + 1;
      }
    }
    // Every transition into q also enters each chain from q to the level end.
    std::vector<VptPush> more_push;
    std::vector<VptPop> more_pop;
    std::vector<VptNeutral> more_neutral;
    auto redirect = [&](StateId to, auto make) {
      if (to >= static_cast<StateId>(a.num_states)) return;
      for (std::uint64_t mask : ends_at[to]) {
        make(end_copy.at(mask));
        ++steps;
      }
    };
    for (const VptPush& r : pushes) {
      redirect(r.to, [&](StateId q) { more_push.push_back({r.from, r.symbol, r.out, q, r.push}); });
    }
    for (const VptPop& r : pops) {
      redirect(r.to, [&](StateId q) { more_pop.push_back({r.from, r.symbol, r.out, r.pop, q}); });
    }
    for (const VptNeutral& r : neutrals) {
      redirect(r.to, [&](StateId q) { more_neutral.push_back({r.from, r.symbol, r.out, q}); });
    }
    pushes.insert(more_push.begin(), more_push.end());
    pops.insert(more_pop.begin(), more_pop.end());
    neutrals.insert(more_neutral.begin(), more_neutral.end());
  }

  t.push.assign(pushes.begin(), pushes.end());
  t.pop.assign(pops.begin(), pops.end());
  t.neutral.assign(neutrals.begin(), neutrals.end());
  c.construction_steps = e.construction_steps + steps;
  return c;
}

CompiledSpanner compile_spanner(const Vpeg& g) {
  check_functional(g);
  return evpa_to_vpt(to_evpa(g));
}

SpanMapping decode_mapping(const OutputWord& word,
                           const CompiledSpanner& spanner,
                           std::size_t doc_length) {
  std::size_t nvars = spanner.variables.size();
  SpanMapping m;
  m.spans.assign(nvars, Span{0, 0});
  std::vector<int> seen(2 * nvars, 0);
  for (const Output& o : word) {
    for (int code : spanner.capture_sets[o.symbol]) {
      if (seen[code]++) {
        throw PreconditionError("capture " + std::to_string(code) +
                                " occurs twice in one output");
      }
      Span& s = m.spans[capture_var(code)];
      (capture_closes(code) ? s.end : s.start) = o.position;
    }
  }
  for (std::size_t v = 0; v < nvars; ++v) {
    const Span& s = m.spans[v];
    if (!seen[2 * v] || !seen[2 * v + 1]) {
      throw PreconditionError("variable '" + spanner.variables[v] +
                              "' is unassigned");
    }
    if (s.start > s.end || s.end > doc_length + 1) {
      throw PreconditionError("variable '" + spanner.variables[v] +
                              "' has an invalid span");
    }
  }
  return m;
}

std::string format_mapping(const SpanMapping& m,
                           const std::vector<std::string>& variables) {
  std::vector<std::size_t> order(variables.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return variables[a] < variables[b];
  });
  std::string out;
  for (std::size_t v : order) {
    if (!out.empty()) out.push_back(' ');
    out += variables[v] + "=[" + std::to_string(m.spans[v].start) + "," +
           std::to_string(m.spans[v].end) + ")";
  }
  return out;
}

Vpt spanner_transducer(const CompiledSpanner& spanner, SpannerMode mode) {
  switch (mode) {
    case SpannerMode::kAuto:
      if (is_io_deterministic(spanner.vpt)) return spanner.vpt;
      return io_determinize(spanner.vpt);
    case SpannerMode::kTrustUnambiguous:
      return spanner.vpt;
    case SpannerMode::kDeterminize:
      return io_determinize(spanner.vpt);
  }
  return spanner.vpt;
}

std::optional<SpanMapping> SpannerEvaluation::next() {
  auto w = eval_.next();
  if (!w) return std::nullopt;
  return decode_mapping(*w, *spanner_, doc_length_);
}

std::vector<SpanMapping> evaluate_spanner(const Vpeg& g,
                                          std::span<const Token> document,
                                          SpannerMode mode) {
  CompiledSpanner compiled = compile_spanner(g);
  Vpt vpt = spanner_transducer(compiled, mode);
  SpanSource source(document);
  SpannerEvaluation eval = evaluate_spanner(compiled, vpt, source);
  std::vector<SpanMapping> out;
  while (auto m = eval.next()) out.push_back(std::move(*m));
  return out;
}

}  // namespace vpenum
