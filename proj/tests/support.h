// Random instance generators and brute-force oracles shared by the unit
// tests and the acceptance binary. Nothing here calls into the engine.
#ifndef VPENUM_TESTS_SUPPORT_H_
#define VPENUM_TESTS_SUPPORT_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vpenum/ecs.h"
#include "vpenum/nested.h"
#include "vpenum/spanner.h"
#include "vpenum/vpt.h"

namespace testing_support {

using namespace vpenum;
using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}
inline bool coin(Rng& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

// Open/close pairs a, b, ... and neutrals c, d, ...
inline StructuredAlphabet small_alphabet(int pairs, int neutrals) {
  StructuredAlphabet s;
  for (int i = 0; i < pairs; ++i) {
    std::string n(1, char('a' + i));
    s.add(n, SymbolKind::kOpen);
    s.add(n, SymbolKind::kClose);
  }
  for (int i = 0; i < neutrals; ++i) {
    s.add(std::string(1, char('m' + i)), SymbolKind::kNeutral);
  }
  return s;
}

// Random well-nested word of exactly `length` symbols (any open may be
// closed by any close).
inline std::vector<Token> random_word(const StructuredAlphabet& s,
                                      std::size_t length, Rng& rng) {
  auto opens = s.symbols_of(SymbolKind::kOpen);
  auto closes = s.symbols_of(SymbolKind::kClose);
  auto neutrals = s.symbols_of(SymbolKind::kNeutral);
  std::vector<Token> w;
  std::size_t depth = 0;
  while (w.size() < length) {
    std::size_t left = length - w.size();
    int r = uniform(rng, 0, 2);
    bool can_open = !opens.empty() && left >= depth + 2;
    bool can_neutral = !neutrals.empty() && left > depth;
    if (depth > 0 && (left == depth || r == 0 || (!can_open && !can_neutral))) {
      w.push_back({SymbolKind::kClose, closes[uniform(rng, 0, int(closes.size()) - 1)]});
      --depth;
    } else if (can_open && (r == 1 || !can_neutral)) {
      w.push_back({SymbolKind::kOpen, opens[uniform(rng, 0, int(opens.size()) - 1)]});
      ++depth;
    } else if (can_neutral) {
      w.push_back({SymbolKind::kNeutral, neutrals[uniform(rng, 0, int(neutrals.size()) - 1)]});
    } else {
      break;  // odd length without neutrals
    }
  }
  return w;
}

struct RandomVptSpec {
  int max_states = 5;
  int max_transitions = 15;
  int outputs = 2;
  int stack_symbols = 2;
  bool io_deterministic = true;
};

inline Vpt random_vpt(const StructuredAlphabet& alphabet, const RandomVptSpec& spec,
                      Rng& rng) {
  Vpt t;
  t.alphabet = alphabet;
  int n = uniform(rng, 1, spec.max_states);
  for (int q = 0; q < n; ++q) t.add_state("q" + std::to_string(q));
  t.initial.push_back(0);
  if (!spec.io_deterministic && n > 1 && coin(rng, 0.3)) t.initial.push_back(1);
  for (int q = 0; q < n; ++q) t.final[q] = coin(rng, 0.5);
  for (int x = 0; x < spec.stack_symbols; ++x) t.add_stack_symbol("X" + std::to_string(x));
  for (int o = 0; o < spec.outputs; ++o) t.add_output("o" + std::to_string(o));

  auto opens = alphabet.symbols_of(SymbolKind::kOpen);
  auto closes = alphabet.symbols_of(SymbolKind::kClose);
  auto neutrals = alphabet.symbols_of(SymbolKind::kNeutral);
  auto pick = [&](const std::vector<SymbolId>& v) { return v[uniform(rng, 0, int(v.size()) - 1)]; };
  auto out = [&] { return coin(rng, 0.4) ? kEpsilonOutput : uniform(rng, 0, spec.outputs - 1); };

  std::set<std::tuple<int, int, int, int>> keys;  // kind, from, symbol, out (+stack for pops)
  int m = uniform(rng, 1, spec.max_transitions);
  for (int i = 0; i < m; ++i) {
    int kind = uniform(rng, 0, 2);
    if (kind == 0 && !opens.empty()) {
      VptPush r{uniform(rng, 0, n - 1), pick(opens), out(), uniform(rng, 0, n - 1),
                uniform(rng, 0, spec.stack_symbols - 1)};
      if (spec.io_deterministic && !keys.insert({0, r.from, r.symbol, r.out}).second) continue;
      t.push.push_back(r);
    } else if (kind == 1 && !closes.empty()) {
      VptPop r{uniform(rng, 0, n - 1), pick(closes), out(),
               uniform(rng, 0, spec.stack_symbols - 1), uniform(rng, 0, n - 1)};
      if (spec.io_deterministic &&
          !keys.insert({1, r.from, r.symbol * 64 + r.pop, r.out}).second) {
        continue;
      }
      t.pop.push_back(r);
    } else if (!neutrals.empty()) {
      VptNeutral r{uniform(rng, 0, n - 1), pick(neutrals), out(), uniform(rng, 0, n - 1)};
      if (spec.io_deterministic && !keys.insert({2, r.from, r.symbol, r.out}).second) continue;
      t.neutral.push_back(r);
    }
  }
  return t;
}

// A run prefix as seen by the brute-force walker. states[i] is the state
// before reading position i+1; pushed[i] is the stack symbol pushed at
// position i+1 or -1.
struct RunTrace {
  std::vector<StateId> states;
  std::vector<OutputId> outputs;
  std::vector<StackId> pushed;
};

// Calls fn(trace) for every run prefix over every prefix of w (including
// the empty prefix), starting in an initial state.
inline void for_each_run_prefix(const Vpt& t, const std::vector<Token>& w,
                                const std::function<void(const RunTrace&)>& fn) {
  RunTrace trace;
  std::vector<StackId> stack;
  std::function<void()> walk = [&] {
    fn(trace);
    std::size_t i = trace.outputs.size();
    if (i == w.size()) return;
    StateId q = trace.states.back();
    const Token& a = w[i];
    auto step = [&](StateId to, OutputId o, StackId push) {
      trace.states.push_back(to);
      trace.outputs.push_back(o);
      trace.pushed.push_back(push);
      walk();
      trace.states.pop_back();
      trace.outputs.pop_back();
      trace.pushed.pop_back();
    };
    switch (a.kind) {
      case SymbolKind::kOpen:
        for (const auto& r : t.push) {
          if (r.from != q || r.symbol != a.symbol) continue;
          stack.push_back(r.push);
          step(r.to, r.out, r.push);
          stack.pop_back();
        }
        break;
      case SymbolKind::kClose:
        if (stack.empty()) return;
        for (const auto& r : t.pop) {
          if (r.from != q || r.symbol != a.symbol || r.pop != stack.back()) continue;
          StackId x = stack.back();
          stack.pop_back();
          step(r.to, r.out, -1);
          stack.push_back(x);
        }
        break;
      case SymbolKind::kNeutral:
        for (const auto& r : t.neutral) {
          if (r.from == q && r.symbol == a.symbol) step(r.to, r.out, -1);
        }
        break;
    }
  };
  for (StateId q0 : t.initial) {
    trace.states = {q0};
    walk();
  }
}

// Multiset of outputs of accepting runs, counted independently of
// oracle_enumerate.
inline std::map<OutputWord, int> accepting_outputs(const Vpt& t, const std::vector<Token>& w) {
  std::map<OutputWord, int> out;
  for_each_run_prefix(t, w, [&](const RunTrace& r) {
    if (r.outputs.size() != w.size() || !t.final[r.states.back()]) return;
    int depth = 0;
    for (StackId x : r.pushed) depth += x >= 0;
    for (const Token& a : w) depth -= a.kind == SymbolKind::kClose;
    if (depth != 0) return;
    ++out[out_of_run(r.outputs)];
  });
  return out;
}

// The neutral-symbol reduction: every neutral c becomes an open ^c followed
// by a close ^c. Returns the expanded transducer and a word mapper.
struct Expansion {
  Vpt vpt;
  std::vector<SymbolId> open_of;   // per original neutral symbol
  std::vector<SymbolId> close_of;

  // Expanded word and, per expanded position (1-based), the original one.
  std::pair<std::vector<Token>, std::vector<std::uint32_t>> expand(
      const std::vector<Token>& w) const {
    std::vector<Token> e;
    std::vector<std::uint32_t> back{0};
    for (std::size_t k = 0; k < w.size(); ++k) {
      const Token& a = w[k];
      if (a.kind == SymbolKind::kNeutral) {
        e.push_back({SymbolKind::kOpen, open_of[a.symbol]});
        e.push_back({SymbolKind::kClose, close_of[a.symbol]});
        back.push_back(std::uint32_t(k + 1));
        back.push_back(std::uint32_t(k + 1));
      } else {
        e.push_back(a);
        back.push_back(std::uint32_t(k + 1));
      }
    }
    return {e, back};
  }
};

inline Expansion expand_neutrals(const Vpt& t) {
  Expansion x;
  Vpt& e = x.vpt;
  e.alphabet = t.alphabet;  // keeps original ids
  x.open_of.assign(t.alphabet.size(), kNoSymbol);
  x.close_of.assign(t.alphabet.size(), kNoSymbol);
  for (SymbolId a : t.alphabet.symbols_of(SymbolKind::kNeutral)) {
    x.open_of[a] = e.alphabet.add("^" + t.alphabet.name(a), SymbolKind::kOpen);
    x.close_of[a] = e.alphabet.add("^" + t.alphabet.name(a), SymbolKind::kClose);
  }
  for (const auto& s : t.states) e.add_state(s);
  for (const auto& s : t.stack_symbols) e.add_stack_symbol(s);
  for (const auto& o : t.outputs) e.add_output(o);
  e.initial = t.initial;
  for (std::size_t q = 0; q < t.states.size(); ++q) e.final[q] = t.final[q];
  e.push = t.push;
  e.pop = t.pop;
  for (std::size_t i = 0; i < t.neutral.size(); ++i) {
    const VptNeutral& r = t.neutral[i];
    StateId mid = e.add_state("n" + std::to_string(i));
    StackId g = e.add_stack_symbol("N" + std::to_string(i));
    e.push.push_back({r.from, x.open_of[r.symbol], r.out, mid, g});
    e.pop.push_back({mid, x.close_of[r.symbol], kEpsilonOutput, g, r.to});
  }
  return x;
}

// ---------------------------------------------------------------- spanners

// Ref-word semantics: every derivation of the grammar whose plain word is d,
// keeping those that open and then close each variable exactly once. Maps
// each resulting mapping to its number of derivations.
class RefWordOracle {
 public:
  RefWordOracle(const Vpeg& g, const std::vector<Token>& d) : g_(g), d_(d) {
    match_.assign(d.size(), -1);
    std::vector<int> st;
    for (int i = 0; i < int(d.size()); ++i) {
      if (d[i].kind == SymbolKind::kOpen) st.push_back(i);
      if (d[i].kind == SymbolKind::kClose) {
        match_[st.back()] = i;
        st.pop_back();
      }
    }
    nvars_ = int(g.variables.size());
  }

  std::map<SpanMapping, int> mappings() {
    std::map<SpanMapping, int> out;
    int all_closed = 0;
    for (int v = 0; v < nvars_; ++v) all_closed |= 2 << (2 * v);
    for (const Partial& p : derive(g_.start, 0, int(d_.size()), 0)) {
      if (p.status != all_closed) continue;
      SpanMapping m;
      m.spans.assign(nvars_, Span{0, 0});
      for (auto [code, pos] : p.events) {
        (capture_closes(code) ? m.spans[capture_var(code)].end
                              : m.spans[capture_var(code)].start) = pos;
      }
      out[m] += p.count;
    }
    return out;
  }

 private:
  // status: two bits per variable, 0 unopened, 1 open, 2 closed.
  struct Partial {
    std::vector<std::pair<int, std::size_t>> events;
    int status;
    int count;
  };

  std::vector<Partial> derive(NonterminalId a, int i, int j, int status) {
    auto key = std::make_tuple(a, i, j, status);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    memo_[key] = {};  // guards capture-only cycles, which cannot repeat anyway
    std::map<std::pair<std::vector<std::pair<int, std::size_t>>, int>, int> acc;
    for (const Production& p : g_.productions) {
      if (p.lhs != a) continue;
      switch (p.kind) {
        case Production::Kind::kEmpty:
          if (i == j) acc[{{}, status}] += 1;
          break;
        case Production::Kind::kLetter:
          if (i < j && d_[i].kind == SymbolKind::kNeutral && d_[i].symbol == p.letter) {
            for (const Partial& r : derive(p.b, i + 1, j, status)) acc[{r.events, r.status}] += r.count;
          }
          break;
        case Production::Kind::kCapture: {
          int v = capture_var(p.capture);
          int cur = (status >> (2 * v)) & 3;
          int want = capture_closes(p.capture) ? 1 : 0;
          if (cur != want) break;
          int s2 = status + (1 << (2 * v));
          for (const Partial& r : derive(p.b, i, j, s2)) {
            std::vector<std::pair<int, std::size_t>> ev{{p.capture, std::size_t(i + 1)}};
            ev.insert(ev.end(), r.events.begin(), r.events.end());
            acc[{ev, r.status}] += r.count;
          }
          break;
        }
        case Production::Kind::kNested: {
          if (i >= j || d_[i].kind != SymbolKind::kOpen || d_[i].symbol != p.open) break;
          int m = match_[i];
          if (m >= j || d_[m].symbol != p.close) break;
          for (const Partial& r1 : derive(p.b, i + 1, m, status)) {
            for (const Partial& r2 : derive(p.c, m + 1, j, r1.status)) {
              auto ev = r1.events;
              ev.insert(ev.end(), r2.events.begin(), r2.events.end());
              acc[{ev, r2.status}] += r1.count * r2.count;
            }
          }
          break;
        }
      }
    }
    std::vector<Partial> out;
    for (auto& [k, c] : acc) out.push_back({k.first, k.second, c});
    memo_[key] = out;
    return out;
  }

  const Vpeg& g_;
  const std::vector<Token>& d_;
  std::vector<int> match_;
  int nvars_ = 0;
  std::map<std::tuple<int, int, int, int>, std::vector<Partial>> memo_;
};

// Random grammar that is functional by construction: every nonterminal is
// tagged with the capture status it starts in and the one it must end in.
inline std::string random_functional_grammar(Rng& rng, int nvars, int nonterminals) {
  // A nonterminal derives the segment that moves every variable from status
  // `start` to status `end` (0 unopened, 1 open, 2 closed), one base-3 digit
  // per variable.
  int full = 1;
  for (int v = 0; v < nvars; ++v) full *= 3;
  auto unit = [](int v) { int p = 1; while (v--) p *= 3; return p; };
  auto digit = [&](int s, int v) { return (s / unit(v)) % 3; };
  auto le = [&](int s, int e) {
    for (int v = 0; v < nvars; ++v) if (digit(s, v) > digit(e, v)) return false;
    return true;
  };
  struct Nt { int start, end; };
  std::vector<Nt> nts;
  auto find = [&](int st, int e) {
    for (int i = 0; i < int(nts.size()); ++i) if (nts[i].start == st && nts[i].end == e) return i;
    return -1;
  };
  // Adds (st, e) and the chain of one-step successors down to (e, e).
  auto add = [&](int st, int e, bool fresh) {
    if (fresh || find(st, e) < 0) nts.push_back({st, e});
    while (st != e) {
      int v = 0;
      while (digit(st, v) == digit(e, v)) ++v;
      st += unit(v);
      if (find(st, e) < 0) nts.push_back({st, e});
    }
  };
  add(0, full - 1, true);
  for (int st = 0; st < full; ++st) add(st, full - 1, false);
  while (int(nts.size()) < nonterminals + full) {
    int st = uniform(rng, 0, full - 1), e = uniform(rng, 0, full - 1);
    if (le(st, e)) add(st, e, coin(rng, 0.3));
  }
  auto name = [](int i) { return i == 0 ? std::string("S") : "N" + std::to_string(i); };
  auto pick = [&](const std::vector<int>& ok) { return name(ok[uniform(rng, 0, int(ok.size()) - 1)]); };
  auto same = [&](int st, int e) {
    std::vector<int> ok;
    for (int b = 0; b < int(nts.size()); ++b) if (nts[b].start == st && nts[b].end == e) ok.push_back(b);
    return ok;
  };

  std::string vars;
  for (int v = 0; v < nvars; ++v) vars += std::string(" ") + char('x' + v);
  std::string text = nvars ? "var" + vars + "\n" : "";
  text += "start S\nopen: a\nclose: a\nneutral: m n\n";
  for (int a = 0; a < int(nts.size()); ++a) {
    const Nt& me = nts[a];
    std::vector<std::string> alts;
    auto capture = [&](int v) {
      std::string x(1, char('x' + v));
      return (digit(me.start, v) == 0 ? "(" + x : x + ")") + " " + pick(same(me.start + unit(v), me.end));
    };
    // Guaranteed way out: eps, or the next capture towards `end`.
    if (me.start == me.end) {
      if (find(me.start, me.end) == a || coin(rng, 0.5)) alts.push_back("eps");
    } else {
      int v = 0;
      while (digit(me.start, v) == digit(me.end, v)) ++v;
      alts.push_back(capture(v));
    }
    int tries = uniform(rng, 0, 3);
    for (int k = 0; k < tries; ++k) {
      int shape = uniform(rng, 0, 2);
      if (shape == 0) {
        alts.push_back(std::string(coin(rng, 0.5) ? "m " : "n ") + pick(same(me.start, me.end)));
      } else if (shape == 1 && nvars > 0) {
        int v = uniform(rng, 0, nvars - 1);
        if (digit(me.start, v) < digit(me.end, v) && !same(me.start + unit(v), me.end).empty())
          alts.push_back(capture(v));
      } else if (shape == 2) {
        std::vector<std::pair<int, int>> ok;
        for (int b = 0; b < int(nts.size()); ++b)
          for (int c = 0; c < int(nts.size()); ++c)
            if (nts[b].start == me.start && nts[b].end == nts[c].start && nts[c].end == me.end)
              ok.push_back({b, c});
        if (ok.empty()) continue;
        auto [b, c] = ok[uniform(rng, 0, int(ok.size()) - 1)];
        alts.push_back("<a " + name(b) + " a> " + name(c));
      }
    }
    if (alts.empty()) alts.push_back("eps");
    std::sort(alts.begin(), alts.end());
    alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
    text += name(a) + " ->";
    for (std::size_t k = 0; k < alts.size(); ++k) text += (k ? " | " : " ") + alts[k];
    text += "\n";
  }
  return text;
}

// Document over the random grammars' alphabet: pair a, neutrals m n.
inline std::vector<Token> random_grammar_document(const Vpeg& g, std::size_t len, Rng& rng) {
  StructuredAlphabet s;
  s.add("a", SymbolKind::kOpen);
  s.add("a", SymbolKind::kClose);
  s.add("m", SymbolKind::kNeutral);
  s.add("n", SymbolKind::kNeutral);
  std::vector<Token> w = random_word(s, len, rng);
  std::vector<Token> out;
  for (const Token& t : w) out.push_back({t.kind, *g.alphabet.find(s.name(t.symbol), t.kind)});
  return out;
}

// Plain word of some random derivation of G with at most max_len symbols,
// or a random document when no derivation is found quickly.
inline std::vector<Token> sample_grammar_document(const Vpeg& g, std::size_t max_len, Rng& rng) {
  int fuel = 0;
  std::function<bool(NonterminalId, std::size_t, std::vector<Token>&)> sample =
      [&](NonterminalId a, std::size_t budget, std::vector<Token>& out) {
        if (++fuel > 2000) return false;
        std::vector<const Production*> ps;
        for (const Production& p : g.productions) {
          if (p.lhs == a) ps.push_back(&p);
        }
        std::shuffle(ps.begin(), ps.end(), rng);
        for (const Production* p : ps) {
          std::size_t mark = out.size();
          bool ok = false;
          switch (p->kind) {
            case Production::Kind::kEmpty:
              ok = true;
              break;
            case Production::Kind::kLetter:
              if (budget < 1) break;
              out.push_back({SymbolKind::kNeutral, p->letter});
              ok = sample(p->b, budget - 1, out);
              break;
            case Production::Kind::kCapture:
              ok = sample(p->b, budget, out);
              break;
            case Production::Kind::kNested: {
              if (budget < 2) break;
              out.push_back({SymbolKind::kOpen, p->open});
              std::size_t inner = std::size_t(uniform(rng, 0, int(budget - 2)));
              std::size_t before = out.size();
              if (!sample(p->b, inner, out)) break;
              out.push_back({SymbolKind::kClose, p->close});
              ok = sample(p->c, budget - 2 - (out.size() - before - 1), out);
              break;
            }
          }
          if (ok) return true;
          out.resize(mark);
        }
        return false;
      };
  for (int attempt = 0; attempt < 20; ++attempt) {
    fuel = 0;
    std::vector<Token> out;
    if (sample(g.start, std::size_t(uniform(rng, 0, int(max_len))), out)) return out;
  }
  return random_grammar_document(g, std::size_t(uniform(rng, 0, int(max_len))), rng);
}

}  // namespace testing_support

namespace testing_support {

// Multiset denoted by an ECS node, by structural recursion (no enumerator).
inline std::multiset<OutputWord> ecs_language(const Ecs& ecs, NodeHandle v) {
  std::multiset<OutputWord> out;
  if (v.empty()) return out;
  switch (ecs.label(v)) {
    case NodeLabel::kEpsilon:
      out.insert(OutputWord{});
      break;
    case NodeLabel::kSymbol:
      out.insert({ecs.payload(v)});
      break;
    case NodeLabel::kUnion: {
      out = ecs_language(ecs, ecs.left(v));
      auto r = ecs_language(ecs, ecs.right(v));
      out.insert(r.begin(), r.end());
      break;
    }
    case NodeLabel::kProduct: {
      auto l = ecs_language(ecs, ecs.left(v));
      auto r = ecs_language(ecs, ecs.right(v));
      for (const auto& a : l) {
        for (const auto& b : r) {
          OutputWord w = a;
          w.insert(w.end(), b.begin(), b.end());
          out.insert(w);
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace testing_support
#endif  // VPENUM_TESTS_SUPPORT_H_
