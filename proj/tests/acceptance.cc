// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Random instances are seeded, so runs are reproducible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.h"
#include "vpenum/engine.h"
#include "vpenum/enumerate.h"
#include "vpenum/errors.h"
#include "vpenum/spanner.h"
#include "vpenum/vpa.h"
#include "vpenum/workload.h"

using namespace vpenum;
using namespace testing_support;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CountingSource {
  SpanSource inner;
  std::size_t calls = 0;
  std::optional<Token> next() {
    ++calls;
    return inner.next();
  }
};

// ------------------------------------------------------------------ 1
void oracle_equivalence() {
  const int kMachines = 1000, kWordsPerMachine = 2;
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  int instances = 0, mismatches = 0, duplicates = 0, nonempty = 0;
  for (int m = 0; m < kMachines; ++m) {
    auto s = small_alphabet(uniform(rng, 1, 2), uniform(rng, 1, 2));
    Vpt t = random_vpt(s, {}, rng);  // |Q| <= 5, |Delta| <= 15
    for (int k = 0; k < kWordsPerMachine; ++k) {
      auto w = random_word(s, uniform(rng, 0, 12), rng);
      Vpt run = prepare_transducer(t, AmbiguityMode::kCheckDeterministic);
      auto got = evaluate_all(run, w);
      std::set<OutputWord> got_set(got.begin(), got.end());
      duplicates += int(got.size() - got_set.size());
      mismatches += got_set != oracle_enumerate(t, w);
      nonempty += !got.empty();
      ++instances;
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << instances << " instances on " << kMachines << " machines, " << nonempty
    << " with outputs, " << mismatches << " mismatches, " << duplicates << " duplicates, "
    << secs << " s (limit 120 s)";
  report(1, "engine output set equals brute-force oracle", mismatches == 0 && duplicates == 0 && secs <= 120,
         d.str());
}

// ------------------------------------------------------------------ 2
using Group = std::map<std::vector<int>, std::set<OutputWord>>;

void table_invariants() {
  Rng rng(2002);
  int instances = 0, checks = 0, bad = 0, dup = 0;
  while (instances < 200) {
    auto s = small_alphabet(uniform(rng, 1, 2), uniform(rng, 1, 2));
    Vpt t = random_vpt(s, {}, rng);
    auto w = random_word(s, uniform(rng, 1, 10), rng);
    ++instances;

    // Oracle: group every run prefix by level endpoints. A stack entry
    // describes runs up to and including the pending open at j; they need
    // not survive past it.
    std::vector<Group> level(w.size() + 2), stack(w.size() + 2);
    std::vector<std::optional<Span>> low(w.size() + 2);
    for (std::size_t k = 1; k <= w.size() + 1; ++k) low[k] = lowerlevel(w, k);
    for_each_run_prefix(t, w, [&](const RunTrace& r) {
      std::size_t k = r.outputs.size() + 1;
      Span cur = currlevel(w, k);
      level[k][{r.states[cur.start - 1], r.states[k - 1]}].insert(out_of_run(r.outputs, cur.start, k));
      for (std::size_t k2 = k; k2 <= w.size() + 1; ++k2) {
        if (!low[k2] || low[k2]->end + 1 != k) continue;
        std::size_t i = low[k2]->start, j = low[k2]->end;  // j is the pending open
        stack[k2][{r.states[i - 1], r.pushed[j - 1], r.states[j]}].insert(out_of_run(r.outputs, i, j + 1));
      }
    });

    Preprocessor pre(t);
    for (std::size_t k = 1; k <= w.size() + 1; ++k) {
      Group got_level, got_stack;
      for (const LevelEntry& e : pre.level_entries()) {
        auto ws = enumerate_all(pre.ecs(), e.node);
        std::set<OutputWord> ws_set(ws.begin(), ws.end());
        dup += int(ws.size() - ws_set.size());
        got_level[{e.p, e.q}] = ws_set;
      }
      for (const StackEntry& e : pre.top_entries()) {
        auto ws = enumerate_all(pre.ecs(), e.node);
        std::set<OutputWord> ws_set(ws.begin(), ws.end());
        dup += int(ws.size() - ws_set.size());
        got_stack[{e.p, e.x, e.q}] = ws_set;
      }
      ++checks;
      bad += got_level != level[k] || got_stack != stack[k];
      if (k <= w.size()) pre.feed(w[k - 1]);
    }
  }
  std::ostringstream d;
  d << instances << " instances, " << checks << " prefix positions, " << bad << " mismatches, "
    << dup << " duplicates";
  report(2, "level and stack tables hold exactly the subrun outputs", bad == 0 && dup == 0, d.str());
}

// ------------------------------------------------------------------ 3
void output_linear_delay() {
  Vpt t = marking_transducer();
  std::vector<double> worst;
  std::ostringstream d;
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    auto w = marking_document(t, n, 3000 + n);
    SpanSource src(w);
    Evaluation eval(preprocess(t, src));
    double ratio = 0;
    std::size_t count = 0;
    while (count < 10000) {
      auto out = eval.next();
      if (!out) break;
      ++count;
      ratio = std::max(ratio, double(eval.enumerator().last_delay()) /
                                  double(std::max<std::size_t>(1, out->size())));
    }
    worst.push_back(ratio);
    d << "|w|=" << n << ": " << count << " outputs, max delay/|out| " << ratio << "; ";
  }
  double spread = *std::max_element(worst.begin(), worst.end()) /
                  *std::min_element(worst.begin(), worst.end());
  d << "spread " << spread << " (limit < 2)";
  report(3, "output-linear delay constant is flat across document lengths", spread < 2, d.str());
}

// ------------------------------------------------------------------ 4
void one_pass_update_time() {
  Rng rng(4004);
  int instances = 0, pull_bad = 0, budget_bad = 0;
  std::uint64_t worst_ops_ratio_num = 0, worst_ops_ratio_den = 1;
  auto check = [&](const Vpt& t, const std::vector<Token>& w) {
    CountingSource src{SpanSource(w)};
    PreprocessResult r = preprocess(t, src, true);
    ++instances;
    pull_bad += src.calls != w.size() + 1;
    std::uint64_t budget = std::uint64_t(t.num_states()) * t.num_states() * t.num_transitions();
    for (const SymbolStats& s : r.stats) {
      budget_bad += s.visits > budget;
      if (s.ecs_ops * worst_ops_ratio_den > worst_ops_ratio_num * std::max<std::uint64_t>(1, budget)) {
        worst_ops_ratio_num = s.ecs_ops;
        worst_ops_ratio_den = std::max<std::uint64_t>(1, budget);
      }
    }
  };
  for (int i = 0; i < 1000; ++i) {
    auto s = small_alphabet(uniform(rng, 1, 2), uniform(rng, 1, 2));
    Vpt t = random_vpt(s, {}, rng);
    check(t, random_word(s, uniform(rng, 0, 40), rng));
  }
  Vpt mt = marking_transducer();
  const std::vector<std::size_t> lengths = {1000, 2000, 5000, 10000, 20000, 50000, 100000};
  // Fit of total visits against |w|: a*x + b and the worst pointwise
  // relative residual.
  auto fit = [&](const std::vector<std::vector<Token>>& docs, double& a, double& b) {
    std::vector<double> xs, ys;
    for (const auto& w : docs) {
      SpanSource src(w);
      PreprocessResult r = preprocess(mt, src);
      xs.push_back(double(w.size()));
      ys.push_back(double(r.total_visits));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, k = double(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    a = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    b = (sy - a * sx) / k;
    double resid = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      resid = std::max(resid, std::abs(ys[i] - (a * xs[i] + b)) / ys[i]);
    }
    return resid;
  };
  // Same token mix at every length: repeats of one random well-nested block.
  auto block = marking_document(mt, 1000, 4000);
  std::vector<std::vector<Token>> periodic, independent;
  for (std::size_t n : lengths) {
    std::vector<Token> w;
    while (w.size() < n) w.insert(w.end(), block.begin(), block.end());
    check(mt, w);
    periodic.push_back(std::move(w));
    independent.push_back(marking_document(mt, n, 4000 + n));
  }
  double a = 0, b = 0, ia = 0, ib = 0;
  double resid = fit(periodic, a, b);
  double iresid = fit(independent, ia, ib);
  std::ostringstream d;
  d << instances << " instances, " << pull_bad << " pull-count errors, " << budget_bad
    << " symbols over |Q|^2|Delta| visits, worst raw ECS ops/budget "
    << double(worst_ops_ratio_num) / double(worst_ops_ratio_den) << ", linear fit " << a
    << "*|w|+" << b << " max relative residual " << resid
    << " (limit 0.05); independent random documents: " << ia << "*|w|+" << ib
    << " max relative residual " << iresid;
  report(4, "one pass, bounded per-symbol work, linear total work",
         pull_bad == 0 && budget_bad == 0 && resid < 0.05, d.str());
}

// ------------------------------------------------------------------ 5
void ecs_contracts() {
  Rng rng(5005);
  Ecs ecs;
  struct H {
    NodeHandle v;
    int maxlen;
  };
  std::vector<H> pool;
  int ops = 0, depth_bad = 0, unsafe = 0, budget_bad = 0, persist_bad = 0;
  struct Snapshot {
    NodeHandle v;
    std::vector<OutputWord> prefix;
  };
  std::vector<Snapshot> snaps;
  auto first_words = [&](NodeHandle v) {
    Enumerator e(ecs, v);
    std::vector<OutputWord> out;
    while (out.size() < 20) {
      auto w = e.next();
      if (!w) break;
      out.push_back(*w);
    }
    return out;
  };
  for (; ops < 100000; ++ops) {
    int kind = pool.size() < 4 ? 0 : uniform(rng, 0, 9);
    std::size_t before = ecs.size();
    std::size_t limit;
    H made{};
    if (kind <= 2) {
      made = {ecs.add({uniform(rng, 0, 3), std::uint32_t(uniform(rng, 1, 1000))}), 1};
      limit = 1;
    } else if (kind == 3) {
      made = {ecs.epsilon_node(), 0};
      limit = 1;
    } else if (kind <= 6) {
      const H& a = pool[uniform(rng, 0, int(pool.size()) - 1)];
      const H& b = pool[uniform(rng, 0, int(pool.size()) - 1)];
      made = {ecs.unite(a.v, b.v), std::max(a.maxlen, b.maxlen)};
      limit = 4;
    } else {
      const H& a = pool[uniform(rng, 0, int(pool.size()) - 1)];
      const H& b = pool[uniform(rng, 0, int(pool.size()) - 1)];
      if (a.maxlen + b.maxlen > 24) continue;
      made = {ecs.prod(a.v, b.v), a.maxlen + b.maxlen};
      limit = 5;
    }
    budget_bad += ecs.size() - before > limit;
    for (std::size_t i = before; i < ecs.size(); ++i) depth_bad += ecs.output_depth(NodeHandle(std::uint32_t(i))) > 2;
    unsafe += !ecs.is_safe(made.v);
    pool.push_back(made);
    if (ops % 500 == 0) snaps.push_back({made.v, first_words(made.v)});
  }
  for (const Snapshot& s : snaps) persist_bad += first_words(s.v) != s.prefix;

  // Output trees over sampled epsilon-free nodes.
  std::size_t trees = 0, over4 = 0;
  double worst = 0;
  for (std::size_t i = 0; i < pool.size(); i += 97) {
    NodeHandle v = pool[i].v;
    if (ecs.epsilon_case(v) != EpsilonCase::kNoEps) continue;
    OutputTree t(ecs, v);
    for (int step = 0; step < 300 && !t.exhausted(); ++step) {
      OutputWord w;
      t.print(w);
      std::size_t e = std::max<std::size_t>(1, w.size());
      ++trees;
      over4 += t.size() > 4 * e;
      worst = std::max(worst, double(t.size()) / double(e));
      t.advance();
    }
  }
  std::ostringstream d;
  d << ops << " ops, " << ecs.size() << " nodes, " << depth_bad << " nodes deeper than 2, " << unsafe
    << " unsafe results, " << budget_bad << " over node budget, " << persist_bad << "/" << snaps.size()
    << " snapshots changed, " << trees << " trees: " << over4 << " with size > 4|print| (worst "
    << worst << "|print|)";
  report(5, "ECS 2-bounded, node budgets, persistence, tree size <= 4|print|",
         depth_bad == 0 && unsafe == 0 && budget_bad == 0 && persist_bad == 0 && over4 == 0, d.str());
}

// ------------------------------------------------------------------ 6
void determinization() {
  Rng rng(6006);
  auto s = small_alphabet(1, 1);
  RandomVptSpec spec;
  spec.io_deterministic = false;
  int machines = 0, words = 0, out_bad = 0, lang_bad = 0, det_bad = 0;
  for (; machines < 100; ++machines) {
    Vpt t = random_vpt(s, spec, rng);
    Vpt d = io_determinize(t);
    det_bad += !is_io_deterministic(d);
    Vpa a = underlying_vpa(t);
    DetVpa da = determinize(a);
    for_each_well_nested(s, 8, [&](std::span<const Token> w) {
      ++words;
      out_bad += oracle_enumerate(t, w, {200'000'000}) != oracle_enumerate(d, w, {200'000'000});
      lang_bad += a.accepts(w) != da.accepts(w);
    });
  }
  std::ostringstream d;
  d << machines << " machines, " << words << " words, " << out_bad << " output-set mismatches, " << lang_bad
    << " acceptance mismatches, " << det_bad << " non-deterministic results";
  report(6, "determinized machines keep languages and output sets", out_bad == 0 && lang_bad == 0 && det_bad == 0,
         d.str());
}

// ------------------------------------------------------------------ 7
std::string chain_grammar(int n) {
  // n nonterminals in a ring of letters and nests, one variable captured
  std::ostringstream g;
  g << "var x\nstart S\n";
  g << "S -> m S | (x N0\n";
  for (int i = 0; i < n; ++i) {
    std::string me = "N" + std::to_string(i), nx = "N" + std::to_string((i + 1) % n);
    g << me << " -> m " << nx << " | <a I a> " << nx << " | x) T\n";
  }
  g << "I -> <a I a> I | m I | eps\nT -> m T | eps\n";
  return g.str();
}

void spanner_end_to_end() {
  Rng rng(7007);
  int grammars = 0, tried = 0, docs = 0, bad_auto = 0, bad_trust = 0, dup = 0, nonempty = 0;
  double worst_steps = 0;
  while (grammars < 100) {
    ++tried;
    Vpeg g = parse_vpeg(random_functional_grammar(rng, uniform(rng, 1, 2), uniform(rng, 2, 4)));
    std::vector<std::vector<Token>> ds;
    std::vector<std::map<SpanMapping, int>> expect;
    bool unambiguous = true;
    for (int k = 0; k < 4; ++k) {
      ds.push_back(k ? sample_grammar_document(g, 10, rng) : random_grammar_document(g, uniform(rng, 0, 10), rng));
      expect.push_back(RefWordOracle(g, ds.back()).mappings());
      for (auto& [m, c] : expect.back()) unambiguous &= c == 1;
    }
    if (!unambiguous) continue;
    ++grammars;
    Evpa e = to_evpa(g);
    worst_steps = std::max(worst_steps, double(e.construction_steps) /
                                            double(g.productions.size() + g.nonterminals.size()));
    CompiledSpanner c = compile_spanner(g);
    Vpt trusted = spanner_transducer(c, SpannerMode::kTrustUnambiguous);
    Vpt automatic = spanner_transducer(c, SpannerMode::kAuto);
    for (std::size_t k = 0; k < ds.size(); ++k) {
      std::set<SpanMapping> want;
      for (auto& [m, n] : expect[k]) want.insert(m);
      for (bool trust : {true, false}) {
        SpanSource src(ds[k]);
        SpannerEvaluation ev = evaluate_spanner(c, trust ? trusted : automatic, src);
        std::vector<SpanMapping> got;
        while (auto m = ev.next()) got.push_back(*m);
        std::set<SpanMapping> got_set(got.begin(), got.end());
        dup += int(got.size() - got_set.size());
        (trust ? bad_trust : bad_auto) += got_set != want;
      }
      ++docs;
      nonempty += !want.empty();
    }
  }
  // Compilation work against grammar size.
  std::vector<double> ratios;
  std::vector<std::size_t> sizes;
  for (int n : {8, 32, 128, 512, 2048}) {
    Vpeg g = parse_vpeg(chain_grammar(n));
    CompiledSpanner c = compile_spanner(g);
    sizes.push_back(g.productions.size());
    ratios.push_back(double(c.construction_steps) / double(g.productions.size()));
  }
  double spread = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
  std::ostringstream d;
  d << grammars << " grammars (" << tried << " generated), " << docs << " documents, " << nonempty
    << " with mappings, " << bad_trust << " mismatches direct, " << bad_auto << " mismatches determinized, "
    << dup << " duplicates; grammar-to-automaton steps <= " << worst_steps
    << " per production+nonterminal; compile steps/|P| for |P| = ";
  for (std::size_t n : sizes) d << n << ' ';
  d << ": ";
  for (double r : ratios) d << r << ' ';
  d << "spread " << spread << " (limit < 2)";
  report(7, "spanner mappings equal ref-word semantics; compilation linear in |P|",
         bad_trust == 0 && bad_auto == 0 && dup == 0 && worst_steps <= 6 && spread < 2, d.str());
}

// ------------------------------------------------------------------ 8
void neutral_expansion() {
  Rng rng(8008);
  int instances = 0, bad = 0, oracle_bad = 0;
  for (; instances < 200; ++instances) {
    auto s = small_alphabet(uniform(rng, 1, 2), uniform(rng, 1, 2));
    Vpt t = random_vpt(s, {}, rng);
    auto w = random_word(s, uniform(rng, 0, 12), rng);
    auto direct = evaluate_all(t, w);
    std::set<OutputWord> direct_set(direct.begin(), direct.end());

    Expansion x = expand_neutrals(t);
    auto [ew, back] = x.expand(w);
    Vpt ex = prepare_transducer(x.vpt, AmbiguityMode::kCheckDeterministic);
    std::set<OutputWord> remapped;
    for (OutputWord o : evaluate_all(ex, ew)) {
      for (Output& e : o) e.position = back[e.position];
      remapped.insert(o);
    }
    bad += remapped != direct_set;
    oracle_bad += direct_set != oracle_enumerate(t, w);
  }
  std::ostringstream d;
  d << instances << " instances, " << bad << " mismatches against the bracket expansion, " << oracle_bad
    << " against the oracle";
  report(8, "direct neutral step equals the open/close expansion", bad == 0 && oracle_bad == 0, d.str());
}

}  // namespace

int main() {
  struct Step {
    void (*fn)();
  };
  for (Step s : {Step{oracle_equivalence}, Step{table_invariants}, Step{output_linear_delay},
                 Step{one_pass_update_time}, Step{ecs_contracts}, Step{determinization},
                 Step{spanner_end_to_end}, Step{neutral_expansion}}) {
    try {
      s.fn();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion: unexpected exception: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
