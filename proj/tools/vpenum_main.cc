// vpenum: run, oracle, spanner, determinize, bench.
//
// Exit codes: 0 ok, 1 usage, 2 bad input, 3 resource cap, 4 precondition,
// 5 oracle --diff found a mismatch.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bench.h"
#include "vpenum/engine.h"
#include "vpenum/errors.h"
#include "vpenum/spanner.h"
#include "vpenum/text_format.h"
#include "vpenum/vpt.h"

using namespace vpenum;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kCap = 3, kPrecondition = 4, kMismatch = 5 };

struct UsageError : Error {
  using Error::Error;
};

struct ModeFlags {
  bool trust = false;
  bool check = false;
  bool determinize = false;

  void add(CLI::App* app) {
    app->add_flag("--trust-unambiguous", trust,
                  "run the transducer as given; caller vouches it is I/O-unambiguous");
    app->add_flag("--check-deterministic", check,
                  "refuse unless the transducer is I/O-deterministic (default)");
    app->add_flag("--determinize-first", determinize,
                  "determinize before running");
  }
  AmbiguityMode mode() const {
    if (int(trust) + int(check) + int(determinize) > 1) {
      throw UsageError("choose at most one of --trust-unambiguous, "
                       "--check-deterministic, --determinize-first");
    }
    if (trust) return AmbiguityMode::kTrustUnambiguous;
    if (determinize) return AmbiguityMode::kDeterminizeFirst;
    return AmbiguityMode::kCheckDeterministic;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The document stream: a file, or stdin for "-". Never read eagerly.
class DocumentInput {
 public:
  explicit DocumentInput(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw ParseError("cannot open '" + path + "'");
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  return out;
}

struct RunOptions {
  std::string transducer;
  std::string document = "-";
  ModeFlags modes;
  std::optional<std::size_t> limit;
  bool stats = false;
  std::string stats_out;
  bool checkpoint = false;
};

int cmd_run(const RunOptions& o) {
  AmbiguityMode mode = o.modes.mode();
  Vpt vpt = prepare_transducer(parse_transducer(read_file(o.transducer)), mode);
  DocumentInput doc(o.document);
  Tokenizer tokens(doc.stream(), vpt.alphabet);
  bool stats = o.stats || !o.stats_out.empty();

  Preprocessor pre(vpt, stats);
  while (auto t = tokens.next()) {
    pre.feed(*t);
    if (o.checkpoint && pre.depth() == 0) {
      std::cerr << "checkpoint " << pre.tokens() << ": "
                << (pre.checkpoint().empty() ? "no output" : "output") << '\n';
    }
  }
  NodeHandle root = pre.finish();
  PreprocessResult r;
  r.tokens = pre.tokens();
  r.total_visits = pre.total_visits();
  r.max_visits = pre.max_visits();
  r.stats = pre.symbol_stats();
  r.ecs = pre.take_ecs();
  r.v_out = root;

  Evaluation eval(std::move(r));
  std::map<std::uint64_t, std::size_t> delays;
  std::cout << "#\n";
  std::size_t emitted = 0;
  while (!o.limit || emitted < *o.limit) {
    auto w = eval.next();
    if (!w) break;
    ++emitted;
    if (stats) ++delays[eval.enumerator().last_delay()];
    std::cout << format_output_word(*w, vpt) << '\n';
  }
  std::cout << "#\n";
  std::cout.flush();

  if (stats) {
    std::ofstream file;
    if (!o.stats_out.empty()) file = open_output(o.stats_out);
    std::ostream& out = o.stats_out.empty() ? std::cerr : file;
    out << "position,visits,ecs_ops,nodes\n";
    const auto& s = eval.result().stats;
    for (std::size_t k = 0; k < s.size(); ++k) {
      out << k + 1 << ',' << s[k].visits << ',' << s[k].ecs_ops << ','
          << s[k].nodes << '\n';
    }
    out << "\ndelay_steps,outputs\n";
    for (auto [d, n] : delays) out << d << ',' << n << '\n';
  }
  return kOk;
}

struct OracleOptions {
  std::string transducer;
  std::string document = "-";
  ModeFlags modes;
  bool diff = false;
  std::size_t max_runs = OracleLimits{}.max_runs;
};

int cmd_oracle(const OracleOptions& o) {
  Vpt vpt = parse_transducer(read_file(o.transducer));
  DocumentInput doc(o.document);
  std::vector<Token> tokens;
  Tokenizer tok(doc.stream(), vpt.alphabet);
  while (auto t = tok.next()) tokens.push_back(*t);

  std::set<OutputWord> expected = oracle_enumerate(vpt, tokens, {o.max_runs});
  for (const OutputWord& w : expected) {
    std::cout << format_output_word(w, vpt) << '\n';
  }
  if (!o.diff) return kOk;

  Vpt run = prepare_transducer(vpt, o.modes.mode());
  std::vector<OutputWord> got = evaluate_all(run, tokens);
  std::set<OutputWord> got_set(got.begin(), got.end());
  bool same = got_set == expected && got_set.size() == got.size();
  if (got_set.size() != got.size()) {
    std::cerr << "engine produced " << got.size() - got_set.size()
              << " duplicate output(s)\n";
  }
  for (const OutputWord& w : got_set) {
    if (!expected.count(w)) {
      std::cerr << "+ " << format_output_word(w, vpt) << '\n';
    }
  }
  for (const OutputWord& w : expected) {
    if (!got_set.count(w)) {
      std::cerr << "- " << format_output_word(w, vpt) << '\n';
    }
  }
  return same ? kOk : kMismatch;
}

struct SpannerOptions {
  std::string grammar;
  std::string document = "-";
  bool trust = false;
  bool determinize = false;
  std::optional<std::size_t> limit;
};

int cmd_spanner(const SpannerOptions& o) {
  if (o.trust && o.determinize) {
    throw UsageError("choose at most one of --trust-unambiguous, --determinize-first");
  }
  SpannerMode mode = o.trust         ? SpannerMode::kTrustUnambiguous
                     : o.determinize ? SpannerMode::kDeterminize
                                     : SpannerMode::kAuto;
  Vpeg g = parse_vpeg(read_file(o.grammar));
  CompiledSpanner compiled = compile_spanner(g);
  Vpt vpt = spanner_transducer(compiled, mode);
  DocumentInput doc(o.document);
  Tokenizer tokens(doc.stream(), g.alphabet);
  SpannerEvaluation eval = evaluate_spanner(compiled, vpt, tokens);
  std::size_t emitted = 0;
  while (!o.limit || emitted < *o.limit) {
    auto m = eval.next();
    if (!m) break;
    ++emitted;
    std::cout << format_mapping(*m, g.variables) << '\n';
  }
  return kOk;
}

struct DeterminizeOptions {
  std::string transducer;
  std::string output;
  std::size_t max_states = 200000;
};

int cmd_determinize(const DeterminizeOptions& o) {
  Vpt d = io_determinize(parse_transducer(read_file(o.transducer)), o.max_states);
  if (o.output.empty()) {
    write_transducer(std::cout, d);
  } else {
    std::ofstream out = open_output(o.output);
    write_transducer(out, d);
  }
  return kOk;
}

int cmd_bench(const BenchConfig& config, const std::string& output) {
  if (output.empty()) return run_bench(config, std::cout);
  std::ofstream out = open_output(output);
  return run_bench(config, out);
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{"Enumerate the outputs of visibly pushdown transducers"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "evaluate a transducer over a document");
  run_cmd->add_option("-t,--transducer", run.transducer, "transducer file")->required();
  run_cmd->add_option("-d,--document", run.document, "document file, - for stdin");
  run.modes.add(run_cmd);
  run_cmd->add_option("--limit", run.limit, "stop after this many outputs");
  run_cmd->add_flag("--stats", run.stats, "per-symbol and delay CSV (stderr unless --stats-out)");
  run_cmd->add_option("--stats-out", run.stats_out, "write the stats CSV here");
  run_cmd->add_flag("--checkpoint", run.checkpoint,
                    "finalize after every top-level symbol, report on stderr");

  OracleOptions oracle;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force output set, sorted");
  oracle_cmd->add_option("-t,--transducer", oracle.transducer, "transducer file")->required();
  oracle_cmd->add_option("-d,--document", oracle.document, "document file, - for stdin");
  oracle.modes.add(oracle_cmd);
  oracle_cmd->add_flag("--diff", oracle.diff, "also run the engine; exit 5 if the sets differ");
  oracle_cmd->add_option("--max-runs", oracle.max_runs, "cap on explored run prefixes");

  SpannerOptions spanner;
  CLI::App* spanner_cmd = app.add_subcommand("spanner", "evaluate an extraction grammar");
  spanner_cmd->add_option("-g,--grammar", spanner.grammar, "grammar file")->required();
  spanner_cmd->add_option("-d,--document", spanner.document, "document file, - for stdin");
  spanner_cmd->add_flag("--trust-unambiguous", spanner.trust, "skip determinization");
  spanner_cmd->add_flag("--determinize-first", spanner.determinize, "always determinize");
  spanner_cmd->add_option("--limit", spanner.limit, "stop after this many mappings");

  DeterminizeOptions det;
  CLI::App* det_cmd = app.add_subcommand("determinize", "write an I/O-deterministic equivalent");
  det_cmd->add_option("-t,--transducer", det.transducer, "transducer file")->required();
  det_cmd->add_option("-o,--output", det.output, "output file (default stdout)");
  det_cmd->add_option("--max-states", det.max_states, "cap on materialized states");

  BenchConfig bench;
  std::string bench_out;
  CLI::App* bench_cmd = app.add_subcommand("bench", "CSV timings on synthetic documents");
  bench_cmd->add_option("--lengths", bench.lengths, "document lengths")->delimiter(',');
  bench_cmd->add_option("--limit", bench.limit, "outputs enumerated per document");
  bench_cmd->add_option("--seed", bench.seed, "document seed");
  bench_cmd->add_option("--smoothing", bench.smoothing, "enumerator smoothing constant");
  bench_cmd->add_option("-o,--output", bench_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*oracle_cmd) return cmd_oracle(oracle);
    if (*spanner_cmd) return cmd_spanner(spanner);
    if (*det_cmd) return cmd_determinize(det);
    if (*bench_cmd) return cmd_bench(bench, bench_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const NestingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: resource cap: " << e.what() << '\n';
    return kCap;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  }
  return kUsage;
}
