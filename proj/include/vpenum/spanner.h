#ifndef VPENUM_SPANNER_H_
#define VPENUM_SPANNER_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vpenum/engine.h"
#include "vpenum/nested.h"
#include "vpenum/vpa.h"
#include "vpenum/vpt.h"

namespace vpenum {

using NonterminalId = std::int32_t;

// Capture markers are numbered 2*var (open) and 2*var+1 (close).
inline int capture_code(int var, bool close) { return 2 * var + (close ? 1 : 0); }
inline int capture_var(int code) { return code / 2; }
inline bool capture_closes(int code) { return code % 2 == 1; }

struct Production {
  enum class Kind : std::uint8_t { kEmpty, kLetter, kCapture, kNested };

  Kind kind = Kind::kEmpty;
  NonterminalId lhs = -1;
  SymbolId letter = kNoSymbol;  // kLetter: a neutral symbol
  int capture = -1;             // kCapture
  SymbolId open = kNoSymbol;    // kNested
  SymbolId close = kNoSymbol;   // kNested
  NonterminalId b = -1;         // continuation (kLetter, kCapture) or inner
  NonterminalId c = -1;         // kNested: what follows the close
};

struct Vpeg {
  std::vector<std::string> variables;
  std::vector<std::string> nonterminals;
  StructuredAlphabet alphabet;
  NonterminalId start = 0;
  std::vector<Production> productions;

  std::string capture_name(int code) const;
};

// Grammar file:
//   var x y
//   start S
//   S -> eps | a S | (x S | x) S | <a S a> S
// `(x` opens and `x)` closes variable x. Optional `open:`, `close:` and
// `neutral:` lines declare the alphabet; once any is present, undeclared
// letters are errors. Throws ParseError.
Vpeg parse_vpeg(std::string_view text);

// Nonterminals with at least one complete derivation (least fixpoint).
std::vector<bool> nullable_set(const Vpeg& g);

// Throws PreconditionError unless every complete derivation opens and then
// closes each variable exactly once.
void check_functional(const Vpeg& g);

// Extraction automaton: captures are neutral symbols named "(x" / "x)".
struct Evpa {
  Vpa automaton;
  std::vector<std::string> variables;
  std::vector<int> capture_of_symbol;  // per alphabet symbol, -1 if none
  // Shared state in which every level may end; it has no capture edges.
  // -1 when absent.
  StateId level_end = -1;
  std::size_t construction_steps = 0;
};

Evpa to_evpa(const Vpeg& g);

struct CompiledSpanner {
  Vpt vpt;
  std::vector<std::string> variables;
  std::vector<std::vector<int>> capture_sets;  // per output symbol
  SymbolId end_marker = kNoSymbol;
  std::size_t construction_steps = 0;
};

// Collapses each chain of capture transitions into the output of the
// transition that follows it, and adds `#` transitions into a fresh final
// state. Chains ending in the level-end state are not merged with its pops;
// the transition entering the chain goes to a copy of that state per capture
// set instead, which keeps the result linear in the automaton. Throws
// PreconditionError if capture transitions form a cycle.
CompiledSpanner evpa_to_vpt(const Evpa& evpa);

// check_functional + to_evpa + evpa_to_vpt.
CompiledSpanner compile_spanner(const Vpeg& g);

struct SpanMapping {
  std::vector<Span> spans;  // indexed by variable

  friend bool operator==(const SpanMapping&, const SpanMapping&) = default;
  friend auto operator<=>(const SpanMapping& a, const SpanMapping& b) {
    auto key = [](const SpanMapping& m) {
      std::vector<std::pair<std::size_t, std::size_t>> k;
      for (const Span& s : m.spans) k.push_back({s.start, s.end});
      return k;
    };
    return key(a) <=> key(b);
  }
};

// Throws PreconditionError when a variable is missing, captured twice, or
// closes before it opens.
SpanMapping decode_mapping(const OutputWord& word,
                           const CompiledSpanner& spanner,
                           std::size_t doc_length);

// "x=[i,j) y=[k,l)" with variables sorted by name.
std::string format_mapping(const SpanMapping& m,
                           const std::vector<std::string>& variables);

enum class SpannerMode {
  kAuto,              // run directly when I/O-deterministic, else determinize
  kTrustUnambiguous,  // run directly
  kDeterminize,       // always determinize
};

// Transducer the engine should run for `spanner` under `mode`. Output
// symbol ids are preserved.
Vpt spanner_transducer(const CompiledSpanner& spanner, SpannerMode mode);

// Appends the end marker after the wrapped source runs dry.
template <TokenSource Source>
class EndMarked {
 public:
  EndMarked(Source& source, SymbolId marker) : source_(&source), marker_(marker) {}
  std::optional<Token> next() {
    if (done_) return std::nullopt;
    if (auto t = source_->next()) {
      ++length_;
      return t;
    }
    done_ = true;
    return Token{SymbolKind::kNeutral, marker_};
  }
  std::size_t length() const { return length_; }

 private:
  Source* source_;
  SymbolId marker_;
  bool done_ = false;
  std::size_t length_ = 0;
};

class SpannerEvaluation {
 public:
  SpannerEvaluation(const CompiledSpanner& spanner, Evaluation eval,
                    std::size_t doc_length)
      : spanner_(&spanner), eval_(std::move(eval)), doc_length_(doc_length) {}

  std::optional<SpanMapping> next();

 private:
  const CompiledSpanner* spanner_;
  Evaluation eval_;
  std::size_t doc_length_;
};

// `transducer` must come from spanner_transducer(spanner, ...).
template <TokenSource Source>
SpannerEvaluation evaluate_spanner(const CompiledSpanner& spanner,
                                   const Vpt& transducer, Source& document) {
  EndMarked<Source> marked(document, spanner.end_marker);
  PreprocessResult r = preprocess(transducer, marked);
  return SpannerEvaluation(spanner, Evaluation(std::move(r)), marked.length());
}

std::vector<SpanMapping> evaluate_spanner(const Vpeg& g,
                                          std::span<const Token> document,
                                          SpannerMode mode = SpannerMode::kAuto);

}  // namespace vpenum

#endif  // VPENUM_SPANNER_H_
