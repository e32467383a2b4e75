#ifndef VPENUM_NESTED_H_
#define VPENUM_NESTED_H_

#include <concepts>
#include <cstddef>
#include <compare>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vpenum {

enum class SymbolKind : std::uint8_t { kOpen, kClose, kNeutral };

const char* kind_name(SymbolKind kind);

using SymbolId = std::int32_t;
inline constexpr SymbolId kNoSymbol = -1;

// Symbols are identified by (kind, name): "<a" and "a>" are two different
// symbols sharing the name "a". A name used by a neutral symbol may not be
// reused by an open or close symbol and vice versa.
class StructuredAlphabet {
 public:
  // Returns the id of (kind, name), inserting it if needed. Throws
  // ParseError if the name collides across the neutral/bracket divide.
  SymbolId add(std::string_view name, SymbolKind kind);
  std::optional<SymbolId> find(std::string_view name, SymbolKind kind) const;

  SymbolKind kind(SymbolId id) const { return symbols_[id].kind; }
  const std::string& name(SymbolId id) const { return symbols_[id].name; }
  std::size_t size() const { return symbols_.size(); }

  std::vector<SymbolId> symbols_of(SymbolKind kind) const;

 private:
  struct Symbol {
    std::string name;
    SymbolKind kind;
  };
  static std::string key(std::string_view name, SymbolKind kind);

  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> index_;
};

struct Token {
  SymbolKind kind = SymbolKind::kNeutral;
  SymbolId symbol = kNoSymbol;

  friend auto operator<=>(const Token&, const Token&) = default;
};

// Half-open span <start, end> over 1-based positions.
struct Span {
  std::size_t start = 1;
  std::size_t end = 1;

  friend bool operator==(const Span&, const Span&) = default;
};

// Anything the engine can pull tokens from. next() returns nullopt at EOF.
template <typename S>
concept TokenSource = requires(S s) {
  { s.next() } -> std::same_as<std::optional<Token>>;
};

// Pull-based tokenizer over a character stream. Reads one token at a time;
// never looks further ahead than the current whitespace-separated word.
class Tokenizer {
 public:
  Tokenizer(std::istream& in, const StructuredAlphabet& alphabet)
      : in_(&in), alphabet_(&alphabet) {}

  // Throws ParseError on unknown symbols or malformed token syntax.
  std::optional<Token> next();

  // Number of tokens returned so far.
  std::size_t count() const { return count_; }

 private:
  bool read_word(std::string& word);

  std::istream* in_;
  const StructuredAlphabet* alphabet_;
  std::size_t count_ = 0;
  std::size_t line_ = 1;
};

// Adapts an in-memory token sequence to a TokenSource.
class SpanSource {
 public:
  explicit SpanSource(std::span<const Token> tokens) : tokens_(tokens) {}
  std::optional<Token> next() {
    if (at_ == tokens_.size()) return std::nullopt;
    return tokens_[at_++];
  }

 private:
  std::span<const Token> tokens_;
  std::size_t at_ = 0;
};

std::vector<Token> tokenize(std::string_view text,
                            const StructuredAlphabet& alphabet);
std::string serialize(std::span<const Token> tokens,
                      const StructuredAlphabet& alphabet);

bool validate_nestedness(std::span<const Token> tokens);
// Throws NestingError naming the first offending position.
void check_nestedness(std::span<const Token> tokens);

// Longest well-nested span ending at k. Requires the prefix before k to
// contain no unmatched close; 1 <= k <= |w|+1. Throws std::out_of_range or
// NestingError otherwise.
Span currlevel(std::span<const Token> tokens, std::size_t k);
// The level below currlevel(k); nullopt when currlevel(k) starts at 1.
std::optional<Span> lowerlevel(std::span<const Token> tokens, std::size_t k);

// Calls fn on every well-nested word over the alphabet with length <= max_len
// (shortest first). Throws ResourceLimitError once more than max_words words
// would be produced.
void for_each_well_nested(const StructuredAlphabet& alphabet,
                          std::size_t max_len,
                          const std::function<void(std::span<const Token>)>& fn,
                          std::size_t max_words = 5'000'000);

}  // namespace vpenum

#endif  // VPENUM_NESTED_H_
