#include "vpenum/nested.h"

#include <sstream>
#include <stdexcept>

#include "vpenum/errors.h"

namespace vpenum {

const char* kind_name(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::kOpen: return "open";
    case SymbolKind::kClose: return "close";
    case SymbolKind::kNeutral: return "neutral";
  }
  return "?";
}

std::string StructuredAlphabet::key(std::string_view name, SymbolKind kind) {
  std::string k(1, static_cast<char>('0' + static_cast<int>(kind)));
  k.append(name);
  return k;
}

SymbolId StructuredAlphabet::add(std::string_view name, SymbolKind kind) {
  if (auto id = find(name, kind)) return *id;
  if (name.empty()) throw ParseError("empty symbol name");
  bool bracket = kind != SymbolKind::kNeutral;
  bool clash = bracket ? find(name, SymbolKind::kNeutral).has_value()
                       : (find(name, SymbolKind::kOpen).has_value() ||
                          find(name, SymbolKind::kClose).has_value());
  if (clash) {
    throw ParseError("symbol '" + std::string(name) +
                     "' used both as neutral and as open/close");
  }
  SymbolId id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back({std::string(name), kind});
  index_.emplace(key(name, kind), id);
  return id;
}

std::optional<SymbolId> StructuredAlphabet::find(std::string_view name,
                                                 SymbolKind kind) const {
  auto it = index_.find(key(name, kind));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<SymbolId> StructuredAlphabet::symbols_of(SymbolKind kind) const {
  std::vector<SymbolId> out;
  for (SymbolId i = 0; i < static_cast<SymbolId>(symbols_.size()); ++i) {
    if (symbols_[i].kind == kind) out.push_back(i);
  }
  return out;
}

bool Tokenizer::read_word(std::string& word) {
  word.clear();
  int c;
  while ((c = in_->get()) != EOF) {
    if (c == '#') {
      while ((c = in_->get()) != EOF && c != '\n') {}
      ++line_;
      if (!word.empty()) return true;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v') {
      if (c == '\n') ++line_;
      if (!word.empty()) return true;
      continue;
    }
    word.push_back(static_cast<char>(c));
  }
  return !word.empty();
}

std::optional<Token> Tokenizer::next() {
  std::string word;
  if (!read_word(word)) return std::nullopt;
  std::size_t pos = count_ + 1;
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError(why + " '" + word + "' at token " + std::to_string(pos) +
                      " (line " + std::to_string(line_) + ")");
  };

  SymbolKind kind = SymbolKind::kNeutral;
  std::string_view name = word;
  if (word.front() == '<') {
    kind = SymbolKind::kOpen;
    name.remove_prefix(1);
  } else if (word.back() == '>') {
    kind = SymbolKind::kClose;
    name.remove_suffix(1);
  }
  if (name.empty() || name.find_first_of("<>") != std::string_view::npos) {
    throw fail("malformed token");
  }
  auto id = alphabet_->find(name, kind);
  if (!id) throw fail(std::string("unknown ") + kind_name(kind) + " symbol");
  ++count_;
  return Token{kind, *id};
}

std::vector<Token> tokenize(std::string_view text,
                            const StructuredAlphabet& alphabet) {
  std::istringstream in{std::string(text)};
  Tokenizer tok(in, alphabet);
  std::vector<Token> out;
  while (auto t = tok.next()) out.push_back(*t);
  return out;
}

std::string serialize(std::span<const Token> tokens,
                      const StructuredAlphabet& alphabet) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    if (t.kind == SymbolKind::kOpen) out.push_back('<');
    out += alphabet.name(t.symbol);
    if (t.kind == SymbolKind::kClose) out.push_back('>');
  }
  return out;
}

bool validate_nestedness(std::span<const Token> tokens) {
  std::size_t depth = 0;
  for (const Token& t : tokens) {
    if (t.kind == SymbolKind::kOpen) {
      ++depth;
    } else if (t.kind == SymbolKind::kClose) {
      if (depth == 0) return false;
      --depth;
    }
  }
  return depth == 0;
}

void check_nestedness(std::span<const Token> tokens) {
  std::size_t depth = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind == SymbolKind::kOpen) {
      ++depth;
    } else if (tokens[i].kind == SymbolKind::kClose) {
      if (depth == 0) {
        throw NestingError(
            "unbalanced close at position " + std::to_string(i + 1), i + 1);
      }
      --depth;
    }
  }
  if (depth != 0) {
    throw NestingError("unclosed open at end of input (depth " +
                           std::to_string(depth) + ")",
                       tokens.size() + 1);
  }
}

namespace {

// Positions of the unmatched opens among tokens[1..k-1].
std::vector<std::size_t> open_stack(std::span<const Token> tokens,
                                    std::size_t k) {
  if (k < 1 || k > tokens.size() + 1) {
    throw std::out_of_range("position " + std::to_string(k) +
                            " outside [1, " +
                            std::to_string(tokens.size() + 1) + "]");
  }
  std::vector<std::size_t> stack;
  for (std::size_t i = 1; i < k; ++i) {
    const Token& t = tokens[i - 1];
    if (t.kind == SymbolKind::kOpen) {
      stack.push_back(i);
    } else if (t.kind == SymbolKind::kClose) {
      if (stack.empty()) {
        throw NestingError("unbalanced close at position " + std::to_string(i),
                           i);
      }
      stack.pop_back();
    }
  }
  return stack;
}

}  // namespace

Span currlevel(std::span<const Token> tokens, std::size_t k) {
  auto stack = open_stack(tokens, k);
  return {stack.empty() ? 1 : stack.back() + 1, k};
}

std::optional<Span> lowerlevel(std::span<const Token> tokens, std::size_t k) {
  auto stack = open_stack(tokens, k);
  if (stack.empty()) return std::nullopt;
  std::size_t j = stack.back();
  std::size_t i = stack.size() >= 2 ? stack[stack.size() - 2] + 1 : 1;
  return Span{i, j};
}

void for_each_well_nested(const StructuredAlphabet& alphabet,
                          std::size_t max_len,
                          const std::function<void(std::span<const Token>)>& fn,
                          std::size_t max_words) {
  auto opens = alphabet.symbols_of(SymbolKind::kOpen);
  auto closes = alphabet.symbols_of(SymbolKind::kClose);
  auto neutrals = alphabet.symbols_of(SymbolKind::kNeutral);
  std::vector<Token> word;
  std::size_t produced = 0;

  std::function<void(std::size_t, std::size_t)> extend =
      [&](std::size_t remaining, std::size_t depth) {
        if (remaining == 0) {
          if (depth != 0) return;
          if (++produced > max_words) {
            throw ResourceLimitError("more than " + std::to_string(max_words) +
                                     " well-nested words");
          }
          fn(word);
          return;
        }
        if (depth + 1 < remaining) {
          for (SymbolId a : opens) {
            word.push_back({SymbolKind::kOpen, a});
            extend(remaining - 1, depth + 1);
            word.pop_back();
          }
        }
        if (depth > 0) {
          for (SymbolId a : closes) {
            word.push_back({SymbolKind::kClose, a});
            extend(remaining - 1, depth - 1);
            word.pop_back();
          }
        }
        if (depth < remaining) {
          for (SymbolId a : neutrals) {
            word.push_back({SymbolKind::kNeutral, a});
            extend(remaining - 1, depth);
            word.pop_back();
          }
        }
      };
  for (std::size_t len = 0; len <= max_len; ++len) extend(len, 0);
}

}  // namespace vpenum
