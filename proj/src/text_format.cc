#include "vpenum/text_format.h"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vpenum/errors.h"

namespace vpenum {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> words;
};

std::vector<Line> split_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    std::string w;
    while (ss >> w) line.words.push_back(w);
    if (!line.words.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(const Line& line, const std::string& why) {
  throw ParseError("line " + std::to_string(line.number) + ": " + why);
}

class TransducerParser {
 public:
  explicit TransducerParser(std::istream& in) : lines_(split_lines(in)) {}

  Vpt parse() {
    for_header("states:", [&](const Line& line, const std::string& name) {
      declare(line, [&] { vpt_.add_state(name); });
    });
    for_header("stack:", [&](const Line& line, const std::string& name) {
      declare(line, [&] { vpt_.add_stack_symbol(name); });
    });
    for_header("outputs:", [&](const Line& line, const std::string& name) {
      if (name == "-") fail(line, "'-' is reserved for the empty output");
      declare(line, [&] { vpt_.add_output(name); });
    });
    for_header("initial:", [&](const Line& line, const std::string& name) {
      StateId q = state(line, name);
      if (!vpt_.is_initial(q)) vpt_.initial.push_back(q);
    });
    for_header("final:", [&](const Line& line, const std::string& name) {
      vpt_.final[state(line, name)] = true;
    });
    for (auto [header, kind] :
         {std::pair{"open:", SymbolKind::kOpen},
          std::pair{"close:", SymbolKind::kClose},
          std::pair{"neutral:", SymbolKind::kNeutral}}) {
      for_header(header, [&](const Line& line, const std::string& name) {
        symbol(line, name, kind);
      });
    }
    for (const Line& line : lines_) {
      const std::string& head = line.words[0];
      if (head.back() == ':') {
        if (!known_header(head)) fail(line, "unknown header '" + head + "'");
        continue;
      }
      if (head == "open") {
        parse_open(line);
      } else if (head == "close") {
        parse_close(line);
      } else if (head == "neutral") {
        parse_neutral(line);
      } else {
        fail(line, "expected a header or open/close/neutral, got '" + head +
                       "'");
      }
    }
    return std::move(vpt_);
  }

 private:
  static bool known_header(const std::string& h) {
    for (const char* k : {"states:", "initial:", "final:", "stack:",
                          "outputs:", "open:", "close:", "neutral:"}) {
      if (h == k) return true;
    }
    return false;
  }

  template <typename F>
  static void declare(const Line& line, F&& f) {
    try {
      f();
    } catch (const ParseError& e) {
      fail(line, e.what());
    }
  }

  template <typename F>
  void for_header(const char* header, F&& f) {
    for (const Line& line : lines_) {
      if (line.words[0] != header) continue;
      for (std::size_t i = 1; i < line.words.size(); ++i) f(line, line.words[i]);
    }
  }

  StateId state(const Line& line, const std::string& name) {
    auto q = vpt_.find_state(name);
    if (!q) fail(line, "undeclared state '" + name + "'");
    return *q;
  }
  StackId stack(const Line& line, const std::string& name) {
    auto x = vpt_.find_stack_symbol(name);
    if (!x) fail(line, "undeclared stack symbol '" + name + "'");
    return *x;
  }
  SymbolId symbol(const Line& line, const std::string& name, SymbolKind kind) {
    if (name.find_first_of("<>") != std::string::npos) {
      fail(line, "symbol names may not contain '<' or '>'");
    }
    try {
      return vpt_.alphabet.add(name, kind);
    } catch (const ParseError& e) {
      fail(line, e.what());
    }
  }

  // Parses an optional trailing "out o" starting at word i.
  OutputId output(const Line& line, std::size_t i) {
    const auto& w = line.words;
    if (i == w.size()) return kEpsilonOutput;
    if (w[i] != "out" || i + 2 != w.size()) fail(line, "bad out clause");
    if (w[i + 1] == "-") return kEpsilonOutput;
    auto o = vpt_.find_output(w[i + 1]);
    if (!o) fail(line, "undeclared output symbol '" + w[i + 1] + "'");
    return *o;
  }

  static void expect(const Line& line, std::size_t i, const char* word) {
    if (i >= line.words.size() || line.words[i] != word) {
      fail(line, std::string("expected '") + word + "'");
    }
  }

  // open a q -> q' push X [out o]
  void parse_open(const Line& line) {
    if (line.words.size() < 7) fail(line, "short open transition");
    expect(line, 3, "->");
    expect(line, 5, "push");
    const auto& w = line.words;
    VptPush t{state(line, w[2]), symbol(line, w[1], SymbolKind::kOpen),
              output(line, 7), state(line, w[4]), stack(line, w[6])};
    vpt_.push.push_back(t);
  }

  // close a q pop X -> q' [out o]
  void parse_close(const Line& line) {
    if (line.words.size() < 7) fail(line, "short close transition");
    expect(line, 3, "pop");
    expect(line, 5, "->");
    const auto& w = line.words;
    VptPop t{state(line, w[2]), symbol(line, w[1], SymbolKind::kClose),
             output(line, 7), stack(line, w[4]), state(line, w[6])};
    vpt_.pop.push_back(t);
  }

  // neutral a q -> q' [out o]
  void parse_neutral(const Line& line) {
    if (line.words.size() < 5) fail(line, "short neutral transition");
    expect(line, 3, "->");
    const auto& w = line.words;
    VptNeutral t{state(line, w[2]), symbol(line, w[1], SymbolKind::kNeutral),
                 output(line, 5), state(line, w[4])};
    vpt_.neutral.push_back(t);
  }

  std::vector<Line> lines_;
  Vpt vpt_;
};

}  // namespace

Vpt parse_transducer(std::istream& in) { return TransducerParser(in).parse(); }

Vpt parse_transducer(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_transducer(in);
}

Vpa parse_vpa(std::string_view text) {
  Vpt t = parse_transducer(text);
  auto silent = [](OutputId o) { return o == kEpsilonOutput; };
  for (const auto& r : t.push) {
    if (!silent(r.out)) throw ParseError("automaton file with outputs");
  }
  for (const auto& r : t.pop) {
    if (!silent(r.out)) throw ParseError("automaton file with outputs");
  }
  for (const auto& r : t.neutral) {
    if (!silent(r.out)) throw ParseError("automaton file with outputs");
  }
  return underlying_vpa(t);
}

void write_transducer(std::ostream& out, const Vpt& vpt) {
  auto list = [&](const char* header, const std::vector<std::string>& names) {
    out << header;
    for (const auto& n : names) out << ' ' << n;
    out << '\n';
  };
  list("states:", vpt.states);
  std::vector<std::string> names;
  for (StateId q : vpt.initial) names.push_back(vpt.states[q]);
  list("initial:", names);
  names.clear();
  for (std::size_t q = 0; q < vpt.states.size(); ++q) {
    if (vpt.final[q]) names.push_back(vpt.states[q]);
  }
  list("final:", names);
  list("stack:", vpt.stack_symbols);
  list("outputs:", vpt.outputs);
  for (auto [header, kind] : {std::pair{"open:", SymbolKind::kOpen},
                              std::pair{"close:", SymbolKind::kClose},
                              std::pair{"neutral:", SymbolKind::kNeutral}}) {
    names.clear();
    for (SymbolId a : vpt.alphabet.symbols_of(kind)) {
      names.push_back(vpt.alphabet.name(a));
    }
    if (!names.empty()) list(header, names);
  }
  auto out_clause = [&](OutputId o) {
    return o == kEpsilonOutput ? std::string("-") : vpt.outputs[o];
  };
  for (const auto& t : vpt.push) {
    out << "open " << vpt.alphabet.name(t.symbol) << ' ' << vpt.states[t.from]
        << " -> " << vpt.states[t.to] << " push " << vpt.stack_symbols[t.push]
        << " out " << out_clause(t.out) << '\n';
  }
  for (const auto& t : vpt.pop) {
    out << "close " << vpt.alphabet.name(t.symbol) << ' ' << vpt.states[t.from]
        << " pop " << vpt.stack_symbols[t.pop] << " -> " << vpt.states[t.to]
        << " out " << out_clause(t.out) << '\n';
  }
  for (const auto& t : vpt.neutral) {
    out << "neutral " << vpt.alphabet.name(t.symbol) << ' '
        << vpt.states[t.from] << " -> " << vpt.states[t.to] << " out "
        << out_clause(t.out) << '\n';
  }
}

}  // namespace vpenum
