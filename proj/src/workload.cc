#include "vpenum/workload.h"

#include <random>

#include "vpenum/text_format.h"

namespace vpenum {

Vpt marking_transducer() {
  return parse_transducer(R"(states: q0 q1 q2
initial: q0
final: q0 q1 q2
stack: X0 X1 X2
outputs: o p
neutral a q0 -> q0 out -
neutral a q0 -> q0 out o
neutral a q1 -> q1 out -
neutral a q2 -> q2 out -
neutral b q0 -> q1 out -
neutral b q1 -> q2 out p
neutral b q2 -> q0 out -
open t q0 -> q0 push X0
open t q1 -> q1 push X1
open t q2 -> q2 push X2
close t q0 pop X0 -> q0
close t q1 pop X0 -> q0
close t q2 pop X0 -> q0
close t q0 pop X1 -> q1
close t q1 pop X1 -> q1
close t q2 pop X1 -> q1
close t q0 pop X2 -> q2
close t q1 pop X2 -> q2
close t q2 pop X2 -> q2
)");
}

std::vector<Token> marking_document(const Vpt& vpt, std::size_t length,
                                    std::uint64_t seed,
                                    std::size_t max_depth) {
  const SymbolId a = *vpt.alphabet.find("a", SymbolKind::kNeutral);
  const SymbolId b = *vpt.alphabet.find("b", SymbolKind::kNeutral);
  const SymbolId open = *vpt.alphabet.find("t", SymbolKind::kOpen);
  const SymbolId close = *vpt.alphabet.find("t", SymbolKind::kClose);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 99);
  std::vector<Token> out;
  out.reserve(length);
  std::size_t depth = 0;
  while (out.size() < length) {
    std::size_t left = length - out.size();
    int r = pick(rng);
    if (depth > 0 && (left <= depth || (r < 10))) {
      out.push_back({SymbolKind::kClose, close});
      --depth;
    } else if (r < 20 && depth < max_depth && left >= depth + 2) {
      out.push_back({SymbolKind::kOpen, open});
      ++depth;
    } else if (r < 30) {
      out.push_back({SymbolKind::kNeutral, b});
    } else {
      out.push_back({SymbolKind::kNeutral, a});
    }
  }
  return out;
}

}  // namespace vpenum
