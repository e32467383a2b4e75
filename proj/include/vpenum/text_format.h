#ifndef VPENUM_TEXT_FORMAT_H_
#define VPENUM_TEXT_FORMAT_H_

#include <iosfwd>
#include <string_view>

#include "vpenum/vpa.h"
#include "vpenum/vpt.h"

namespace vpenum {

// Line-oriented transducer format:
//
//   states: q0 q1
//   initial: q0
//   final: q1
//   stack: X
//   outputs: o
//   open a q0 -> q1 push X out o
//   close a q1 pop X -> q0 out -
//   neutral b q0 -> q0 out -
//
// `out -` (or no out clause) is the empty output. Symbols get their class
// from the transition lines; `open:`, `close:` and `neutral:` lines may
// declare symbols that no transition uses. Throws ParseError with the line
// number.
Vpt parse_transducer(std::istream& in);
Vpt parse_transducer(std::string_view text);

// Same format; any out clause other than `out -` is rejected.
Vpa parse_vpa(std::string_view text);

void write_transducer(std::ostream& out, const Vpt& vpt);

}  // namespace vpenum

#endif  // VPENUM_TEXT_FORMAT_H_
