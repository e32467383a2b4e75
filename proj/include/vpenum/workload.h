#ifndef VPENUM_WORKLOAD_H_
#define VPENUM_WORKLOAD_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vpenum/nested.h"
#include "vpenum/vpt.h"

namespace vpenum {

// Fixed 3-state I/O-deterministic transducer over <t t> a b. In state q0
// every `a` may or may not be marked, so a document with n such letters has
// about 2^n outputs.
Vpt marking_transducer();

// Random well-nested document over marking_transducer()'s alphabet: mostly
// `a`, some `b`, brackets up to max_depth deep.
std::vector<Token> marking_document(const Vpt& vpt, std::size_t length,
                                    std::uint64_t seed,
                                    std::size_t max_depth = 8);

}  // namespace vpenum

#endif  // VPENUM_WORKLOAD_H_
