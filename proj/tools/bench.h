#ifndef VPENUM_TOOLS_BENCH_H_
#define VPENUM_TOOLS_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

struct BenchConfig {
  std::vector<std::size_t> lengths{1000, 10000, 100000};
  std::size_t limit = 10000;  // outputs enumerated per document
  std::uint64_t seed = 1;
  std::size_t smoothing = 16;
};

// One CSV row per document length.
int run_bench(const BenchConfig& config, std::ostream& out);

#endif  // VPENUM_TOOLS_BENCH_H_
