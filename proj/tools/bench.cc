#include "bench.h"

#include <algorithm>
#include <chrono>

#include "vpenum/engine.h"
#include "vpenum/workload.h"

using namespace vpenum;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int run_bench(const BenchConfig& config, std::ostream& out) {
  Vpt vpt = marking_transducer();
  const std::size_t budget =
      vpt.num_states() * vpt.num_states() * vpt.num_transitions();
  out << "length,visits,visits_per_symbol,max_visits,max_ecs_ops,"
         "visit_budget,arena_nodes,preprocess_ms,outputs,max_delay,"
         "max_delay_ratio,enumerate_ms\n";
  for (std::size_t n : config.lengths) {
    std::vector<Token> doc = marking_document(vpt, n, config.seed + n);
    SpanSource source(doc);
    auto t0 = std::chrono::steady_clock::now();
    PreprocessResult r = preprocess(vpt, source, true);
    double pre_ms = ms_since(t0);
    std::uint32_t max_ops = 0;
    for (const SymbolStats& s : r.stats) max_ops = std::max(max_ops, s.ecs_ops);
    std::uint64_t total = r.total_visits, max_visits = r.max_visits;
    std::size_t nodes = r.ecs.size();

    Evaluation eval(std::move(r), config.smoothing);
    std::size_t outputs = 0;
    std::uint64_t max_delay = 0;
    double max_ratio = 0;
    t0 = std::chrono::steady_clock::now();
    while (outputs < config.limit) {
      auto w = eval.next();
      if (!w) break;
      ++outputs;
      std::uint64_t d = eval.enumerator().last_delay();
      max_delay = std::max(max_delay, d);
      max_ratio = std::max(
          max_ratio, double(d) / double(std::max<std::size_t>(1, w->size())));
    }
    double enum_ms = ms_since(t0);
    out << n << ',' << total << ',' << double(total) / double(n) << ','
        << max_visits << ',' << max_ops << ',' << budget << ',' << nodes << ','
        << pre_ms << ',' << outputs << ',' << max_delay << ',' << max_ratio
        << ',' << enum_ms << '\n';
  }
  return 0;
}
