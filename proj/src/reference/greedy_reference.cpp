#include "alliance/error.hpp"
#include "alliance/greedy.hpp"
#include "alliance/metrics.hpp"

namespace alliance::reference {

GreedyTrace greedy_partition(const Realization& r, std::size_t carrier_count, double beta, double gamma) {
  if (carrier_count == 0) throw DataError("greedy: no carriers to partition");
  AlliancePartition part = AlliancePartition::singletons(carrier_count);
  std::vector<bool> live(carrier_count, true);
  GreedyTrace trace;
  double current = estimate_objective(part, r, beta, gamma).objective;
  trace.initial_objective = current;
  trace.initial_alliance_count = static_cast<std::uint32_t>(carrier_count);
  std::uint32_t k = static_cast<std::uint32_t>(carrier_count);
  while (k > 1) {
    double best = 0.0;
    std::uint32_t bp = kNoIndex, bq = kNoIndex;
    bool found = false;
    for (std::uint32_t p = 0; p < carrier_count; ++p) {
      if (!live[p]) continue;
      for (std::uint32_t q = p + 1; q < carrier_count; ++q) {
        if (!live[q]) continue;
        const double f = estimate_objective(part.merged(p, q), r, beta, gamma).objective;
        if (!found || f > best) {
          best = f;
          bp = p;
          bq = q;
          found = true;
        }
      }
    }
    if (!(best - current > 0.0)) break;
    part = part.merged(bp, bq);
    live[bq] = false;
    --k;
    current = best;
    trace.steps.push_back(GreedyStep{static_cast<std::uint32_t>(trace.steps.size() + 1), bp, bq, best, k});
  }
  trace.partition = part.canonical();
  return trace;
}

}  // namespace alliance::reference
