#ifndef BATCHOPT_BNB_HPP_
#define BATCHOPT_BNB_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "batchopt/core.hpp"
#include "batchopt/eval.hpp"

namespace batchopt {

struct BnbConfig {
  // Wall-clock limits make anytime results; only node-limited runs are
  // reproducible across machines.
  double time_limit_seconds = 100.0;
  long long node_limit = -1;  // < 0: unlimited

  enum class Branching { LargestPattern, PatternId };
  Branching branching = Branching::LargestPattern;

  std::uint64_t seed = 0;  // nonzero shuffles branching ties
};

struct SolveReport {
  double best_objective = 0.0;
  Partition best_partition;
  bool proven_optimal = false;
  long long nodes_explored = 0;
  double elapsed_seconds = 0.0;
  double bound = 0.0;
};

// Depth-first branch and bound over pattern multiplicities per batch.
SolveReport solve_approx(const Instance& instance, Weighting weighting,
                         const BnbConfig& config = {});

// Exhaustive evaluation of all unordered partitions; the ground-truth
// oracle for tiny instances.
SolveReport enumerate_exact(const Instance& instance, Strategy strategy,
                            long long cap = 1'000'000,
                            SshapeVariant variant = SshapeVariant::Parity);

// Turns pattern multiplicities x[t][j] into a concrete partition, dealing
// each pattern's members in ascending order id.
Partition decode_pattern_solution(const Instance& instance, const std::vector<Pattern>& patterns,
                                  const std::vector<std::vector<int>>& x);

// Pattern multiplicities realized by a partition (the inverse of decode,
// up to member identity).
std::vector<std::vector<int>> pattern_counts(const Instance& instance,
                                             const std::vector<Pattern>& patterns,
                                             const Partition& partition);

void write_report(const SolveReport& report, std::ostream& out);

}  // namespace batchopt

#endif  // BATCHOPT_BNB_HPP_
