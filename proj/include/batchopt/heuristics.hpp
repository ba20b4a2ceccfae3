#ifndef BATCHOPT_HEURISTICS_HPP_
#define BATCHOPT_HEURISTICS_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "batchopt/core.hpp"
#include "batchopt/eval.hpp"

namespace batchopt {

struct VpgConfig {
  int k = 2;  // max aisle-set difference per side
  int m = 1;  // orders must have more than m items
  Strategy strategy = Strategy::Sshape;
  SshapeVariant variant = SshapeVariant::Parity;
};

// Candidate swap pairs as (order id, order id), a < b, ascending.
using PairList = std::vector<std::pair<int, int>>;

// All k-different pairs whose orders both hold more than m items.
PairList generate_valuable_pairs(const Instance& instance, const VpgConfig& config);

struct SwapRecord {
  int order_a = 0;  // order ids
  int order_b = 0;
  ObjectiveDelta delta;
};

struct VpgResult {
  Partition partition;
  int swaps_applied = 0;
  std::vector<SwapRecord> log;
};

// One in-order scan of the pair list; every cross-batch pair whose swap
// strictly decreases the combined objective is applied immediately.
VpgResult vpg_improve(const Instance& instance, const Partition& partition,
                      const PairList& pairs, const VpgConfig& config);
// Repeats scan passes until one applies no swap.
VpgResult vpg_improve_fixpoint(const Instance& instance, const Partition& partition,
                               const PairList& pairs, const VpgConfig& config,
                               int max_passes = 1000);

// Orders in input sequence, chunked into consecutive batches of C.
Partition fcfs(const Instance& instance);

// Seed rule: most visited aisles; addition rule: least new aisle length.
Partition seed_heuristic(const Instance& instance, Strategy strategy);

// Savings algorithms over the single-batch combined objective. cw1 ranks
// singleton savings once; cw2 re-evaluates group savings after each merge.
Partition cw1(const Instance& instance, Strategy strategy,
              SshapeVariant variant = SshapeVariant::Parity);
Partition cw2(const Instance& instance, Strategy strategy,
              SshapeVariant variant = SshapeVariant::Parity);

struct IlsConfig {
  double time_budget_seconds = 10.0;
  // >= 0 switches to a reproducible budget of perturbation rounds and
  // ignores the wall clock.
  long long iteration_limit = -1;
  std::uint64_t seed = 1;
};

// Iterated local search: best-improvement cross-batch swaps to a local
// optimum, then perturb (ceil(C/2) random disjoint swaps) and re-descend,
// accepting results that are not worse.
Partition ils(const Instance& instance, Strategy strategy, const IlsConfig& config = {});

}  // namespace batchopt

#endif  // BATCHOPT_HEURISTICS_HPP_
