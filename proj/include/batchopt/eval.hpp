#ifndef BATCHOPT_EVAL_HPP_
#define BATCHOPT_EVAL_HPP_

#include <span>
#include <vector>

#include "batchopt/core.hpp"

namespace batchopt {

enum class Strategy { Return, Sshape };

// Parity charges 2*l_b on odd-ordinal visited aisles; DeltaWeighted
// charges l_b once per visited aisle (the sampling form of the
// objective).
enum class SshapeVariant { Parity, DeltaWeighted };

// Surrogate objectives over a partition: Ap1 counts visited aisles per
// batch, Ap2 weights them by aisle length.
enum class Weighting { Ap1, Ap2 };

const char* to_string(Strategy s);
const char* to_string(Weighting w);

// Resolved auxiliaries for one batch. visited_aisles ascends; max_depths,
// ordinals and odd_flags are parallel to it. Ordinals are 1..n in aisle
// order, odd_flags their parity.
struct BatchEvaluation {
  int batch = 0;
  long long unique_items = 0;
  std::vector<int> visited_aisles;
  std::vector<int> max_depths;
  std::vector<int> ordinals;
  std::vector<int> odd_flags;

  int num_visited() const { return static_cast<int>(visited_aisles.size()); }
};

struct ObjectiveValue {
  long long packing = 0;  // sum over batches of unique item counts
  long long travel = 0;   // strategy-dependent distance in LU
  double combined = 0.0;  // tau*packing + (1-tau)*travel
};

struct ObjectiveDelta {
  long long packing = 0;
  long long travel = 0;
  double combined = 0.0;
};

// Exact integer comparison key: den*combined = num*packing + (den-num)*travel.
inline long long scaled_cost(long long packing, long long travel, const Tau& tau) {
  return tau.num * packing + (tau.den - tau.num) * travel;
}
inline long long scaled_cost(const ObjectiveValue& v, const Tau& tau) {
  return scaled_cost(v.packing, v.travel, tau);
}
inline bool strictly_improves(const ObjectiveDelta& d, const Tau& tau) {
  return scaled_cost(d.packing, d.travel, tau) < 0;
}

BatchEvaluation evaluate_members(const Instance& instance, std::span<const int> member_orders,
                                 int batch_index);
BatchEvaluation evaluate_batch(const Instance& instance, const Partition& partition,
                               int batch_index);
std::vector<BatchEvaluation> evaluate_all(const Instance& instance, const Partition& partition);

ObjectiveValue return_cost(const Instance& instance, const Partition& partition);
ObjectiveValue sshape_cost(const Instance& instance, const Partition& partition,
                           SshapeVariant variant = SshapeVariant::Parity);
ObjectiveValue combined_cost(const Instance& instance, const Partition& partition,
                             Strategy strategy, SshapeVariant variant = SshapeVariant::Parity);

// Travel of a single evaluated batch under the given strategy.
long long batch_travel(const Instance& instance, const BatchEvaluation& eval, Strategy strategy,
                       SshapeVariant variant = SshapeVariant::Parity);

// Change of the combined objective if the two orders (positions in
// instance.orders) swap batches; recomputes only the two touched batches.
ObjectiveDelta delta_objective_swap(const Instance& instance, const Partition& partition,
                                    int order_a, int order_b, Strategy strategy,
                                    SshapeVariant variant = SshapeVariant::Parity);

// Ap1: total visited-aisle count; Ap2: total visited aisle length.
long long surrogate_value(const Instance& instance, const Partition& partition, Weighting w);

}  // namespace batchopt

#endif  // BATCHOPT_EVAL_HPP_
