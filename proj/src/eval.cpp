#include "batchopt/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace batchopt {

const char* to_string(Strategy s) {
  return s == Strategy::Return ? "return" : "sshape";
}

const char* to_string(Weighting w) {
  return w == Weighting::Ap1 ? "ap1" : "ap2";
}

BatchEvaluation evaluate_members(const Instance& instance, std::span<const int> member_orders,
                                 int batch_index) {
  BatchEvaluation eval;
  eval.batch = batch_index;

  std::vector<int> item_positions;
  std::vector<std::pair<int, int>> depths;  // (aisle, depth) accumulator
  for (int oi : member_orders) {
    const Order& order = instance.orders[static_cast<std::size_t>(oi)];
    for (int item_id : order.items) {
      int pos = instance.item_index.at(item_id);
      item_positions.push_back(pos);
      const Item& item = instance.items[static_cast<std::size_t>(pos)];
      auto slot = std::find_if(depths.begin(), depths.end(),
                               [&](const auto& e) { return e.first == item.aisle; });
      if (slot == depths.end()) {
        depths.emplace_back(item.aisle, item.depth);
      } else {
        slot->second = std::max(slot->second, item.depth);
      }
    }
  }

  std::sort(item_positions.begin(), item_positions.end());
  eval.unique_items = static_cast<long long>(
      std::unique(item_positions.begin(), item_positions.end()) - item_positions.begin());

  std::sort(depths.begin(), depths.end());
  eval.visited_aisles.reserve(depths.size());
  eval.max_depths.reserve(depths.size());
  eval.ordinals.reserve(depths.size());
  eval.odd_flags.reserve(depths.size());
  int ordinal = 0;
  for (const auto& [aisle, depth] : depths) {
    ++ordinal;
    eval.visited_aisles.push_back(aisle);
    eval.max_depths.push_back(depth);
    eval.ordinals.push_back(ordinal);
    eval.odd_flags.push_back(ordinal % 2);
  }
  return eval;
}

BatchEvaluation evaluate_batch(const Instance& instance, const Partition& partition,
                               int batch_index) {
  if (batch_index < 0 || batch_index >= instance.num_batches()) {
    throw std::out_of_range("batch index " + std::to_string(batch_index + 1) + " out of range");
  }
  std::vector<int> members;
  for (std::size_t i = 0; i < partition.batch_of.size(); ++i) {
    if (partition.batch_of[i] == batch_index) members.push_back(static_cast<int>(i));
  }
  return evaluate_members(instance, members, batch_index);
}

std::vector<BatchEvaluation> evaluate_all(const Instance& instance, const Partition& partition) {
  const auto members = batch_members(instance, partition);
  std::vector<BatchEvaluation> evals;
  evals.reserve(members.size());
  for (std::size_t j = 0; j < members.size(); ++j) {
    evals.push_back(evaluate_members(instance, members[j], static_cast<int>(j)));
  }
  return evals;
}

long long batch_travel(const Instance& instance, const BatchEvaluation& eval, Strategy strategy,
                       SshapeVariant variant) {
  long long travel = 0;
  if (strategy == Strategy::Return) {
    for (int depth : eval.max_depths) travel += 2LL * depth;
  } else if (variant == SshapeVariant::Parity) {
    for (int i = 0; i < eval.num_visited(); ++i) {
      if (eval.odd_flags[static_cast<std::size_t>(i)]) {
        travel += 2LL * instance.layout.length(eval.visited_aisles[static_cast<std::size_t>(i)]);
      }
    }
  } else {
    for (int aisle : eval.visited_aisles) travel += instance.layout.length(aisle);
  }
  return travel;
}

namespace {

ObjectiveValue total_cost(const Instance& instance, const Partition& partition, Strategy strategy,
                          SshapeVariant variant) {
  ObjectiveValue value;
  for (const BatchEvaluation& eval : evaluate_all(instance, partition)) {
    value.packing += eval.unique_items;
    value.travel += batch_travel(instance, eval, strategy, variant);
  }
  const double tau = instance.tau.value();
  value.combined = tau * static_cast<double>(value.packing) +
                   (1.0 - tau) * static_cast<double>(value.travel);
  return value;
}

}  // namespace

ObjectiveValue return_cost(const Instance& instance, const Partition& partition) {
  return total_cost(instance, partition, Strategy::Return, SshapeVariant::Parity);
}

ObjectiveValue sshape_cost(const Instance& instance, const Partition& partition,
                           SshapeVariant variant) {
  return total_cost(instance, partition, Strategy::Sshape, variant);
}

ObjectiveValue combined_cost(const Instance& instance, const Partition& partition,
                             Strategy strategy, SshapeVariant variant) {
  return total_cost(instance, partition, strategy, variant);
}

ObjectiveDelta delta_objective_swap(const Instance& instance, const Partition& partition,
                                    int order_a, int order_b, Strategy strategy,
                                    SshapeVariant variant) {
  const int ja = partition.batch_of[static_cast<std::size_t>(order_a)];
  const int jb = partition.batch_of[static_cast<std::size_t>(order_b)];
  if (ja == jb) throw std::invalid_argument("orders share a batch; nothing to swap");

  std::vector<int> members_a, members_b;
  for (std::size_t i = 0; i < partition.batch_of.size(); ++i) {
    if (partition.batch_of[i] == ja) members_a.push_back(static_cast<int>(i));
    if (partition.batch_of[i] == jb) members_b.push_back(static_cast<int>(i));
  }

  auto cost_of = [&](std::span<const int> members, int j) {
    BatchEvaluation eval = evaluate_members(instance, members, j);
    return std::pair<long long, long long>(eval.unique_items,
                                           batch_travel(instance, eval, strategy, variant));
  };

  const auto before_a = cost_of(members_a, ja);
  const auto before_b = cost_of(members_b, jb);

  std::replace(members_a.begin(), members_a.end(), order_a, order_b);
  std::replace(members_b.begin(), members_b.end(), order_b, order_a);

  const auto after_a = cost_of(members_a, ja);
  const auto after_b = cost_of(members_b, jb);

  ObjectiveDelta delta;
  delta.packing = after_a.first + after_b.first - before_a.first - before_b.first;
  delta.travel = after_a.second + after_b.second - before_a.second - before_b.second;
  const double tau = instance.tau.value();
  delta.combined = tau * static_cast<double>(delta.packing) +
                   (1.0 - tau) * static_cast<double>(delta.travel);
  return delta;
}

long long surrogate_value(const Instance& instance, const Partition& partition, Weighting w) {
  long long total = 0;
  for (const BatchEvaluation& eval : evaluate_all(instance, partition)) {
    if (w == Weighting::Ap1) {
      total += eval.num_visited();
    } else {
      for (int aisle : eval.visited_aisles) total += instance.layout.length(aisle);
    }
  }
  return total;
}

}  // namespace batchopt
