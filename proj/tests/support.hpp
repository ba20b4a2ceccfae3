#ifndef BATCHOPT_TESTS_SUPPORT_HPP_
#define BATCHOPT_TESTS_SUPPORT_HPP_

#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "batchopt/core.hpp"
#include "batchopt/rng.hpp"

namespace testsup {

// Compact builder for hand-written instances. Items are (id, aisle, depth),
// orders are (id, item ids).
inline batchopt::Instance tiny_instance(std::vector<int> lengths,
                                        std::vector<std::tuple<int, int, int>> item_specs,
                                        std::vector<std::pair<int, std::vector<int>>> order_specs,
                                        int capacity, const std::string& tau = "0.4",
                                        batchopt::Validation mode = batchopt::Validation::Strict) {
  batchopt::Layout layout;
  layout.aisle_lengths = std::move(lengths);
  std::vector<batchopt::Item> items;
  for (auto& [id, aisle, depth] : item_specs) items.push_back({id, aisle, depth});
  std::vector<batchopt::Order> orders;
  for (auto& [id, members] : order_specs) orders.push_back({id, members});
  return batchopt::make_instance(std::move(layout), std::move(items), std::move(orders), capacity,
                                 batchopt::Tau::parse(tau), "tiny", mode);
}

// Seeded random strict instance; independent of the library generator.
inline batchopt::Instance random_tiny(std::uint64_t seed, int n_orders, int capacity,
                                      std::vector<int> lengths = {6, 5, 3}, int catalog = 12,
                                      const std::string& tau = "0.4") {
  auto gen = batchopt::make_engine(seed);
  batchopt::Layout layout;
  layout.aisle_lengths = std::move(lengths);
  std::vector<batchopt::Item> items;
  for (int k = 0; k < catalog; ++k) {
    int aisle = 1 + static_cast<int>(batchopt::bounded(gen, layout.aisle_lengths.size()));
    int depth = 1 + static_cast<int>(batchopt::bounded(
                        gen, static_cast<std::uint64_t>(layout.length(aisle))));
    items.push_back({100 + k, aisle, depth});
  }
  std::vector<batchopt::Order> orders;
  for (int i = 0; i < n_orders; ++i) {
    int size = 1 + static_cast<int>(batchopt::bounded(gen, 3));
    std::vector<int> picks;
    while (static_cast<int>(picks.size()) < size) {
      int id = 100 + static_cast<int>(batchopt::bounded(gen, static_cast<std::uint64_t>(catalog)));
      bool dup = false;
      for (int p : picks) dup = dup || p == id;
      if (!dup) picks.push_back(id);
    }
    orders.push_back({i + 1, picks});
  }
  return batchopt::make_instance(std::move(layout), std::move(items), std::move(orders), capacity,
                                 batchopt::Tau::parse(tau), "rand", batchopt::Validation::Strict);
}

// Enumerates every labeled assignment of n orders into n/c batches of
// exactly c; deliberately naive so it can serve as an oracle for the
// library's enumerator.
inline void for_each_labeled_partition(int n_orders, int capacity,
                                       const std::function<void(const std::vector<int>&)>& visit) {
  const int batches = n_orders / capacity;
  std::vector<int> assignment(static_cast<std::size_t>(n_orders), -1);
  std::vector<int> fill(static_cast<std::size_t>(batches), 0);
  std::function<void(int)> recurse = [&](int order) {
    if (order == n_orders) {
      visit(assignment);
      return;
    }
    for (int j = 0; j < batches; ++j) {
      if (fill[static_cast<std::size_t>(j)] == capacity) continue;
      assignment[static_cast<std::size_t>(order)] = j;
      ++fill[static_cast<std::size_t>(j)];
      recurse(order + 1);
      --fill[static_cast<std::size_t>(j)];
      assignment[static_cast<std::size_t>(order)] = -1;
    }
  };
  recurse(0);
}

}  // namespace testsup

#endif  // BATCHOPT_TESTS_SUPPORT_HPP_
