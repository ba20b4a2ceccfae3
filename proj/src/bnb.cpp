#include "batchopt/bnb.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "batchopt/rng.hpp"

namespace batchopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct ApproxSearch {
  const Instance& inst;
  const std::vector<Pattern>& patterns;
  const BnbConfig& config;
  int num_patterns;
  int batches;
  int capacity;
  std::vector<long long> weight;            // w_b per aisle (1-based offset by -1)
  std::vector<long long> pattern_weight;    // total aisle weight per pattern
  std::vector<int> branch_order;            // pattern indices in branching order
  std::vector<int> remaining;               // unassigned count per pattern
  std::vector<long long> demand;            // remaining orders touching aisle b
  std::vector<std::vector<int>> x;          // counts per (pattern, batch)
  std::vector<std::vector<int>> best_x;
  long long best_cost = std::numeric_limits<long long>::max();
  long long acc = 0;
  std::vector<char> in_union;               // current batch aisle membership
  std::vector<int> fill;                    // current batch take per branch position
  std::vector<int> prev_fill;               // previous batch take per branch position
  long long nodes = 0;
  bool hit_limit = false;
  Clock::time_point start = Clock::now();
  double deadline = 0.0;

  ApproxSearch(const Instance& instance, const std::vector<Pattern>& pats, Weighting weighting,
               const BnbConfig& cfg)
      : inst(instance), patterns(pats), config(cfg) {
    num_patterns = static_cast<int>(patterns.size());
    batches = inst.num_batches();
    capacity = inst.capacity;
    deadline = cfg.time_limit_seconds;

    weight.resize(static_cast<std::size_t>(inst.layout.num_aisles()));
    for (int b = 1; b <= inst.layout.num_aisles(); ++b) {
      weight[static_cast<std::size_t>(b - 1)] =
          weighting == Weighting::Ap1 ? 1 : inst.layout.length(b);
    }
    pattern_weight.resize(static_cast<std::size_t>(num_patterns));
    remaining.resize(static_cast<std::size_t>(num_patterns));
    demand.assign(static_cast<std::size_t>(inst.layout.num_aisles()), 0);
    for (int t = 0; t < num_patterns; ++t) {
      const Pattern& p = patterns[static_cast<std::size_t>(t)];
      long long w = 0;
      for (int b : p.aisles) w += weight[static_cast<std::size_t>(b - 1)];
      pattern_weight[static_cast<std::size_t>(t)] = w;
      remaining[static_cast<std::size_t>(t)] = static_cast<int>(p.member_orders.size());
      for (int b : p.aisles) {
        demand[static_cast<std::size_t>(b - 1)] +=
            static_cast<long long>(p.member_orders.size());
      }
    }

    branch_order.resize(static_cast<std::size_t>(num_patterns));
    std::iota(branch_order.begin(), branch_order.end(), 0);
    if (config.branching == BnbConfig::Branching::LargestPattern) {
      std::stable_sort(branch_order.begin(), branch_order.end(), [&](int a, int b) {
        return patterns[static_cast<std::size_t>(a)].member_orders.size() >
               patterns[static_cast<std::size_t>(b)].member_orders.size();
      });
    }
    if (config.seed != 0) {
      // deterministic shuffle within equal-size tie groups
      auto gen = make_engine(config.seed);
      std::size_t lo = 0;
      while (lo < branch_order.size()) {
        std::size_t hi = lo + 1;
        auto size_of = [&](std::size_t i) {
          return patterns[static_cast<std::size_t>(branch_order[i])].member_orders.size();
        };
        while (hi < branch_order.size() && size_of(hi) == size_of(lo)) ++hi;
        if (hi - lo > 1) {
          std::vector<int> group(branch_order.begin() + static_cast<std::ptrdiff_t>(lo),
                                 branch_order.begin() + static_cast<std::ptrdiff_t>(hi));
          shuffle_fisher_yates(group, gen);
          std::copy(group.begin(), group.end(),
                    branch_order.begin() + static_cast<std::ptrdiff_t>(lo));
        }
        lo = hi;
      }
    }

    x.assign(static_cast<std::size_t>(num_patterns),
             std::vector<int>(static_cast<std::size_t>(batches), 0));
    in_union.assign(static_cast<std::size_t>(inst.layout.num_aisles()), 0);
    fill.assign(static_cast<std::size_t>(num_patterns), 0);
    prev_fill.assign(static_cast<std::size_t>(num_patterns), capacity + 1);  // no cap on batch 0
  }

  long long root_bound() const {
    long long bound = 0;
    for (std::size_t b = 0; b < demand.size(); ++b) {
      bound += weight[b] * ((demand[b] + capacity - 1) / capacity);
    }
    return bound;
  }

  // Admissible completion bound: cost so far plus, per aisle, the weight
  // of the future batches its remaining orders must occupy beyond the
  // `slots` still open in the current batch.
  long long node_bound(int slots) const {
    long long bound = acc;
    for (std::size_t b = 0; b < demand.size(); ++b) {
      long long overflow = demand[b] - slots;
      if (overflow > 0) bound += weight[b] * ((overflow + capacity - 1) / capacity);
    }
    return bound;
  }

  bool limits_hit() {
    if (hit_limit) return true;
    if (config.node_limit >= 0 && nodes >= config.node_limit) hit_limit = true;
    if ((nodes & 1023) == 0 && seconds_since(start) > deadline) hit_limit = true;
    return hit_limit;
  }

  void first_fit_decreasing() {
    auto rem = remaining;
    for (int j = 0; j < batches; ++j) {
      int slots = capacity;
      for (int pos = 0; pos < num_patterns && slots > 0; ++pos) {
        int t = branch_order[static_cast<std::size_t>(pos)];
        int take = std::min(rem[static_cast<std::size_t>(t)], slots);
        x[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = take;
        rem[static_cast<std::size_t>(t)] -= take;
        slots -= take;
      }
    }
    long long cost = 0;
    for (int j = 0; j < batches; ++j) {
      std::vector<char> seen(static_cast<std::size_t>(inst.layout.num_aisles()), 0);
      for (int t = 0; t < num_patterns; ++t) {
        if (x[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] == 0) continue;
        for (int b : patterns[static_cast<std::size_t>(t)].aisles) {
          if (!seen[static_cast<std::size_t>(b - 1)]) {
            seen[static_cast<std::size_t>(b - 1)] = 1;
            cost += weight[static_cast<std::size_t>(b - 1)];
          }
        }
      }
    }
    best_cost = cost;
    best_x = x;
    for (auto& row : x) std::fill(row.begin(), row.end(), 0);
  }

  void record_incumbent() {
    best_cost = acc;
    best_x = x;
  }

  void search(int j, int pos, int slots, bool tight) {
    if (limits_hit()) return;
    if (slots == 0) {
      if (j + 1 == batches) {
        if (acc < best_cost) record_incumbent();
        return;
      }
      auto saved_prev = prev_fill;
      prev_fill = fill;
      auto saved_fill = fill;
      std::fill(fill.begin(), fill.end(), 0);
      auto saved_union = in_union;
      std::fill(in_union.begin(), in_union.end(), 0);
      search(j + 1, 0, capacity, true);
      in_union = saved_union;
      fill = saved_fill;
      prev_fill = saved_prev;
      return;
    }
    if (pos == num_patterns) return;  // slots left but nothing to place

    const int t = branch_order[static_cast<std::size_t>(pos)];
    int max_take = std::min(remaining[static_cast<std::size_t>(t)], slots);
    if (tight) max_take = std::min(max_take, prev_fill[static_cast<std::size_t>(pos)]);

    for (int take = max_take; take >= 0; --take) {
      ++nodes;
      std::vector<int> added;
      if (take > 0) {
        remaining[static_cast<std::size_t>(t)] -= take;
        x[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = take;
        for (int b : patterns[static_cast<std::size_t>(t)].aisles) {
          demand[static_cast<std::size_t>(b - 1)] -= take;
          if (!in_union[static_cast<std::size_t>(b - 1)]) {
            in_union[static_cast<std::size_t>(b - 1)] = 1;
            acc += weight[static_cast<std::size_t>(b - 1)];
            added.push_back(b);
          }
        }
      }
      fill[static_cast<std::size_t>(pos)] = take;

      if (node_bound(slots - take) < best_cost) {
        bool still_tight = tight && take == prev_fill[static_cast<std::size_t>(pos)];
        search(j, pos + 1, slots - take, still_tight);
      }

      fill[static_cast<std::size_t>(pos)] = 0;
      if (take > 0) {
        remaining[static_cast<std::size_t>(t)] += take;
        x[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = 0;
        for (int b : patterns[static_cast<std::size_t>(t)].aisles) {
          demand[static_cast<std::size_t>(b - 1)] += take;
        }
        for (int b : added) {
          in_union[static_cast<std::size_t>(b - 1)] = 0;
          acc -= weight[static_cast<std::size_t>(b - 1)];
        }
      }
      if (limits_hit()) return;
    }
  }
};

}  // namespace

SolveReport solve_approx(const Instance& instance, Weighting weighting, const BnbConfig& config) {
  if (instance.num_orders() % instance.capacity != 0) {
    throw ValidationError("solve_approx requires a strict instance");
  }
  const auto patterns = extract_patterns(instance);
  ApproxSearch search(instance, patterns, weighting, config);

  const long long root = search.root_bound();
  search.first_fit_decreasing();
  search.search(0, 0, instance.capacity, false);

  SolveReport report;
  report.best_objective = static_cast<double>(search.best_cost);
  report.proven_optimal = !search.hit_limit;
  report.nodes_explored = search.nodes;
  report.elapsed_seconds = seconds_since(search.start);
  report.bound = report.proven_optimal ? report.best_objective : static_cast<double>(root);
  report.best_partition = decode_pattern_solution(instance, patterns, search.best_x);
  return report;
}

namespace {

long long count_partitions_capped(int n_orders, int capacity, long long cap) {
  // product of C(m-1, c-1) over anchor blocks
  __int128 count = 1;
  for (int m = n_orders; m > 0; m -= capacity) {
    // binomial C(m-1, capacity-1)
    __int128 binom = 1;
    for (int i = 1; i <= capacity - 1; ++i) {
      binom = binom * (m - i) / i;  // exact: prefix products of binomials are integral
    }
    count *= binom;
    if (count > cap) return -1;
  }
  return static_cast<long long>(count);
}

}  // namespace

SolveReport enumerate_exact(const Instance& instance, Strategy strategy, long long cap,
                            SshapeVariant variant) {
  if (instance.num_orders() % instance.capacity != 0) {
    throw ValidationError("enumerate_exact requires a strict instance");
  }
  const auto start = Clock::now();
  const int n = instance.num_orders();
  const int c = instance.capacity;
  const long long total = count_partitions_capped(n, c, cap);
  if (total < 0) {
    throw ValidationError("partition count exceeds cap " + std::to_string(cap));
  }

  Partition current;
  current.batch_of.assign(static_cast<std::size_t>(n), -1);
  SolveReport report;
  long long best_scaled = std::numeric_limits<long long>::max();

  std::vector<int> free_orders;
  // recursive anchor scheme: the smallest unassigned order opens the next
  // block, companions are chosen in ascending order, so every unordered
  // partition appears exactly once
  std::function<void(int)> recurse = [&](int batch) {
    int anchor = -1;
    for (int i = 0; i < n; ++i) {
      if (current.batch_of[static_cast<std::size_t>(i)] == -1) {
        anchor = i;
        break;
      }
    }
    if (anchor == -1) {
      ++report.nodes_explored;
      ObjectiveValue value = combined_cost(instance, current, strategy, variant);
      long long scaled = scaled_cost(value, instance.tau);
      if (scaled < best_scaled) {
        best_scaled = scaled;
        report.best_objective = value.combined;
        report.best_partition = current;
      }
      return;
    }
    current.batch_of[static_cast<std::size_t>(anchor)] = batch;
    std::vector<int> pool;
    for (int i = anchor + 1; i < n; ++i) {
      if (current.batch_of[static_cast<std::size_t>(i)] == -1) pool.push_back(i);
    }
    std::vector<int> combo(static_cast<std::size_t>(c - 1));
    std::function<void(int, int)> choose = [&](int start_at, int chosen) {
      if (chosen == c - 1) {
        for (int i : combo) current.batch_of[static_cast<std::size_t>(i)] = batch;
        recurse(batch + 1);
        for (int i : combo) current.batch_of[static_cast<std::size_t>(i)] = -1;
        return;
      }
      for (int p = start_at; p <= static_cast<int>(pool.size()) - (c - 1 - chosen); ++p) {
        combo[static_cast<std::size_t>(chosen)] = pool[static_cast<std::size_t>(p)];
        choose(p + 1, chosen + 1);
      }
    };
    if (c == 1) {
      recurse(batch + 1);
    } else {
      choose(0, 0);
    }
    current.batch_of[static_cast<std::size_t>(anchor)] = -1;
  };
  recurse(0);

  report.proven_optimal = true;
  report.bound = report.best_objective;
  report.elapsed_seconds = seconds_since(start);
  return report;
}

Partition decode_pattern_solution(const Instance& instance, const std::vector<Pattern>& patterns,
                                  const std::vector<std::vector<int>>& x) {
  if (x.size() != patterns.size()) {
    throw std::invalid_argument("x has " + std::to_string(x.size()) + " rows for " +
                                std::to_string(patterns.size()) + " patterns");
  }
  const int batches = instance.num_batches();
  Partition p;
  p.batch_of.assign(instance.orders.size(), -1);
  std::vector<int> batch_load(static_cast<std::size_t>(batches), 0);
  for (std::size_t t = 0; t < patterns.size(); ++t) {
    const Pattern& pattern = patterns[t];
    long long assigned = 0;
    for (int j = 0; j < batches; ++j) assigned += x[t][static_cast<std::size_t>(j)];
    if (assigned != static_cast<long long>(pattern.member_orders.size())) {
      throw std::invalid_argument("pattern " + std::to_string(pattern.id) + " assigns " +
                                  std::to_string(assigned) + " of " +
                                  std::to_string(pattern.member_orders.size()) + " orders");
    }
    std::size_t next_member = 0;
    for (int j = 0; j < batches; ++j) {
      for (int take = 0; take < x[t][static_cast<std::size_t>(j)]; ++take) {
        int order_id = pattern.member_orders[next_member++];
        p.batch_of[static_cast<std::size_t>(instance.order_index.at(order_id))] = j;
        ++batch_load[static_cast<std::size_t>(j)];
      }
    }
  }
  for (int j = 0; j < batches; ++j) {
    if (batch_load[static_cast<std::size_t>(j)] != instance.capacity) {
      throw std::invalid_argument("batch " + std::to_string(j + 1) + " decodes to " +
                                  std::to_string(batch_load[static_cast<std::size_t>(j)]) +
                                  " orders");
    }
  }
  return p;
}

std::vector<std::vector<int>> pattern_counts(const Instance& instance,
                                             const std::vector<Pattern>& patterns,
                                             const Partition& partition) {
  std::vector<std::vector<int>> x(patterns.size(),
                                  std::vector<int>(static_cast<std::size_t>(instance.num_batches()), 0));
  for (std::size_t t = 0; t < patterns.size(); ++t) {
    for (int order_id : patterns[t].member_orders) {
      int oi = instance.order_index.at(order_id);
      ++x[t][static_cast<std::size_t>(partition.batch_of[static_cast<std::size_t>(oi)])];
    }
  }
  return x;
}

namespace {

std::string format_double(double v) {
  char buffer[32];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

}  // namespace

void write_report(const SolveReport& report, std::ostream& out) {
  out << "best_objective=" << format_double(report.best_objective) << '\n'
      << "bound=" << format_double(report.bound) << '\n'
      << "proven_optimal=" << (report.proven_optimal ? "true" : "false") << '\n'
      << "nodes_explored=" << report.nodes_explored << '\n'
      << "elapsed_seconds=" << format_double(report.elapsed_seconds) << '\n';
}

}  // namespace batchopt
