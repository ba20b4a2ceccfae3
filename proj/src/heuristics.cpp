#include "batchopt/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

#include "batchopt/rng.hpp"

namespace batchopt {

namespace {

using Clock = std::chrono::steady_clock;

// size of A \ B for sorted aisle vectors
int difference_size(const std::vector<int>& a, const std::vector<int>& b) {
  int count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size()) {
    if (j == b.size() || a[i] < b[j]) {
      ++count;
      ++i;
    } else if (a[i] == b[j]) {
      ++i;
      ++j;
    } else {
      ++j;
    }
  }
  return count;
}

}  // namespace

PairList generate_valuable_pairs(const Instance& instance, const VpgConfig& config) {
  const auto profiles = build_profiles(instance);
  std::vector<int> by_id(static_cast<std::size_t>(instance.num_orders()));
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(), [&](int a, int b) {
    return instance.orders[static_cast<std::size_t>(a)].id <
           instance.orders[static_cast<std::size_t>(b)].id;
  });

  std::vector<std::vector<int>> aisles(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) aisles[i] = profiles[i].visited_aisles();

  PairList pairs;
  for (std::size_t p = 0; p + 1 < by_id.size(); ++p) {
    const int op = by_id[p];
    if (static_cast<int>(instance.orders[static_cast<std::size_t>(op)].items.size()) <=
        config.m) {
      continue;
    }
    for (std::size_t q = p + 1; q < by_id.size(); ++q) {
      const int oq = by_id[q];
      if (static_cast<int>(instance.orders[static_cast<std::size_t>(oq)].items.size()) <=
          config.m) {
        continue;
      }
      if (difference_size(aisles[static_cast<std::size_t>(op)],
                          aisles[static_cast<std::size_t>(oq)]) > config.k) {
        continue;
      }
      if (difference_size(aisles[static_cast<std::size_t>(oq)],
                          aisles[static_cast<std::size_t>(op)]) > config.k) {
        continue;
      }
      pairs.emplace_back(instance.orders[static_cast<std::size_t>(op)].id,
                         instance.orders[static_cast<std::size_t>(oq)].id);
    }
  }
  return pairs;
}

VpgResult vpg_improve(const Instance& instance, const Partition& partition,
                      const PairList& pairs, const VpgConfig& config) {
  VpgResult result;
  result.partition = partition;
  for (const auto& [id_a, id_b] : pairs) {
    const int a = instance.order_index.at(id_a);
    const int b = instance.order_index.at(id_b);
    int& batch_a = result.partition.batch_of[static_cast<std::size_t>(a)];
    int& batch_b = result.partition.batch_of[static_cast<std::size_t>(b)];
    if (batch_a == batch_b) continue;
    ObjectiveDelta delta = delta_objective_swap(instance, result.partition, a, b,
                                                config.strategy, config.variant);
    if (strictly_improves(delta, instance.tau)) {
      std::swap(batch_a, batch_b);
      ++result.swaps_applied;
      result.log.push_back({id_a, id_b, delta});
    }
  }
  return result;
}

VpgResult vpg_improve_fixpoint(const Instance& instance, const Partition& partition,
                               const PairList& pairs, const VpgConfig& config, int max_passes) {
  VpgResult total;
  total.partition = partition;
  for (int pass = 0; pass < max_passes; ++pass) {
    VpgResult step = vpg_improve(instance, total.partition, pairs, config);
    total.partition = std::move(step.partition);
    total.swaps_applied += step.swaps_applied;
    total.log.insert(total.log.end(), step.log.begin(), step.log.end());
    if (step.swaps_applied == 0) break;
  }
  return total;
}

Partition fcfs(const Instance& instance) {
  if (instance.num_orders() % instance.capacity != 0) {
    throw ValidationError("fcfs requires a strict instance");
  }
  Partition p;
  p.batch_of.resize(static_cast<std::size_t>(instance.num_orders()));
  for (int i = 0; i < instance.num_orders(); ++i) {
    p.batch_of[static_cast<std::size_t>(i)] = i / instance.capacity;
  }
  return p;
}

Partition seed_heuristic(const Instance& instance, Strategy) {
  if (instance.num_orders() % instance.capacity != 0) {
    throw ValidationError("seed heuristic requires a strict instance");
  }
  const auto profiles = build_profiles(instance);
  const int n = instance.num_orders();
  std::vector<char> assigned(static_cast<std::size_t>(n), 0);
  Partition p;
  p.batch_of.assign(static_cast<std::size_t>(n), -1);

  auto order_id = [&](int oi) { return instance.orders[static_cast<std::size_t>(oi)].id; };

  for (int j = 0; j < instance.num_batches(); ++j) {
    // seed rule: unassigned order visiting the most aisles
    int seed = -1;
    for (int oi = 0; oi < n; ++oi) {
      if (assigned[static_cast<std::size_t>(oi)]) continue;
      if (seed == -1 ||
          profiles[static_cast<std::size_t>(oi)].num_visited() >
              profiles[static_cast<std::size_t>(seed)].num_visited() ||
          (profiles[static_cast<std::size_t>(oi)].num_visited() ==
               profiles[static_cast<std::size_t>(seed)].num_visited() &&
           order_id(oi) < order_id(seed))) {
        seed = oi;
      }
    }
    assigned[static_cast<std::size_t>(seed)] = 1;
    p.batch_of[static_cast<std::size_t>(seed)] = j;
    std::vector<char> batch_aisle(static_cast<std::size_t>(instance.layout.num_aisles() + 1), 0);
    for (int b : profiles[static_cast<std::size_t>(seed)].visited_aisles()) {
      batch_aisle[static_cast<std::size_t>(b)] = 1;
    }

    // addition rule: smallest added aisle length
    for (int member = 1; member < instance.capacity; ++member) {
      int pick = -1;
      long long pick_growth = 0;
      for (int oi = 0; oi < n; ++oi) {
        if (assigned[static_cast<std::size_t>(oi)]) continue;
        long long growth = 0;
        for (int b : profiles[static_cast<std::size_t>(oi)].visited_aisles()) {
          if (!batch_aisle[static_cast<std::size_t>(b)]) growth += instance.layout.length(b);
        }
        if (pick == -1 || growth < pick_growth ||
            (growth == pick_growth && order_id(oi) < order_id(pick))) {
          pick = oi;
          pick_growth = growth;
        }
      }
      assigned[static_cast<std::size_t>(pick)] = 1;
      p.batch_of[static_cast<std::size_t>(pick)] = j;
      for (int b : profiles[static_cast<std::size_t>(pick)].visited_aisles()) {
        batch_aisle[static_cast<std::size_t>(b)] = 1;
      }
    }
  }
  return p;
}

namespace {

double batch_cost(const Instance& instance, std::span<const int> members, Strategy strategy,
                  SshapeVariant variant) {
  BatchEvaluation eval = evaluate_members(instance, members, 0);
  const double tau = instance.tau.value();
  return tau * static_cast<double>(eval.unique_items) +
         (1.0 - tau) * static_cast<double>(batch_travel(instance, eval, strategy, variant));
}

// Groups linearized in input order of their first member, then chunked
// into exact batches of C.
Partition chunk_groups(const Instance& instance, const std::vector<std::vector<int>>& groups) {
  std::vector<std::vector<int>> ordered = groups;
  for (auto& g : ordered) std::sort(g.begin(), g.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  Partition p;
  p.batch_of.assign(instance.orders.size(), -1);
  int position = 0;
  for (const auto& g : ordered) {
    for (int oi : g) {
      p.batch_of[static_cast<std::size_t>(oi)] = position / instance.capacity;
      ++position;
    }
  }
  return p;
}

}  // namespace

Partition cw1(const Instance& instance, Strategy strategy, SshapeVariant variant) {
  if (instance.num_orders() % instance.capacity != 0) {
    throw ValidationError("cw1 requires a strict instance");
  }
  const int n = instance.num_orders();
  std::vector<double> singleton(static_cast<std::size_t>(n));
  for (int oi = 0; oi < n; ++oi) {
    singleton[static_cast<std::size_t>(oi)] =
        batch_cost(instance, std::vector<int>{oi}, strategy, variant);
  }

  struct Saving {
    double value;
    int a, b;  // order positions
  };
  std::vector<Saving> savings;
  savings.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      double merged = batch_cost(instance, std::vector<int>{a, b}, strategy, variant);
      savings.push_back({singleton[static_cast<std::size_t>(a)] +
                             singleton[static_cast<std::size_t>(b)] - merged,
                         a, b});
    }
  }
  auto id_of = [&](int oi) { return instance.orders[static_cast<std::size_t>(oi)].id; };
  std::sort(savings.begin(), savings.end(), [&](const Saving& x, const Saving& y) {
    if (x.value != y.value) return x.value > y.value;
    if (id_of(x.a) != id_of(y.a)) return id_of(x.a) < id_of(y.a);
    return id_of(x.b) < id_of(y.b);
  });

  std::vector<int> group_of(static_cast<std::size_t>(n));
  std::iota(group_of.begin(), group_of.end(), 0);
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(n));
  for (int oi = 0; oi < n; ++oi) groups[static_cast<std::size_t>(oi)] = {oi};

  for (const Saving& s : savings) {
    if (s.value <= 0.0) break;
    int ga = group_of[static_cast<std::size_t>(s.a)];
    int gb = group_of[static_cast<std::size_t>(s.b)];
    if (ga == gb) continue;
    if (static_cast<int>(groups[static_cast<std::size_t>(ga)].size() +
                         groups[static_cast<std::size_t>(gb)].size()) > instance.capacity) {
      continue;
    }
    for (int oi : groups[static_cast<std::size_t>(gb)]) {
      group_of[static_cast<std::size_t>(oi)] = ga;
      groups[static_cast<std::size_t>(ga)].push_back(oi);
    }
    groups[static_cast<std::size_t>(gb)].clear();
  }
  groups.erase(std::remove_if(groups.begin(), groups.end(),
                              [](const auto& g) { return g.empty(); }),
               groups.end());
  return chunk_groups(instance, groups);
}

Partition cw2(const Instance& instance, Strategy strategy, SshapeVariant variant) {
  if (instance.num_orders() % instance.capacity != 0) {
    throw ValidationError("cw2 requires a strict instance");
  }
  const int n = instance.num_orders();
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(n));
  std::vector<double> cost(static_cast<std::size_t>(n));
  for (int oi = 0; oi < n; ++oi) {
    groups[static_cast<std::size_t>(oi)] = {oi};
    cost[static_cast<std::size_t>(oi)] =
        batch_cost(instance, std::vector<int>{oi}, strategy, variant);
  }
  auto smallest_id = [&](const std::vector<int>& g) {
    int best = std::numeric_limits<int>::max();
    for (int oi : g) best = std::min(best, instance.orders[static_cast<std::size_t>(oi)].id);
    return best;
  };

  // pairwise savings between live groups, refreshed for merged rows only:
  // merging two groups does not change the saving of any untouched pair
  std::vector<std::vector<double>> saving(groups.size(), std::vector<double>(groups.size(), 0.0));
  std::vector<char> alive(groups.size(), 1);
  auto recompute_row = [&](std::size_t g) {
    for (std::size_t h = 0; h < groups.size(); ++h) {
      if (h == g || !alive[h]) continue;
      if (static_cast<int>(groups[g].size() + groups[h].size()) > instance.capacity) {
        saving[g][h] = saving[h][g] = -std::numeric_limits<double>::infinity();
        continue;
      }
      std::vector<int> merged = groups[g];
      merged.insert(merged.end(), groups[h].begin(), groups[h].end());
      saving[g][h] = saving[h][g] =
          cost[g] + cost[h] - batch_cost(instance, merged, strategy, variant);
    }
  };
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t h = g + 1; h < groups.size(); ++h) {
      if (static_cast<int>(groups[g].size() + groups[h].size()) > instance.capacity) {
        saving[g][h] = saving[h][g] = -std::numeric_limits<double>::infinity();
        continue;
      }
      std::vector<int> merged = groups[g];
      merged.insert(merged.end(), groups[h].begin(), groups[h].end());
      saving[g][h] = saving[h][g] =
          cost[g] + cost[h] - batch_cost(instance, merged, strategy, variant);
    }
  }

  for (;;) {
    double best = 0.0;
    std::size_t best_g = 0, best_h = 0;
    bool found = false;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (!alive[g]) continue;
      for (std::size_t h = g + 1; h < groups.size(); ++h) {
        if (!alive[h]) continue;
        double s = saving[g][h];
        if (s <= 0.0) continue;
        bool better = !found || s > best;
        if (found && s == best) {
          int sg = smallest_id(groups[g]), sh = smallest_id(groups[h]);
          int bg = smallest_id(groups[best_g]), bh = smallest_id(groups[best_h]);
          better = sg < bg || (sg == bg && sh < bh);
        }
        if (better) {
          best = s;
          best_g = g;
          best_h = h;
          found = true;
        }
      }
    }
    if (!found) break;
    groups[best_g].insert(groups[best_g].end(), groups[best_h].begin(), groups[best_h].end());
    cost[best_g] = batch_cost(instance, groups[best_g], strategy, variant);
    alive[best_h] = 0;
    groups[best_h].clear();
    recompute_row(best_g);
  }

  std::vector<std::vector<int>> live;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (alive[g]) live.push_back(groups[g]);
  }
  return chunk_groups(instance, live);
}

// ---------------------------------------------------------------------------
// iterated local search

namespace {

struct LsState {
  std::vector<std::vector<int>> members;
  std::vector<long long> packing;  // per batch
  std::vector<long long> travel;
  long long total_scaled = 0;

  void load(const Instance& inst, const Partition& p, Strategy strategy, SshapeVariant variant) {
    members = batch_members(inst, p);
    packing.assign(members.size(), 0);
    travel.assign(members.size(), 0);
    total_scaled = 0;
    for (std::size_t j = 0; j < members.size(); ++j) {
      BatchEvaluation eval = evaluate_members(inst, members[j], static_cast<int>(j));
      packing[j] = eval.unique_items;
      travel[j] = batch_travel(inst, eval, strategy, variant);
      total_scaled += scaled_cost(packing[j], travel[j], inst.tau);
    }
  }

  Partition to_partition(const Instance& inst) const {
    Partition p;
    p.batch_of.assign(inst.orders.size(), -1);
    for (std::size_t j = 0; j < members.size(); ++j) {
      for (int oi : members[j]) p.batch_of[static_cast<std::size_t>(oi)] = static_cast<int>(j);
    }
    return p;
  }
};

struct SwapEval {
  long long scaled_delta;
  long long packing_a, travel_a, packing_b, travel_b;  // post-swap batch costs
};

SwapEval evaluate_swap(const Instance& inst, const LsState& state, std::size_t ja, int a,
                       std::size_t jb, int b, Strategy strategy, SshapeVariant variant) {
  std::vector<int> next_a = state.members[ja];
  std::replace(next_a.begin(), next_a.end(), a, b);
  std::vector<int> next_b = state.members[jb];
  std::replace(next_b.begin(), next_b.end(), b, a);
  BatchEvaluation ea = evaluate_members(inst, next_a, static_cast<int>(ja));
  BatchEvaluation eb = evaluate_members(inst, next_b, static_cast<int>(jb));
  SwapEval out;
  out.packing_a = ea.unique_items;
  out.travel_a = batch_travel(inst, ea, strategy, variant);
  out.packing_b = eb.unique_items;
  out.travel_b = batch_travel(inst, eb, strategy, variant);
  out.scaled_delta = scaled_cost(out.packing_a, out.travel_a, inst.tau) +
                     scaled_cost(out.packing_b, out.travel_b, inst.tau) -
                     scaled_cost(state.packing[ja], state.travel[ja], inst.tau) -
                     scaled_cost(state.packing[jb], state.travel[jb], inst.tau);
  return out;
}

void apply_swap(LsState& state, const Instance& inst, std::size_t ja, int a, std::size_t jb,
                int b, const SwapEval& eval) {
  std::replace(state.members[ja].begin(), state.members[ja].end(), a, b);
  std::replace(state.members[jb].begin(), state.members[jb].end(), b, a);
  state.total_scaled += eval.scaled_delta;
  state.packing[ja] = eval.packing_a;
  state.travel[ja] = eval.travel_a;
  state.packing[jb] = eval.packing_b;
  state.travel[jb] = eval.travel_b;
  std::sort(state.members[ja].begin(), state.members[ja].end());
  std::sort(state.members[jb].begin(), state.members[jb].end());
  (void)inst;
}

// Best-improvement descent until no cross-batch swap helps or the
// deadline passes.
void local_search(const Instance& inst, LsState& state, Strategy strategy, SshapeVariant variant,
                  Clock::time_point deadline, bool use_clock) {
  const int n = inst.num_orders();
  std::vector<std::size_t> batch_of(static_cast<std::size_t>(n));
  for (;;) {
    for (std::size_t j = 0; j < state.members.size(); ++j) {
      for (int oi : state.members[j]) batch_of[static_cast<std::size_t>(oi)] = j;
    }
    long long best_delta = 0;
    int best_a = -1, best_b = -1;
    SwapEval best_eval{};
    int probes = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (batch_of[static_cast<std::size_t>(a)] == batch_of[static_cast<std::size_t>(b)]) {
          continue;
        }
        if (use_clock && (++probes & 255) == 0 && Clock::now() > deadline) return;
        SwapEval eval = evaluate_swap(inst, state, batch_of[static_cast<std::size_t>(a)], a,
                                      batch_of[static_cast<std::size_t>(b)], b, strategy,
                                      variant);
        if (eval.scaled_delta < best_delta) {
          best_delta = eval.scaled_delta;
          best_a = a;
          best_b = b;
          best_eval = eval;
        }
      }
    }
    if (best_a < 0) return;
    apply_swap(state, inst, batch_of[static_cast<std::size_t>(best_a)], best_a,
               batch_of[static_cast<std::size_t>(best_b)], best_b, best_eval);
  }
}

}  // namespace

Partition ils(const Instance& instance, Strategy strategy, const IlsConfig& config) {
  const SshapeVariant variant = SshapeVariant::Parity;
  const bool use_clock = config.iteration_limit < 0;
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(config.time_budget_seconds));

  LsState current;
  current.load(instance, fcfs(instance), strategy, variant);
  local_search(instance, current, strategy, variant, deadline, use_clock);

  LsState best = current;
  auto gen = make_engine(config.seed);
  const int n = instance.num_orders();
  const int swaps_per_kick = (instance.capacity + 1) / 2;

  long long rounds = 0;
  while ((use_clock && Clock::now() < deadline) ||
         (!use_clock && rounds < config.iteration_limit)) {
    ++rounds;
    LsState trial = current;
    std::vector<std::size_t> batch_of(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < trial.members.size(); ++j) {
      for (int oi : trial.members[j]) batch_of[static_cast<std::size_t>(oi)] = j;
    }
    std::vector<char> touched(static_cast<std::size_t>(n), 0);
    for (int kick = 0; kick < swaps_per_kick; ++kick) {
      // disjoint random cross-batch pair
      int a = -1, b = -1;
      for (int tries = 0; tries < 64; ++tries) {
        int ca = static_cast<int>(bounded(gen, static_cast<std::uint64_t>(n)));
        int cb = static_cast<int>(bounded(gen, static_cast<std::uint64_t>(n)));
        if (ca == cb || touched[static_cast<std::size_t>(ca)] ||
            touched[static_cast<std::size_t>(cb)]) {
          continue;
        }
        if (batch_of[static_cast<std::size_t>(ca)] == batch_of[static_cast<std::size_t>(cb)]) {
          continue;
        }
        a = ca;
        b = cb;
        break;
      }
      if (a < 0) break;
      touched[static_cast<std::size_t>(a)] = 1;
      touched[static_cast<std::size_t>(b)] = 1;
      SwapEval eval = evaluate_swap(instance, trial, batch_of[static_cast<std::size_t>(a)], a,
                                    batch_of[static_cast<std::size_t>(b)], b, strategy, variant);
      apply_swap(trial, instance, batch_of[static_cast<std::size_t>(a)], a,
                 batch_of[static_cast<std::size_t>(b)], b, eval);
      std::swap(batch_of[static_cast<std::size_t>(a)], batch_of[static_cast<std::size_t>(b)]);
    }
    local_search(instance, trial, strategy, variant, deadline, use_clock);
    if (trial.total_scaled <= current.total_scaled) {
      current = std::move(trial);
      if (current.total_scaled < best.total_scaled) best = current;
    }
  }
  return best.to_partition(instance);
}

}  // namespace batchopt
