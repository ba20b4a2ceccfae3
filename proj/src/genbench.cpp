#include "batchopt/genbench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "batchopt/bnb.hpp"
#include "batchopt/heuristics.hpp"
#include "batchopt/rng.hpp"

namespace batchopt {

std::vector<int> default_aisle_lengths() {
  std::vector<int> lengths;
  for (int len = 36; len >= 16; --len) lengths.push_back(len);
  return lengths;
}

Strategy parse_strategy(const std::string& text) {
  if (text == "return") return Strategy::Return;
  if (text == "sshape") return Strategy::Sshape;
  throw ParseError("unknown strategy '" + text + "' (want return|sshape)");
}

namespace {

// slot index -> (aisle, depth) over the cumulative aisle lengths
std::pair<int, int> locate_slot(const Layout& layout, long long slot) {
  for (int b = 1; b <= layout.num_aisles(); ++b) {
    if (slot < layout.length(b)) return {b, static_cast<int>(slot) + 1};
    slot -= layout.length(b);
  }
  throw std::logic_error("slot index out of range");
}

}  // namespace

Instance generate_instance(const GeneratorConfig& config) {
  if (config.n_orders < 1) throw ValidationError("generator needs at least one order");
  if (config.capacity < 1 || config.n_orders % config.capacity != 0) {
    throw ValidationError("order count " + std::to_string(config.n_orders) +
                          " not divisible by capacity " + std::to_string(config.capacity));
  }
  if (config.mean_items_per_order < 1.0) {
    throw ValidationError("mean items per order must be at least 1");
  }
  if (config.unique_ratio < 1.0) throw ValidationError("unique ratio must be at least 1");

  Layout layout;
  layout.aisle_lengths =
      config.aisle_lengths.empty() ? default_aisle_lengths() : config.aisle_lengths;
  layout.width = 48;

  auto gen = make_engine(config.seed);

  // per-order slot counts: shifted Poisson with the target mean
  std::vector<int> order_sizes(static_cast<std::size_t>(config.n_orders));
  long long total_slots = 0;
  int max_size = 0;
  for (int& size : order_sizes) {
    size = 1 + poisson(gen, config.mean_items_per_order - 1.0);
    total_slots += size;
    max_size = std::max(max_size, size);
  }

  const long long unique_count =
      std::llround(static_cast<double>(total_slots) / config.unique_ratio);
  int catalog = config.catalog_size;
  if (catalog == 0) {
    catalog = static_cast<int>(std::max<long long>(
        unique_count, std::llround(6413.0 * config.n_orders / 800.0)));
  }
  if (unique_count > catalog) {
    throw ValidationError("catalog of " + std::to_string(catalog) + " items cannot host " +
                          std::to_string(unique_count) + " unique picks");
  }
  if (max_size > unique_count) {
    throw ValidationError("an order of " + std::to_string(max_size) +
                          " items exceeds the unique item pool");
  }

  // catalog with uniformly random storage slots (shared slots allowed)
  std::vector<Item> items;
  items.reserve(static_cast<std::size_t>(catalog));
  const long long locations = layout.total_locations();
  for (int k = 0; k < catalog; ++k) {
    auto [aisle, depth] = locate_slot(layout, static_cast<long long>(bounded(
                                                  gen, static_cast<std::uint64_t>(locations))));
    items.push_back({k + 1, aisle, depth});
  }

  // draw the unique items: partial Fisher-Yates over catalog ids
  std::vector<int> ids(static_cast<std::size_t>(catalog));
  std::iota(ids.begin(), ids.end(), 1);
  for (long long i = 0; i < unique_count; ++i) {
    std::size_t j = static_cast<std::size_t>(i) +
                    static_cast<std::size_t>(bounded(
                        gen, static_cast<std::uint64_t>(catalog - i)));
    std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
  }
  std::vector<int> drawn(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(unique_count));

  // pool: every drawn item once, the remaining slots are repeats
  std::vector<int> pool = drawn;
  pool.reserve(static_cast<std::size_t>(total_slots));
  for (long long extra = total_slots - unique_count; extra > 0; --extra) {
    pool.push_back(drawn[static_cast<std::size_t>(bounded(
        gen, static_cast<std::uint64_t>(drawn.size())))]);
  }
  shuffle_fisher_yates(pool, gen);

  // deal the pool into orders keeping items unique within each order
  std::vector<std::vector<int>> order_items(static_cast<std::size_t>(config.n_orders));
  std::vector<char> used(pool.size(), 0);
  std::size_t cursor = 0;
  for (int oi = 0; oi < config.n_orders; ++oi) {
    auto& picks = order_items[static_cast<std::size_t>(oi)];
    for (int s = 0; s < order_sizes[static_cast<std::size_t>(oi)]; ++s) {
      while (cursor < pool.size() && used[cursor]) ++cursor;
      std::size_t probe = cursor;
      bool placed = false;
      for (; probe < pool.size(); ++probe) {
        if (used[probe]) continue;
        if (std::find(picks.begin(), picks.end(), pool[probe]) == picks.end()) {
          picks.push_back(pool[probe]);
          used[probe] = 1;
          placed = true;
          break;
        }
      }
      if (placed) continue;
      // every leftover entry conflicts; swap one against an earlier order
      bool repaired = false;
      for (std::size_t p = cursor; p < pool.size() && !repaired; ++p) {
        if (used[p]) continue;
        const int conflict = pool[p];
        for (int prev = 0; prev < oi && !repaired; ++prev) {
          auto& other = order_items[static_cast<std::size_t>(prev)];
          if (std::find(other.begin(), other.end(), conflict) != other.end()) continue;
          for (int& theirs : other) {
            if (std::find(picks.begin(), picks.end(), theirs) == picks.end()) {
              picks.push_back(theirs);
              theirs = conflict;
              used[p] = 1;
              repaired = true;
              break;
            }
          }
        }
      }
      if (!repaired) {
        throw ValidationError("cannot deal items into orders without duplicates; "
                              "unique pool too small for the order sizes");
      }
    }
  }

  std::vector<Order> orders;
  orders.reserve(static_cast<std::size_t>(config.n_orders));
  for (int oi = 0; oi < config.n_orders; ++oi) {
    orders.push_back({oi + 1, order_items[static_cast<std::size_t>(oi)]});
  }

  std::string name = config.name;
  if (name.empty()) {
    name = "gen_n" + std::to_string(config.n_orders) + "_c" + std::to_string(config.capacity) +
           "_s" + std::to_string(config.seed);
  }
  return make_instance(std::move(layout), std::move(items), std::move(orders), config.capacity,
                       Tau::from_double(config.tau), std::move(name));
}

// ---------------------------------------------------------------------------
// benchmark harness

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string format_number(double v) {
  char buffer[32];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

}  // namespace

std::vector<std::string> known_algorithms() {
  return {"fcfs", "seed", "cw1", "cw2", "ils", "ap1", "ap2", "ap1vpg", "ap2vpg", "exact"};
}

Partition run_algorithm(const std::string& algo, const Instance& instance, Strategy strategy,
                        double budget, std::uint64_t seed) {
  if (algo == "fcfs") return fcfs(instance);
  if (algo == "seed") return seed_heuristic(instance, strategy);
  if (algo == "cw1") return cw1(instance, strategy);
  if (algo == "cw2") return cw2(instance, strategy);
  if (algo == "ils") {
    IlsConfig config;
    config.time_budget_seconds = budget > 0 ? budget : 10.0;
    config.seed = seed;
    return ils(instance, strategy, config);
  }
  if (algo == "ap1" || algo == "ap2" || algo == "ap1vpg" || algo == "ap2vpg") {
    const Weighting weighting =
        algo == "ap1" || algo == "ap1vpg" ? Weighting::Ap1 : Weighting::Ap2;
    BnbConfig config;
    config.time_limit_seconds = budget > 0 ? budget : 100.0;
    SolveReport report = solve_approx(instance, weighting, config);
    if (algo == "ap1" || algo == "ap2") return report.best_partition;
    VpgConfig vpg;
    vpg.strategy = strategy;
    auto pairs = generate_valuable_pairs(instance, vpg);
    return vpg_improve_fixpoint(instance, report.best_partition, pairs, vpg).partition;
  }
  if (algo == "exact") {
    return enumerate_exact(instance, strategy).best_partition;
  }
  throw ValidationError("unknown algorithm '" + algo + "'");
}

SuiteConfig read_suite(std::istream& in) {
  SuiteConfig suite;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag != "cell") {
      throw ParseError("line " + std::to_string(line_number) + ": expected 'cell', got '" +
                       tag + "'");
    }
    BenchCell cell;
    bool have_algo = false;
    std::string kv;
    while (fields >> kv) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        throw ParseError("line " + std::to_string(line_number) + ": malformed field '" + kv +
                         "'");
      }
      const std::string key = kv.substr(0, eq);
      const std::string value = kv.substr(eq + 1);
      try {
        if (key == "algo") {
          cell.algo = value;
          have_algo = true;
        } else if (key == "n") {
          cell.n = std::stoi(value);
        } else if (key == "c") {
          cell.c = std::stoi(value);
        } else if (key == "strategy") {
          cell.strategy = parse_strategy(value);
        } else if (key == "seeds") {
          cell.seeds = std::stoi(value);
        } else if (key == "budget") {
          cell.budget = std::stod(value);
        } else {
          throw ParseError("line " + std::to_string(line_number) + ": unknown key '" + key +
                           "'");
        }
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_number) + ": malformed value in '" + kv +
                         "'");
      }
    }
    if (!have_algo || cell.n < 1 || cell.c < 1 || cell.seeds < 1) {
      throw ParseError("line " + std::to_string(line_number) + ": incomplete cell");
    }
    suite.cells.push_back(std::move(cell));
  }
  return suite;
}

SuiteConfig read_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open suite file: " + path);
  return read_suite(in);
}

namespace {

struct BenchTask {
  BenchCell cell;
  int seed_index = 0;
};

}  // namespace

BenchReport run_benchmark(const SuiteConfig& suite) {
  int workers = suite.workers;
  if (const char* env = std::getenv("BATCHOPT_WORKERS")) {
    int parsed = std::atoi(env);
    if (parsed >= 1) workers = parsed;
  }
  workers = std::max(1, workers);

  std::vector<BenchTask> tasks;
  for (const BenchCell& cell : suite.cells) {
    for (int s = 0; s < cell.seeds; ++s) tasks.push_back({cell, s});
  }
  std::vector<BenchRow> rows(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t task_index = next.fetch_add(1);
      if (task_index >= tasks.size()) return;
      const BenchTask& task = tasks[task_index];
      BenchRow& row = rows[task_index];
      row.algo = task.cell.algo;
      row.n = task.cell.n;
      row.c = task.cell.c;
      row.strategy = task.cell.strategy;
      row.seed_label = std::to_string(task.seed_index);
      try {
        GeneratorConfig config;
        config.n_orders = task.cell.n;
        config.capacity = task.cell.c;
        config.tau = suite.tau;
        config.seed = derive_seed(
            derive_seed(suite.base_seed,
                        static_cast<std::uint64_t>(task.cell.n) * 1000003ULL +
                            static_cast<std::uint64_t>(task.cell.c)),
            static_cast<std::uint64_t>(task.seed_index));
        Instance instance = generate_instance(config);
        const std::uint64_t algo_seed = derive_seed(config.seed, fnv1a(task.cell.algo));
        const auto started = std::chrono::steady_clock::now();
        Partition p = run_algorithm(task.cell.algo, instance, task.cell.strategy,
                                    task.cell.budget, algo_seed);
        row.cpu_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                        .count();
        validate_partition(instance, p);
        row.objective = combined_cost(instance, p, task.cell.strategy).combined;
      } catch (const std::exception&) {
        row.failed = true;
        row.objective = std::numeric_limits<double>::quiet_NaN();
        row.ratio = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // reference objectives per (n, c, strategy, seed)
  std::map<std::tuple<int, int, int, std::string>, double> reference;
  for (const BenchRow& row : rows) {
    if (row.algo == suite.reference && !row.failed) {
      reference[{row.n, row.c, static_cast<int>(row.strategy), row.seed_label}] = row.objective;
    }
  }
  for (BenchRow& row : rows) {
    auto ref = reference.find({row.n, row.c, static_cast<int>(row.strategy), row.seed_label});
    row.ratio = (!row.failed && ref != reference.end() && ref->second != 0.0)
                    ? row.objective / ref->second
                    : std::numeric_limits<double>::quiet_NaN();
  }

  BenchReport report;
  report.rows = std::move(rows);

  // mean rows per cell, in suite order
  std::vector<BenchRow> means;
  for (const BenchCell& cell : suite.cells) {
    double obj_total = 0, cpu_total = 0;
    int count = 0;
    for (const BenchRow& row : report.rows) {
      if (row.algo == cell.algo && row.n == cell.n && row.c == cell.c &&
          row.strategy == cell.strategy && !row.failed && row.seed_label != "mean") {
        obj_total += row.objective;
        cpu_total += row.cpu_s;
        ++count;
      }
    }
    BenchRow mean;
    mean.algo = cell.algo;
    mean.n = cell.n;
    mean.c = cell.c;
    mean.strategy = cell.strategy;
    mean.seed_label = "mean";
    mean.failed = count == 0;
    mean.objective = count > 0 ? obj_total / count : std::numeric_limits<double>::quiet_NaN();
    mean.cpu_s = count > 0 ? cpu_total / count : 0.0;
    means.push_back(mean);
  }
  // ratio of means against the reference cell's mean
  for (BenchRow& mean : means) {
    mean.ratio = std::numeric_limits<double>::quiet_NaN();
    for (const BenchRow& ref : means) {
      if (ref.algo == suite.reference && ref.n == mean.n && ref.c == mean.c &&
          ref.strategy == mean.strategy && !ref.failed && ref.objective != 0.0) {
        mean.ratio = mean.objective / ref.objective;
      }
    }
  }
  report.rows.insert(report.rows.end(), means.begin(), means.end());
  return report;
}

void write_report_csv(const BenchReport& report, std::ostream& out) {
  out << "algo,n,c,strategy,seed,objective,cpu_s,ratio_vs_ref\n";
  for (const BenchRow& row : report.rows) {
    out << row.algo << ',' << row.n << ',' << row.c << ',' << to_string(row.strategy) << ','
        << row.seed_label << ',' << format_number(row.objective) << ','
        << format_number(row.cpu_s) << ',' << format_number(row.ratio) << '\n';
  }
}

}  // namespace batchopt
