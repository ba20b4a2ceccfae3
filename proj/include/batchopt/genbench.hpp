#ifndef BATCHOPT_GENBENCH_HPP_
#define BATCHOPT_GENBENCH_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "batchopt/core.hpp"
#include "batchopt/eval.hpp"

namespace batchopt {

struct GeneratorConfig {
  int n_orders = 800;
  int capacity = 16;
  double tau = 0.4;
  std::vector<int> aisle_lengths;  // empty: default warehouse layout
  double mean_items_per_order = 2.8;
  double unique_ratio = 1.5;  // item slots per unique item (3:2)
  int catalog_size = 0;       // 0: scaled with the order count
  std::uint64_t seed = 1;
  std::string name;
};

// Aisle lengths 36 down to 16: descending, spanning 1..36 truncated so
// the location count lands nearest the 541 of the reference warehouse.
std::vector<int> default_aisle_lengths();

Instance generate_instance(const GeneratorConfig& config);

Strategy parse_strategy(const std::string& text);

struct BenchCell {
  std::string algo;
  int n = 100;
  int c = 10;
  Strategy strategy = Strategy::Sshape;
  int seeds = 20;
  double budget = 0.0;  // seconds; 0 = per-algorithm default
};

struct SuiteConfig {
  std::vector<BenchCell> cells;
  std::string reference = "ap2vpg";
  int workers = 1;  // BATCHOPT_WORKERS overrides
  std::uint64_t base_seed = 1;
  double tau = 0.4;
};

SuiteConfig read_suite(std::istream& in);
SuiteConfig read_suite(const std::string& path);

struct BenchRow {
  std::string algo;
  int n = 0;
  int c = 0;
  Strategy strategy = Strategy::Sshape;
  std::string seed_label;  // seed index or "mean"
  double objective = 0.0;
  double cpu_s = 0.0;
  double ratio = 0.0;  // objective / reference objective, same cell+seed
  bool failed = false;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

std::vector<std::string> known_algorithms();

// One registry dispatch: runs `algo` on the instance and returns its
// partition. Budget <= 0 picks the per-algorithm default.
Partition run_algorithm(const std::string& algo, const Instance& instance, Strategy strategy,
                        double budget, std::uint64_t seed);

BenchReport run_benchmark(const SuiteConfig& suite);
void write_report_csv(const BenchReport& report, std::ostream& out);

}  // namespace batchopt

#endif  // BATCHOPT_GENBENCH_HPP_
