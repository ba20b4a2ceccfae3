#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <sstream>

#include "batchopt/bnb.hpp"
#include "support.hpp"

using namespace batchopt;
using testsup::tiny_instance;

namespace {

// Exhaustive minimum of the pattern model by enumerating every batch-count
// matrix x; independent of the branch-and-bound path.
long long x_enum_optimum(const Instance& inst, Weighting weighting) {
  const auto patterns = extract_patterns(inst);
  const int batches = inst.num_batches();
  std::vector<int> load(static_cast<std::size_t>(batches), 0);
  std::vector<std::vector<int>> x(patterns.size(),
                                  std::vector<int>(static_cast<std::size_t>(batches), 0));
  long long best = std::numeric_limits<long long>::max();

  auto weight_of = [&](int aisle) {
    return weighting == Weighting::Ap1 ? 1LL
                                       : static_cast<long long>(inst.layout.length(aisle));
  };
  auto cost = [&]() {
    long long total = 0;
    for (int j = 0; j < batches; ++j) {
      std::set<int> aisles;
      for (std::size_t t = 0; t < patterns.size(); ++t) {
        if (x[t][static_cast<std::size_t>(j)] > 0) {
          aisles.insert(patterns[t].aisles.begin(), patterns[t].aisles.end());
        }
      }
      for (int b : aisles) total += weight_of(b);
    }
    return total;
  };

  std::function<void(std::size_t)> per_pattern = [&](std::size_t t) {
    if (t == patterns.size()) {
      for (int j = 0; j < batches; ++j) {
        if (load[static_cast<std::size_t>(j)] != inst.capacity) return;
      }
      best = std::min(best, cost());
      return;
    }
    const int quota = static_cast<int>(patterns[t].member_orders.size());
    std::function<void(int, int)> split = [&](int j, int left) {
      if (j == batches - 1) {
        if (load[static_cast<std::size_t>(j)] + left > inst.capacity) return;
        x[t][static_cast<std::size_t>(j)] = left;
        load[static_cast<std::size_t>(j)] += left;
        per_pattern(t + 1);
        load[static_cast<std::size_t>(j)] -= left;
        x[t][static_cast<std::size_t>(j)] = 0;
        return;
      }
      for (int take = 0; take <= left; ++take) {
        if (load[static_cast<std::size_t>(j)] + take > inst.capacity) break;
        x[t][static_cast<std::size_t>(j)] = take;
        load[static_cast<std::size_t>(j)] += take;
        split(j + 1, left - take);
        load[static_cast<std::size_t>(j)] -= take;
        x[t][static_cast<std::size_t>(j)] = 0;
      }
    };
    split(0, quota);
  };
  per_pattern(0);
  return best;
}

}  // namespace

TEST_CASE("enumerate_exact counts unordered partitions") {
  auto four = tiny_instance({5}, {{1, 1, 2}}, {{1, {1}}, {2, {1}}, {3, {1}}, {4, {1}}}, 2);
  auto report = enumerate_exact(four, Strategy::Return);
  CHECK(report.nodes_explored == 3);
  CHECK(report.proven_optimal);

  auto six = tiny_instance({5}, {{1, 1, 2}},
                           {{1, {1}}, {2, {1}}, {3, {1}}, {4, {1}}, {5, {1}}, {6, {1}}}, 2);
  CHECK(enumerate_exact(six, Strategy::Return).nodes_explored == 15);
}

TEST_CASE("enumerate_exact respects the cap") {
  std::vector<std::pair<int, std::vector<int>>> orders;
  for (int i = 1; i <= 16; ++i) orders.push_back({i, {1}});
  auto inst = tiny_instance({5}, {{1, 1, 2}}, orders, 2);
  CHECK_THROWS_WITH_AS(static_cast<void>(enumerate_exact(inst, Strategy::Return, 100)),
                       doctest::Contains("cap"), ValidationError);
}

TEST_CASE("enumerate_exact minimum is a true lower bound on sampled partitions") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = testsup::random_tiny(seed, 6, 2);
    for (Strategy strategy : {Strategy::Return, Strategy::Sshape}) {
      auto report = enumerate_exact(inst, strategy);
      for (std::uint64_t draw = 0; draw < 5; ++draw) {
        Partition p = random_partition(inst, seed * 100 + draw);
        CHECK(report.best_objective <=
              combined_cost(inst, p, strategy).combined + 1e-9);
      }
      CHECK_NOTHROW(validate_partition(inst, report.best_partition));
    }
  }
}

TEST_CASE("solve_approx handles the degenerate one-pattern case") {
  auto inst = tiny_instance({5, 4}, {{1, 1, 2}, {2, 2, 3}},
                            {{1, {1, 2}}, {2, {1, 2}}, {3, {1, 2}}, {4, {1, 2}}}, 2);
  auto report = solve_approx(inst, Weighting::Ap2);
  CHECK(report.proven_optimal);
  CHECK(report.best_objective == doctest::Approx(2 * (5 + 4)));
  CHECK_NOTHROW(validate_partition(inst, report.best_partition));
}

TEST_CASE("solve_approx separates two disjoint patterns") {
  auto inst = tiny_instance({5, 3}, {{1, 1, 2}, {2, 2, 3}},
                            {{1, {1}}, {2, {1}}, {3, {2}}, {4, {2}}}, 2);
  auto ap1 = solve_approx(inst, Weighting::Ap1);
  CHECK(ap1.proven_optimal);
  CHECK(ap1.best_objective == doctest::Approx(2.0));
  auto ap2 = solve_approx(inst, Weighting::Ap2);
  CHECK(ap2.best_objective == doctest::Approx(8.0));
}

TEST_CASE("solve_approx equals exhaustive x enumeration on small instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 20 && seed < 200; ++seed) {
    auto inst = testsup::random_tiny(seed, 6, 2, {6, 5, 3}, 9);
    if (extract_patterns(inst).size() > 6) continue;
    ++checked;
    for (Weighting w : {Weighting::Ap1, Weighting::Ap2}) {
      auto report = solve_approx(inst, w);
      CHECK(report.proven_optimal);
      CHECK(report.best_objective == doctest::Approx(static_cast<double>(x_enum_optimum(inst, w))));
      CHECK(report.best_objective >= report.bound - 1e-9);
      // the decoded partition realizes the surrogate objective
      CHECK(static_cast<double>(surrogate_value(inst, report.best_partition, w)) ==
            doctest::Approx(report.best_objective));
    }
  }
  CHECK(checked == 20);
}

TEST_CASE("solve_approx under a node limit stays feasible and bounded") {
  auto inst = testsup::random_tiny(3, 8, 2, {6, 5, 3}, 10);
  BnbConfig limited;
  limited.node_limit = 5;
  auto report = solve_approx(inst, Weighting::Ap2, limited);
  CHECK_FALSE(report.proven_optimal);
  CHECK(report.nodes_explored <= 5);
  CHECK(report.bound <= report.best_objective + 1e-9);
  CHECK_NOTHROW(validate_partition(inst, report.best_partition));

  // node-limited runs are reproducible
  auto again = solve_approx(inst, Weighting::Ap2, limited);
  CHECK(again.best_objective == report.best_objective);
  CHECK(again.nodes_explored == report.nodes_explored);
  CHECK(again.best_partition == report.best_partition);
}

TEST_CASE("decode round-trips pattern counts") {
  auto inst = testsup::random_tiny(5, 6, 3, {6, 5, 3}, 8);
  const auto patterns = extract_patterns(inst);
  Partition p = random_partition(inst, 99);
  auto x = pattern_counts(inst, patterns, p);
  Partition decoded = decode_pattern_solution(inst, patterns, x);
  CHECK(pattern_counts(inst, patterns, decoded) == x);
  for (Weighting w : {Weighting::Ap1, Weighting::Ap2}) {
    CHECK(surrogate_value(inst, decoded, w) == surrogate_value(inst, p, w));
  }

  SUBCASE("count mismatch is rejected") {
    x[0][0] += 1;
    CHECK_THROWS_AS(static_cast<void>(decode_pattern_solution(inst, patterns, x)),
                    std::invalid_argument);
  }
}

TEST_CASE("single pattern decode is the identity chunking") {
  auto inst = tiny_instance({5}, {{1, 1, 2}}, {{1, {1}}, {2, {1}}, {3, {1}}, {4, {1}}}, 2);
  const auto patterns = extract_patterns(inst);
  REQUIRE(patterns.size() == 1);
  std::vector<std::vector<int>> x{{2, 2}};
  Partition decoded = decode_pattern_solution(inst, patterns, x);
  CHECK(decoded.batch_of == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("report serializes as key=value lines") {
  SolveReport report;
  report.best_objective = 8.0;
  report.bound = 8.0;
  report.proven_optimal = true;
  report.nodes_explored = 17;
  report.elapsed_seconds = 0.25;
  std::stringstream out;
  write_report(report, out);
  CHECK(out.str() ==
        "best_objective=8\nbound=8\nproven_optimal=true\nnodes_explored=17\n"
        "elapsed_seconds=0.25\n");
}
