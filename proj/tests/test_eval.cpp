#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "batchopt/eval.hpp"
#include "support.hpp"

using namespace batchopt;
using testsup::tiny_instance;

TEST_CASE("evaluate_batch resolves auxiliaries") {
  SUBCASE("single aisle") {
    auto inst = tiny_instance({6}, {{1, 1, 3}, {2, 1, 5}}, {{1, {1, 2}}}, 1);
    auto eval = evaluate_batch(inst, Partition{{0}}, 0);
    CHECK(eval.unique_items == 2);
    CHECK(eval.visited_aisles == std::vector<int>{1});
    CHECK(eval.max_depths == std::vector<int>{5});
    CHECK(eval.ordinals == std::vector<int>{1});
    CHECK(eval.odd_flags == std::vector<int>{1});
  }
  SUBCASE("shared item collapses") {
    auto inst = tiny_instance({5, 5}, {{7, 2, 4}}, {{1, {7}}, {2, {7}}}, 2);
    auto eval = evaluate_batch(inst, Partition{{0, 0}}, 0);
    CHECK(eval.unique_items == 1);
    CHECK(eval.visited_aisles == std::vector<int>{2});
    CHECK(eval.max_depths == std::vector<int>{4});
  }
  SUBCASE("ordinals skip unvisited aisles") {
    auto inst = tiny_instance({5, 5, 5, 5},
                              {{1, 1, 2}, {2, 3, 1}, {3, 4, 3}},
                              {{1, {1}}, {2, {2, 3}}}, 2);
    auto eval = evaluate_batch(inst, Partition{{0, 0}}, 0);
    CHECK(eval.visited_aisles == std::vector<int>{1, 3, 4});
    CHECK(eval.ordinals == std::vector<int>{1, 2, 3});
    CHECK(eval.odd_flags == std::vector<int>{1, 0, 1});
  }
  SUBCASE("batch index out of range") {
    auto inst = tiny_instance({5}, {{1, 1, 1}}, {{1, {1}}}, 1);
    CHECK_THROWS_AS(static_cast<void>(evaluate_batch(inst, Partition{{0}}, 1)),
                    std::out_of_range);
  }
}

TEST_CASE("return cost") {
  SUBCASE("tau 0 collapses to travel") {
    auto inst = tiny_instance({6}, {{1, 1, 3}, {2, 1, 5}}, {{1, {1, 2}}}, 1, "0");
    auto value = return_cost(inst, Partition{{0}});
    CHECK(value.travel == 10);
    CHECK(value.combined == doctest::Approx(10.0));
  }
  SUBCASE("tau 1 collapses to packing") {
    auto inst = tiny_instance({6}, {{1, 1, 3}, {2, 1, 5}}, {{1, {1, 2}}, {2, {1}}}, 1, "1");
    auto value = return_cost(inst, Partition{{0, 1}});
    CHECK(value.packing == 3);
    CHECK(value.combined == doctest::Approx(3.0));
  }
  SUBCASE("tau 0.4 blends both components") {
    auto inst = tiny_instance(
        {6}, {{1, 1, 6}, {2, 1, 3}, {3, 1, 2}, {4, 1, 4}, {5, 1, 2}},
        {{1, {1}}, {2, {2, 3}}, {3, {4}}, {4, {5}}}, 2);
    auto value = return_cost(inst, Partition{{0, 0, 1, 1}});
    CHECK(value.packing == 5);
    CHECK(value.travel == 20);
    CHECK(value.combined == doctest::Approx(14.0));
  }
}

TEST_CASE("sshape cost variants") {
  auto inst = tiny_instance({10, 8, 6}, {{1, 1, 2}, {2, 2, 3}, {3, 3, 1}},
                            {{1, {1, 2}}, {2, {3}}}, 2, "0");
  Partition p{{0, 0}};
  SUBCASE("parity charges odd ordinals") {
    auto value = sshape_cost(inst, p);
    CHECK(value.travel == 32);  // 2*(10+6), ordinal 2 skipped
  }
  SUBCASE("delta weighted charges every visited aisle once") {
    auto value = sshape_cost(inst, p, SshapeVariant::DeltaWeighted);
    CHECK(value.travel == 24);
  }
  SUBCASE("single visited aisle") {
    auto single = tiny_instance({7}, {{1, 1, 4}}, {{1, {1}}}, 1, "0");
    CHECK(sshape_cost(single, Partition{{0}}).travel == 14);
    CHECK(sshape_cost(single, Partition{{0}}, SshapeVariant::DeltaWeighted).travel == 7);
  }
}

TEST_CASE("combined value is invariant under batch relabeling") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = testsup::random_tiny(seed, 6, 2);
    Partition p = random_partition(inst, seed);
    Partition relabeled = p;
    for (int& j : relabeled.batch_of) j = (j + 1) % 3;
    for (Strategy s : {Strategy::Return, Strategy::Sshape}) {
      CHECK(combined_cost(inst, p, s).combined ==
            doctest::Approx(combined_cost(inst, relabeled, s).combined));
    }
  }
}

TEST_CASE("swap delta equals full re-evaluation") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto inst = testsup::random_tiny(seed, 6, 2);
    Partition p = random_partition(inst, seed * 7 + 1);
    auto gen = make_engine(seed);
    int a = static_cast<int>(bounded(gen, 6));
    int b = static_cast<int>(bounded(gen, 6));
    if (p.batch_of[static_cast<std::size_t>(a)] == p.batch_of[static_cast<std::size_t>(b)]) {
      CHECK_THROWS_AS(static_cast<void>(
                          delta_objective_swap(inst, p, a, b, Strategy::Return)),
                      std::invalid_argument);
      continue;
    }
    Partition swapped = p;
    std::swap(swapped.batch_of[static_cast<std::size_t>(a)],
              swapped.batch_of[static_cast<std::size_t>(b)]);
    for (Strategy s : {Strategy::Return, Strategy::Sshape}) {
      auto delta = delta_objective_swap(inst, p, a, b, s);
      auto before = combined_cost(inst, p, s);
      auto after = combined_cost(inst, swapped, s);
      CHECK(delta.packing == after.packing - before.packing);
      CHECK(delta.travel == after.travel - before.travel);
      CHECK(delta.combined == doctest::Approx(after.combined - before.combined));
      // antisymmetry
      auto reverse = delta_objective_swap(inst, swapped, a, b, s);
      CHECK(reverse.packing == -delta.packing);
      CHECK(reverse.travel == -delta.travel);
    }
  }
}

TEST_CASE("swapping identical orders changes nothing") {
  auto inst = tiny_instance({5, 4}, {{1, 1, 2}, {2, 2, 3}},
                            {{1, {1, 2}}, {2, {1, 2}}, {3, {1}}, {4, {2}}}, 2);
  Partition p{{0, 1, 0, 1}};
  auto delta = delta_objective_swap(inst, p, 0, 1, Strategy::Return);
  CHECK(delta.packing == 0);
  CHECK(delta.travel == 0);
  CHECK(delta.combined == doctest::Approx(0.0));
}

TEST_CASE("consolidating an aisle saves twice its pick depth") {
  // o1 is the only aisle-3 order of batch 1; batch 2 already reaches
  // deeper into aisle 3, so moving o1 there drops travel by 2*r.
  auto inst = tiny_instance({5, 5, 5},
                            {{10, 3, 2}, {11, 1, 1}, {12, 3, 4}, {13, 1, 1}},
                            {{1, {10}}, {2, {11}}, {3, {12, 13}}, {4, {11}}}, 2);
  Partition p{{0, 0, 1, 1}};
  auto delta = delta_objective_swap(inst, p, 0, 3, Strategy::Return);
  CHECK(delta.travel == -4);  // 2*r with r = 2
  CHECK(delta.packing == -1);
  auto before = return_cost(inst, p);
  Partition swapped{{1, 0, 1, 0}};
  auto after = return_cost(inst, swapped);
  CHECK(delta.combined == doctest::Approx(after.combined - before.combined));
}

TEST_CASE("duplicate orders never increase the unique count") {
  auto inst = tiny_instance({5}, {{1, 1, 2}, {2, 1, 3}, {3, 1, 4}},
                            {{1, {1, 2}}, {2, {1, 2}}, {3, {3}}, {4, {2, 3}}}, 2);
  auto with_duplicate = evaluate_members(inst, std::vector<int>{0, 1}, 0);
  auto with_other = evaluate_members(inst, std::vector<int>{0, 3}, 0);
  CHECK(with_duplicate.unique_items == 2);
  CHECK(with_duplicate.unique_items <= with_other.unique_items);
}

TEST_CASE("surrogate values count and weight visited aisles") {
  auto inst = tiny_instance({10, 8, 6}, {{1, 1, 2}, {2, 2, 3}, {3, 3, 1}},
                            {{1, {1, 2}}, {2, {3}}, {3, {1}}, {4, {2}}}, 2);
  Partition p{{0, 0, 1, 1}};
  CHECK(surrogate_value(inst, p, Weighting::Ap1) == 3 + 2);
  CHECK(surrogate_value(inst, p, Weighting::Ap2) == (10 + 8 + 6) + (10 + 8));
}

TEST_CASE("scaled cost orders combined values exactly") {
  Tau tau = Tau::parse("0.4");
  CHECK(scaled_cost(5, 20, tau) == 4 * 5 + 6 * 20);
  ObjectiveDelta worse{1, 0, 0.4};
  ObjectiveDelta better{-1, -4, -2.8};
  ObjectiveDelta tie{3, -2, 0.0};  // 0.4*3 - 0.6*2 == 0
  CHECK_FALSE(strictly_improves(worse, tau));
  CHECK(strictly_improves(better, tau));
  CHECK_FALSE(strictly_improves(tie, tau));
}
