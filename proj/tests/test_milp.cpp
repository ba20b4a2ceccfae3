#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "batchopt/bnb.hpp"
#include "batchopt/milp.hpp"
#include "support.hpp"
#include "support_milp.hpp"

using namespace batchopt;
using testsup::fix_y_from_partition;
using testsup::ir_min_objective;
using testsup::tiny_instance;

namespace {

Instance four_order_instance() {
  // |I|=4, C=2, |K|=3, |B|=2
  return tiny_instance({5, 4}, {{1, 1, 3}, {2, 2, 2}, {3, 2, 4}},
                       {{1, {1}}, {2, {2}}, {3, {1, 3}}, {4, {3}}}, 2);
}

double exact_min_by_enumeration(const Instance& inst, Strategy strategy) {
  double best = std::numeric_limits<double>::infinity();
  testsup::for_each_labeled_partition(inst.num_orders(), inst.capacity,
                                      [&](const std::vector<int>& assignment) {
                                        Partition p{assignment};
                                        best = std::min(
                                            best, combined_cost(inst, p, strategy).combined);
                                      });
  return best;
}

}  // namespace

TEST_CASE("exact return model has the expected shape") {
  auto inst = four_order_instance();
  ModelIR ir = build_exact_return(inst);
  CHECK(ir.num_variables() == 4 * 2 + 2 * 3 + 2 * 2);
  CHECK(ir.metadata.at("formulation") == "exact_return");

  SUBCASE("tau 1 zeroes all travel coefficients") {
    auto weighted = tiny_instance({5, 4}, {{1, 1, 3}, {2, 2, 2}, {3, 2, 4}},
                                  {{1, {1}}, {2, {2}}, {3, {1, 3}}, {4, {3}}}, 2, "1");
    ModelIR wir = build_exact_return(weighted);
    for (int v = 0; v < wir.num_variables(); ++v) {
      if (wir.variables[static_cast<std::size_t>(v)].name.starts_with("d_")) {
        CHECK(wir.objective[static_cast<std::size_t>(v)] == 0.0);
      }
    }
  }
  SUBCASE("big-M on the item rows is the holder count") {
    // item 1 appears in orders 1 and 3
    for (const auto& c : ir.constraints) {
      if (c.name == "item_1_1") {
        CHECK(c.terms.front().coef == 2.0);
      }
    }
  }
}

TEST_CASE("exact return IR optimum matches partition enumeration") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    auto inst = testsup::random_tiny(seed, 4, 2, {5, 3}, 6);
    ModelIR ir = build_exact_return(inst);
    double ir_opt = ir_min_objective(ir, {});
    CHECK(ir_opt == doctest::Approx(exact_min_by_enumeration(inst, Strategy::Return)));
  }
}

TEST_CASE("fixed-y exact models reproduce the evaluator") {
  for (std::uint64_t seed : {4ULL, 5ULL, 6ULL}) {
    auto inst = testsup::random_tiny(seed, 4, 2, {5, 3}, 6);
    ModelIR ret = build_exact_return(inst);
    ModelIR sshape = build_exact_sshape(inst);
    testsup::for_each_labeled_partition(4, 2, [&](const std::vector<int>& assignment) {
      Partition p{assignment};
      auto fixed = fix_y_from_partition(inst, p);
      CHECK(ir_min_objective(ret, fixed) ==
            doctest::Approx(return_cost(inst, p).combined));
      CHECK(ir_min_objective(sshape, fixed) ==
            doctest::Approx(sshape_cost(inst, p).combined));
    });
  }
}

TEST_CASE("single-aisle sshape model forces the first-ordinal charge") {
  auto inst = tiny_instance({7}, {{1, 1, 4}, {2, 1, 2}}, {{1, {1}}, {2, {2}}}, 1, "0");
  ModelIR ir = build_exact_sshape(inst);
  Partition p{{0, 1}};
  CHECK(ir_min_objective(ir, fix_y_from_partition(inst, p)) == doctest::Approx(14.0 + 14.0));
}

TEST_CASE("even visited count charges exactly the odd half") {
  // both batches visit both aisles: ordinals 1,2 -> only aisle 1 charged
  auto inst = tiny_instance({6, 4}, {{1, 1, 2}, {2, 2, 3}}, {{1, {1, 2}}, {2, {1, 2}}}, 1, "0");
  ModelIR ir = build_exact_sshape(inst);
  Partition p{{0, 1}};
  double value = ir_min_objective(ir, fix_y_from_partition(inst, p));
  CHECK(value == doctest::Approx(2 * (2 * 6)));
  CHECK(value == doctest::Approx(sshape_cost(inst, p).combined));
}

TEST_CASE("sshape build requires linearization") {
  auto inst = four_order_instance();
  ModelBuildConfig config;
  config.linearize_sshape = false;
  CHECK_THROWS_AS(static_cast<void>(build_exact_sshape(inst, config)), std::invalid_argument);
}

TEST_CASE("approx model optima on hand cases") {
  SUBCASE("one pattern means one choice") {
    auto inst = tiny_instance({5, 4}, {{1, 1, 2}, {2, 2, 3}},
                              {{1, {1, 2}}, {2, {1, 2}}, {3, {1, 2}}, {4, {1, 2}}}, 2);
    ModelIR ap1 = build_approx(inst, Weighting::Ap1);
    CHECK(ir_min_objective(ap1, {}) == doctest::Approx(2 * 2));  // |J| * |aisle_set|
  }
  SUBCASE("two disjoint single-aisle patterns separate") {
    auto inst = tiny_instance({5, 3}, {{1, 1, 2}, {2, 2, 3}},
                              {{1, {1}}, {2, {1}}, {3, {2}}, {4, {2}}}, 2);
    CHECK(ir_min_objective(build_approx(inst, Weighting::Ap1), {}) == doctest::Approx(2.0));
    CHECK(ir_min_objective(build_approx(inst, Weighting::Ap2), {}) == doctest::Approx(8.0));
  }
}

TEST_CASE("symmetry rows never change the approx optimum") {
  for (std::uint64_t seed : {7ULL, 8ULL, 9ULL, 10ULL}) {
    auto inst = testsup::random_tiny(seed, 6, 2, {5, 3}, 8);
    ModelBuildConfig plain;
    CHECK(ir_min_objective(build_approx(inst, Weighting::Ap2, plain), {}) ==
          doctest::Approx(ir_min_objective(build_approx(inst, Weighting::Ap2), {})));
  }
}

TEST_CASE("every partition maps to a feasible equal-value IR point and back") {
  auto inst = four_order_instance();
  ModelIR ir = build_exact_return(inst);
  double best_ir = std::numeric_limits<double>::infinity();
  double best_eval = std::numeric_limits<double>::infinity();
  testsup::for_each_labeled_partition(4, 2, [&](const std::vector<int>& assignment) {
    Partition p{assignment};
    double fixed_value = ir_min_objective(ir, fix_y_from_partition(inst, p));
    CHECK(fixed_value < std::numeric_limits<double>::infinity());  // feasible extension exists
    CHECK(fixed_value == doctest::Approx(return_cost(inst, p).combined));
    best_ir = std::min(best_ir, fixed_value);
    best_eval = std::min(best_eval, return_cost(inst, p).combined);
  });
  // conversely the unrestricted optimum is attained by some partition
  CHECK(ir_min_objective(ir, {}) == doctest::Approx(best_eval));
}

TEST_CASE("beta ratio compares variable counts") {
  auto inst = four_order_instance();
  ModelIR exact = build_exact_return(inst);
  CHECK(beta_ratio(exact, exact) == doctest::Approx(1.0));

  ModelIR small, large;
  for (int i = 0; i < 10; ++i) {
    small.add_variable("s" + std::to_string(i), VarKind::Binary, 0, 1, 0);
  }
  for (int i = 0; i < 40; ++i) {
    large.add_variable("l" + std::to_string(i), VarKind::Binary, 0, 1, 0);
  }
  CHECK(beta_ratio(small, large) == doctest::Approx(0.25));
  CHECK_THROWS_AS(static_cast<void>(beta_ratio(small, ModelIR{})), std::invalid_argument);

  auto desk = testsup::random_tiny(11, 8, 2, {6, 5, 3}, 10);
  CHECK(beta_ratio(build_approx(desk, Weighting::Ap2), build_exact_sshape(desk)) < 1.0);
}

TEST_CASE("model export round-trips") {
  auto inst = four_order_instance();
  for (ModelIR ir : {build_exact_return(inst), build_exact_sshape(inst),
                     build_approx(inst, Weighting::Ap2)}) {
    SUBCASE("mps") {
      std::stringstream buffer;
      export_model(ir, buffer, ModelFormat::Mps);
      ModelIR back = parse_mps(buffer);
      CHECK(structurally_equal(ir, back));
    }
    SUBCASE("lp") {
      std::stringstream buffer;
      export_model(ir, buffer, ModelFormat::Lp);
      ModelIR back = parse_lp(buffer);
      CHECK(structurally_equal(ir, back));
    }
  }
}

TEST_CASE("binary variables emit a BV bound row") {
  auto inst = four_order_instance();
  std::stringstream buffer;
  export_model(build_exact_return(inst), buffer, ModelFormat::Mps);
  CHECK(buffer.str().find(" BV BND") != std::string::npos);
  CHECK(buffer.str().find("'INTORG'") != std::string::npos);
}

TEST_CASE("two-variable model matches the golden MPS file byte for byte") {
  ModelIR ir;
  ir.name = "golden2";
  ir.metadata["formulation"] = "demo";
  int pick = ir.add_variable("pick", VarKind::Binary, 0, 1, 1.5);
  int count = ir.add_variable("count", VarKind::Integer, 0, 5, 2);
  ir.add_constraint("need", {{pick, 1.0}, {count, 2.0}}, Sense::Ge, 3.0);
  ir.add_constraint("roomy", {{pick, 1.0}, {count, -1.0}}, Sense::Le, 4.0);

  std::stringstream exported;
  export_model(ir, exported, ModelFormat::Mps);

  std::ifstream golden(std::string(TESTS_DIR) + "/golden/model_2var.mps");
  REQUIRE(golden.good());
  std::stringstream expected;
  expected << golden.rdbuf();
  CHECK(exported.str() == expected.str());
}
