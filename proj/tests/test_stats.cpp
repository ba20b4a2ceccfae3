#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "batchopt/stats.hpp"
#include "support.hpp"

using namespace batchopt;
using testsup::tiny_instance;

TEST_CASE("sampling is deterministic per seed") {
  auto inst = testsup::random_tiny(1, 6, 2);
  SamplingConfig config;
  config.n = 3;
  config.master_seed = 7;
  auto a = sample_objectives(inst, config);
  auto b = sample_objectives(inst, config);
  CHECK(a.y_pi == b.y_pi);
  CHECK(a.x_return == b.x_return);
  CHECK(a.x_sshape == b.x_sshape);
  CHECK(a.row_seeds == b.row_seeds);
  CHECK(a.size() == 3);
}

TEST_CASE("identical orders give a zero-variance series") {
  auto inst = tiny_instance({5}, {{1, 1, 3}}, {{1, {1}}, {2, {1}}, {3, {1}}, {4, {1}}}, 2);
  SamplingConfig config;
  config.n = 16;
  auto series = sample_objectives(inst, config);
  for (int i = 1; i < series.size(); ++i) {
    CHECK(series.x_return[static_cast<std::size_t>(i)] == series.x_return[0]);
    CHECK(series.x_sshape[static_cast<std::size_t>(i)] == series.x_sshape[0]);
  }
  CHECK_THROWS_WITH_AS(static_cast<void>(ks_normality_test(series.x_return)),
                       doctest::Contains("degenerate"), std::invalid_argument);
}

TEST_CASE("sampled partitions cover the tiny sample space uniformly") {
  // three distinct unordered pairings with three distinct return values
  // (36, 30 and 32)
  auto inst = tiny_instance({8, 4, 1}, {{1, 1, 8}, {2, 2, 4}, {3, 1, 3}, {4, 2, 2}, {5, 3, 1}},
                            {{1, {1}}, {2, {2}}, {3, {3, 4}}, {4, {5}}}, 2, "0");
  SamplingConfig config;
  config.n = 3000;
  config.master_seed = 11;
  auto series = sample_objectives(inst, config);
  std::map<double, int> frequency;
  for (double v : series.x_return) frequency[v] += 1;
  REQUIRE(frequency.size() == 3);
  for (const auto& [value, count] : frequency) {
    CHECK(std::abs(count / 3000.0 - 1.0 / 3.0) < 0.05);
  }
}

TEST_CASE("series csv round-trips") {
  auto inst = testsup::random_tiny(2, 6, 2);
  SamplingConfig config;
  config.n = 25;
  auto series = sample_objectives(inst, config);
  std::stringstream buffer;
  write_series_csv(series, buffer);
  auto back = read_series_csv(buffer);
  CHECK(back.y_pi == series.y_pi);
  CHECK(back.x_return == series.x_return);
  CHECK(back.x_sshape == series.x_sshape);

  std::stringstream bad("wrong,header\n");
  CHECK_THROWS_AS(static_cast<void>(read_series_csv(bad)), ParseError);
}

TEST_CASE("normal quantile is accurate") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-9);
  CHECK(std::abs(normal_quantile(0.8413447460685429) - 1.0) < 1e-9);
  CHECK(std::abs(normal_quantile(0.0013498980316300933) - (-3.0)) < 1e-9);
  for (double p : {0.001, 0.2, 0.4, 0.6, 0.9, 0.9999}) {
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-10));
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK_THROWS_AS(static_cast<void>(normal_quantile(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(normal_quantile(1.0)), std::invalid_argument);
}

TEST_CASE("ks test accepts seeded normal data") {
  int accepted = 0;
  const int seeds = 100;
  for (int s = 1; s <= seeds; ++s) {
    auto gen = make_engine(static_cast<std::uint64_t>(s));
    std::vector<double> draws;
    draws.reserve(5000);
    for (int i = 0; i < 2500; ++i) {
      auto [a, b] = normal_pair(gen);
      draws.push_back(3.0 + 2.0 * a);
      draws.push_back(3.0 + 2.0 * b);
    }
    if (ks_normality_test(draws).p_value > 0.05) ++accepted;
  }
  CHECK(accepted >= 95);
}

TEST_CASE("ks test rejects a two-point sample") {
  std::vector<double> draws;
  for (int i = 0; i < 200; ++i) draws.push_back(i % 2 == 0 ? 0.0 : 1.0);
  auto result = ks_normality_test(draws);
  CHECK(result.statistic > 0.3);
  CHECK(result.p_value < 0.01);
}

TEST_CASE("ks test preconditions") {
  std::vector<double> constant(20, 1.5);
  CHECK_THROWS_AS(static_cast<void>(ks_normality_test(constant)), std::invalid_argument);
  std::vector<double> tiny{1, 2, 3};
  CHECK_THROWS_AS(static_cast<void>(ks_normality_test(tiny)), std::invalid_argument);
}

TEST_CASE("bivariate fit") {
  SUBCASE("perfect correlation") {
    std::vector<double> x{1, 2, 3, 4, 5};
    CHECK(fit_bivariate(x, x).rho == doctest::Approx(1.0));
  }
  SUBCASE("two points") {
    std::vector<double> x{0, 1}, y{0, 1};
    auto fit = fit_bivariate(x, y);
    CHECK(fit.mu_x == doctest::Approx(0.5));
    CHECK(fit.mu_y == doctest::Approx(0.5));
    CHECK(fit.rho == doctest::Approx(1.0));
  }
  SUBCASE("independent columns decorrelate") {
    auto gen = make_engine(5);
    std::vector<double> x, y;
    for (int i = 0; i < 5000; ++i) {
      x.push_back(static_cast<double>(bounded(gen, 2)));
      y.push_back(uniform01(gen));
    }
    CHECK(std::abs(fit_bivariate(x, y).rho) < 0.1);
  }
  SUBCASE("zero variance is rejected") {
    std::vector<double> x{1, 1, 1}, y{1, 2, 3};
    CHECK_THROWS_AS(static_cast<void>(fit_bivariate(x, y)), std::invalid_argument);
  }
  SUBCASE("rho is invariant under positive affine maps") {
    auto gen = make_engine(6);
    std::vector<double> x, y, x2, y2;
    for (int i = 0; i < 500; ++i) {
      auto [a, b] = normal_pair(gen);
      x.push_back(a);
      y.push_back(0.7 * a + b);
      x2.push_back(3.0 * a + 11.0);
      y2.push_back(0.25 * (0.7 * a + b) - 2.0);
    }
    CHECK(fit_bivariate(x, y).rho == doctest::Approx(fit_bivariate(x2, y2).rho));
  }
}

TEST_CASE("conditional mean follows the regression line") {
  BivariateFit fit{10.0, 0.0, 2.0, 1.0, 0.5};
  CHECK(conditional_mean(fit, 2.0) == doctest::Approx(12.0));
  CHECK(conditional_mean(fit, fit.mu_y) == doctest::Approx(fit.mu_x));
  fit.rho = 0.0;
  CHECK(conditional_mean(fit, -100.0) == doctest::Approx(fit.mu_x));
  // linear in y0
  fit.rho = 0.3;
  double lo = conditional_mean(fit, 1.0), mid = conditional_mean(fit, 2.0),
         hi = conditional_mean(fit, 3.0);
  CHECK(mid - lo == doctest::Approx(hi - mid));
}

TEST_CASE("conditional upper bound") {
  BivariateFit fit{10.0, 0.0, 2.0, 1.0, 0.0};
  SUBCASE("alpha one half is the conditional median") {
    CHECK(conditional_upper_bound(fit, 0.7, 0.5) == doctest::Approx(conditional_mean(fit, 0.7)));
  }
  SUBCASE("one-sigma quantile") {
    CHECK(conditional_upper_bound(fit, 0.0, 1.0 - 0.8413447460685429) ==
          doctest::Approx(fit.mu_x + fit.sigma_x).epsilon(1e-9));
  }
  SUBCASE("monotone in y0 and confidence") {
    fit.rho = 0.6;
    CHECK(conditional_upper_bound(fit, 1.0, 0.25) < conditional_upper_bound(fit, 2.0, 0.25));
    CHECK(conditional_upper_bound(fit, 1.0, 0.25) < conditional_upper_bound(fit, 1.0, 0.1));
  }
  SUBCASE("degenerate correlation is rejected") {
    fit.rho = 1.0;
    CHECK_THROWS_AS(static_cast<void>(conditional_upper_bound(fit, 0.0, 0.25)),
                    std::invalid_argument);
  }
}

TEST_CASE("conditional bound covers synthetic bivariate data") {
  const double mu_x = 5.0, mu_y = -2.0, sigma_x = 3.0, sigma_y = 1.5, rho = 0.8;
  BivariateFit fit{mu_x, mu_y, sigma_x, sigma_y, rho};
  auto gen = make_engine(12);
  const int n = 20000;
  std::vector<double> xs, ys;
  xs.reserve(n);
  ys.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto [e1, e2] = normal_pair(gen);
    ys.push_back(mu_y + sigma_y * e1);
    xs.push_back(mu_x + sigma_x * (rho * e1 + std::sqrt(1 - rho * rho) * e2));
  }
  const double y0 = mu_y + 0.3 * sigma_y;
  const double alpha = 0.25;
  const double z = conditional_upper_bound(fit, y0, alpha);
  long long in_window = 0, covered = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(ys[static_cast<std::size_t>(i)] - y0) <= 0.05 * sigma_y) {
      ++in_window;
      if (xs[static_cast<std::size_t>(i)] < z) ++covered;
    }
  }
  REQUIRE(in_window > 100);
  CHECK(std::abs(static_cast<double>(covered) / static_cast<double>(in_window) - (1 - alpha)) <
        0.05);
}

TEST_CASE("empirical conditional cdf") {
  SUBCASE("hand counts") {
    std::vector<double> x{1, 2, 3}, y{1, 2, 3};
    auto ecdf = make_ecdf(x, y);
    CHECK(empirical_conditional(ecdf, 1.0, 2.0) == doctest::Approx(0.5));
    CHECK(empirical_conditional(ecdf, 10.0, 3.0) == doctest::Approx(1.0));
    CHECK_THROWS_WITH_AS(static_cast<void>(empirical_conditional(ecdf, 1.0, 0.5)),
                         doctest::Contains("no mass"), std::invalid_argument);
  }
  SUBCASE("matches the brute-force double loop") {
    auto gen = make_engine(8);
    std::vector<double> x, y;
    for (int i = 0; i < 1000; ++i) {
      x.push_back(std::floor(uniform01(gen) * 20.0));
      y.push_back(std::floor(uniform01(gen) * 20.0));
    }
    auto ecdf = make_ecdf(x, y);
    for (int probe = 0; probe < 50; ++probe) {
      const double z = std::floor(uniform01(gen) * 20.0);
      const double y0 = std::floor(uniform01(gen) * 20.0) + 0.5;
      long long below = 0, hits = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] <= y0) {
          ++below;
          if (x[i] <= z) ++hits;
        }
      }
      if (below == 0) continue;
      CHECK(empirical_conditional(ecdf, z, y0) ==
            doctest::Approx(static_cast<double>(hits) / static_cast<double>(below)));
    }
  }
  SUBCASE("monotone in both arguments") {
    std::vector<double> x{3, 1, 4, 1, 5, 9, 2, 6}, y{2, 7, 1, 8, 2, 8, 1, 8};
    auto ecdf = make_ecdf(x, y);
    CHECK(ecdf.joint(3, 2) <= ecdf.joint(4, 2));
    CHECK(ecdf.joint(3, 2) <= ecdf.joint(3, 8));
    CHECK(ecdf.marginal_y(2) <= ecdf.marginal_y(7));
  }
}

TEST_CASE("mcrp score") {
  // columns built from orthogonal unit directions so the sample
  // correlation is exactly 0.9
  SampleSeries series;
  series.y_pi = {1, -1, 1, -1};
  const double c = std::sqrt(1.0 - 0.81);
  series.x_sshape = {0.9 + c, -0.9 + c, 0.9 - c, -0.9 - c};
  series.x_return = series.x_sshape;

  auto score = mcrp_score(series, Strategy::Sshape, 0.5, 0.1);
  CHECK(score.corr == doctest::Approx(0.9));
  CHECK(score.score == doctest::Approx(0.9 - 0.1 * std::log(0.5)));
  CHECK(score.score == doctest::Approx(0.96931).epsilon(1e-4));

  CHECK(mcrp_score(series, Strategy::Sshape, 0.5, 0.0).score == doctest::Approx(0.9));
  CHECK(mcrp_score(series, Strategy::Sshape, 1.0, 5.0).score == doctest::Approx(0.9));
  CHECK_THROWS_AS(static_cast<void>(mcrp_score(series, Strategy::Sshape, 0.0, 0.1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(mcrp_score(series, Strategy::Sshape, 1.5, 0.1)),
                  std::invalid_argument);
}
