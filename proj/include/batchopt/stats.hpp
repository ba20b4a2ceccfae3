#ifndef BATCHOPT_STATS_HPP_
#define BATCHOPT_STATS_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "batchopt/core.hpp"
#include "batchopt/eval.hpp"

namespace batchopt {

struct SamplingConfig {
  int n = 5000;
  std::uint64_t master_seed = 1;
  Weighting surrogate = Weighting::Ap2;
  // The sampling form of the objective charges each visited aisle once.
  SshapeVariant sshape_variant = SshapeVariant::DeltaWeighted;
};

// Aligned per-partition samples: row i of every column comes from the
// partition drawn with row_seeds[i].
struct SampleSeries {
  std::vector<double> y_pi;
  std::vector<double> x_return;
  std::vector<double> x_sshape;
  std::vector<std::uint64_t> row_seeds;

  int size() const { return static_cast<int>(y_pi.size()); }
};

SampleSeries sample_objectives(const Instance& instance, const SamplingConfig& config);
void write_series_csv(const SampleSeries& series, std::ostream& out);
SampleSeries read_series_csv(std::istream& in);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov statistic against a normal fitted from the
// sample, with the asymptotic p-value Q(sqrt(n)*D).
KsResult ks_normality_test(std::span<const double> column);

struct BivariateFit {
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double rho = 0.0;
};

BivariateFit fit_bivariate(std::span<const double> x, std::span<const double> y);
// x column picked by strategy, paired against the surrogate column y_pi.
BivariateFit fit_bivariate(const SampleSeries& series, Strategy exact_column);

// E[X | Y = y0] under the fitted bivariate normal.
double conditional_mean(const BivariateFit& fit, double y0);
// Smallest z with P(X < z | Y = y0) = 1 - alpha.
double conditional_upper_bound(const BivariateFit& fit, double y0, double alpha);

struct EmpiricalCdf {
  std::vector<std::pair<double, double>> samples;  // (y, x), sorted by y then x

  double joint(double u, double v) const;     // P(X <= u, Y <= v)
  double marginal_y(double v) const;          // P(Y <= v)
};

EmpiricalCdf make_ecdf(std::span<const double> x, std::span<const double> y);
// P(X <= z | Y <= y0) as a ratio of indicator counts.
double empirical_conditional(const EmpiricalCdf& ecdf, double z, double y0);

struct McrpScore {
  double corr = 0.0;
  double beta = 1.0;
  double epsilon = 0.0;
  double score = 0.0;  // corr - epsilon * ln(beta)
};

McrpScore mcrp_score(const SampleSeries& series, Strategy exact_column, double beta,
                     double epsilon);

double normal_cdf(double z);
// Inverse of the standard normal CDF, accurate to well below 1e-9.
double normal_quantile(double p);

}  // namespace batchopt

#endif  // BATCHOPT_STATS_HPP_
