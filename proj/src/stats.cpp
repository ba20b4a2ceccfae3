#include "batchopt/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "batchopt/rng.hpp"

namespace batchopt {

namespace {

std::string format_number(double v) {
  char buffer[32];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

}  // namespace

SampleSeries sample_objectives(const Instance& instance, const SamplingConfig& config) {
  if (config.n < 2) throw std::invalid_argument("sample count must be at least 2");
  SampleSeries series;
  series.y_pi.reserve(static_cast<std::size_t>(config.n));
  series.x_return.reserve(static_cast<std::size_t>(config.n));
  series.x_sshape.reserve(static_cast<std::size_t>(config.n));
  series.row_seeds.reserve(static_cast<std::size_t>(config.n));

  const double tau = instance.tau.value();
  for (int row = 0; row < config.n; ++row) {
    const std::uint64_t seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(row));
    const Partition p = random_partition(instance, seed);

    long long packing = 0, travel_return = 0, travel_sshape = 0, surrogate = 0;
    for (const BatchEvaluation& eval : evaluate_all(instance, p)) {
      packing += eval.unique_items;
      travel_return += batch_travel(instance, eval, Strategy::Return);
      travel_sshape += batch_travel(instance, eval, Strategy::Sshape, config.sshape_variant);
      if (config.surrogate == Weighting::Ap1) {
        surrogate += eval.num_visited();
      } else {
        for (int aisle : eval.visited_aisles) surrogate += instance.layout.length(aisle);
      }
    }
    series.row_seeds.push_back(seed);
    series.y_pi.push_back(static_cast<double>(surrogate));
    series.x_return.push_back(tau * static_cast<double>(packing) +
                              (1.0 - tau) * static_cast<double>(travel_return));
    series.x_sshape.push_back(tau * static_cast<double>(packing) +
                              (1.0 - tau) * static_cast<double>(travel_sshape));
  }
  return series;
}

void write_series_csv(const SampleSeries& series, std::ostream& out) {
  out << "row,y_pi,x_return,x_sshape\n";
  for (int i = 0; i < series.size(); ++i) {
    out << i << ',' << format_number(series.y_pi[static_cast<std::size_t>(i)]) << ','
        << format_number(series.x_return[static_cast<std::size_t>(i)]) << ','
        << format_number(series.x_sshape[static_cast<std::size_t>(i)]) << '\n';
  }
}

SampleSeries read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "row,y_pi,x_return,x_sshape") {
    throw ParseError("series file must start with header 'row,y_pi,x_return,x_sshape'");
  }
  SampleSeries series;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    double values[4];
    for (int f = 0; f < 4; ++f) {
      if (!std::getline(fields, field, ',')) {
        throw ParseError("line " + std::to_string(line_number) + ": expected 4 fields");
      }
      try {
        values[f] = std::stod(field);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_number) + ": malformed number '" +
                         field + "'");
      }
    }
    series.y_pi.push_back(values[1]);
    series.x_return.push_back(values[2]);
    series.x_sshape.push_back(values[3]);
  }
  return series;
}

// ---------------------------------------------------------------------------
// distribution helpers

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Wichura's PPND16 rational approximation (Applied Statistics 37, 1988).
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile argument must be in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

namespace {

double mean_of(std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs, double mean) {
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Asymptotic Kolmogorov survival function, truncated at 100 terms.
double kolmogorov_p(double lambda) {
  double total = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    total += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * total, 0.0, 1.0);
}

}  // namespace

KsResult ks_normality_test(std::span<const double> column) {
  if (column.size() < 8) throw std::invalid_argument("need at least 8 samples");
  const double mu = mean_of(column);
  const double sigma = sample_stddev(column, mu);
  if (sigma == 0.0) throw std::invalid_argument("degenerate sample: zero variance");

  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf((sorted[i] - mu) / sigma);
    const double lower = f - static_cast<double>(i) / n;
    const double upper = static_cast<double>(i + 1) / n - f;
    d = std::max({d, lower, upper});
  }
  return {d, kolmogorov_p(std::sqrt(n) * d)};
}

BivariateFit fit_bivariate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("columns differ in length");
  if (x.size() < 2) throw std::invalid_argument("need at least 2 rows");
  BivariateFit fit;
  fit.mu_x = mean_of(x);
  fit.mu_y = mean_of(y);
  fit.sigma_x = sample_stddev(x, fit.mu_x);
  fit.sigma_y = sample_stddev(y, fit.mu_y);
  if (fit.sigma_x == 0.0 || fit.sigma_y == 0.0) {
    throw std::invalid_argument("degenerate sample: zero variance");
  }
  double cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - fit.mu_x) * (y[i] - fit.mu_y);
  }
  cov /= static_cast<double>(x.size() - 1);
  fit.rho = std::clamp(cov / (fit.sigma_x * fit.sigma_y), -1.0, 1.0);
  return fit;
}

BivariateFit fit_bivariate(const SampleSeries& series, Strategy exact_column) {
  const auto& x = exact_column == Strategy::Return ? series.x_return : series.x_sshape;
  return fit_bivariate(x, series.y_pi);
}

double conditional_mean(const BivariateFit& fit, double y0) {
  if (fit.sigma_y <= 0.0) throw std::invalid_argument("sigma_y must be positive");
  return fit.mu_x + fit.sigma_x * fit.rho * (y0 - fit.mu_y) / fit.sigma_y;
}

double conditional_upper_bound(const BivariateFit& fit, double y0, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  if (std::abs(fit.rho) >= 1.0) {
    throw std::invalid_argument("degenerate conditional: |rho| = 1");
  }
  const double sigma_cond = fit.sigma_x * std::sqrt(1.0 - fit.rho * fit.rho);
  return sigma_cond * normal_quantile(1.0 - alpha) + conditional_mean(fit, y0);
}

EmpiricalCdf make_ecdf(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("columns differ in length");
  if (x.empty()) throw std::invalid_argument("empty sample");
  EmpiricalCdf ecdf;
  ecdf.samples.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) ecdf.samples.emplace_back(y[i], x[i]);
  std::sort(ecdf.samples.begin(), ecdf.samples.end());
  return ecdf;
}

double EmpiricalCdf::marginal_y(double v) const {
  auto end = std::upper_bound(samples.begin(), samples.end(), v,
                              [](double value, const auto& s) { return value < s.first; });
  return static_cast<double>(end - samples.begin()) / static_cast<double>(samples.size());
}

double EmpiricalCdf::joint(double u, double v) const {
  auto end = std::upper_bound(samples.begin(), samples.end(), v,
                              [](double value, const auto& s) { return value < s.first; });
  long long hits = 0;
  for (auto it = samples.begin(); it != end; ++it) {
    if (it->second <= u) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double empirical_conditional(const EmpiricalCdf& ecdf, double z, double y0) {
  const double below = ecdf.marginal_y(y0);
  if (below == 0.0) throw std::invalid_argument("no mass at or below the conditioning value");
  return ecdf.joint(z, y0) / below;
}

McrpScore mcrp_score(const SampleSeries& series, Strategy exact_column, double beta,
                     double epsilon) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in (0,1]");
  McrpScore score;
  score.corr = fit_bivariate(series, exact_column).rho;
  score.beta = beta;
  score.epsilon = epsilon;
  score.score = score.corr - epsilon * std::log(beta);
  return score;
}

}  // namespace batchopt
