// Command-line front end: generate instances, evaluate partitions, run
// the sampler and fits, solve or export models, run heuristics and
// benchmark suites.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "batchopt/bnb.hpp"
#include "batchopt/core.hpp"
#include "batchopt/eval.hpp"
#include "batchopt/genbench.hpp"
#include "batchopt/heuristics.hpp"
#include "batchopt/milp.hpp"
#include "batchopt/stats.hpp"

using namespace batchopt;

namespace {

SshapeVariant parse_variant(const std::string& text) {
  if (text == "parity") return SshapeVariant::Parity;
  if (text == "delta") return SshapeVariant::DeltaWeighted;
  throw ParseError("unknown sshape variant '" + text + "' (want parity|delta)");
}

Weighting parse_weighting(const std::string& text) {
  if (text == "ap1") return Weighting::Ap1;
  if (text == "ap2") return Weighting::Ap2;
  throw ParseError("unknown weighting '" + text + "' (want ap1|ap2)");
}

int run(int argc, char** argv) {
  CLI::App app{"order batching toolkit"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "write a random instance file");
  GeneratorConfig gen_config;
  std::string gen_out;
  generate->add_option("--n", gen_config.n_orders, "number of orders");
  generate->add_option("--capacity", gen_config.capacity, "orders per batch");
  generate->add_option("--tau", gen_config.tau, "packing weight");
  generate->add_option("--mean-items", gen_config.mean_items_per_order, "mean items per order");
  generate->add_option("--unique-ratio", gen_config.unique_ratio, "item slots per unique item");
  generate->add_option("--catalog", gen_config.catalog_size, "catalog size (0 = scaled)");
  generate->add_option("--seed", gen_config.seed, "generator seed");
  generate->add_option("--name", gen_config.name, "instance name");
  generate->add_option("--out", gen_out, "output instance file")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a partition file");
  std::string eval_instance, eval_partition, eval_strategy = "sshape", eval_variant = "parity";
  evaluate->add_option("--instance", eval_instance)->required();
  evaluate->add_option("--partition", eval_partition)->required();
  evaluate->add_option("--strategy", eval_strategy, "return|sshape");
  evaluate->add_option("--sshape-variant", eval_variant, "parity|delta");

  // sample
  auto* sample = app.add_subcommand("sample", "Monte Carlo sample objective values");
  std::string sample_instance, sample_out, sample_surrogate = "ap2";
  SamplingConfig sample_config;
  bool sample_ks = false;
  sample->add_option("--instance", sample_instance)->required();
  sample->add_option("--n", sample_config.n, "sample count");
  sample->add_option("--seed", sample_config.master_seed, "master seed");
  sample->add_option("--surrogate", sample_surrogate, "ap1|ap2");
  sample->add_option("--out", sample_out, "output CSV")->required();
  sample->add_flag("--ks", sample_ks, "print normality test per exact column");

  // fit
  auto* fit = app.add_subcommand("fit", "fit a sampled series");
  std::string fit_series, fit_pair = "sshape";
  double fit_beta = 1.0, fit_epsilon = 0.0;
  fit->add_option("--series", fit_series, "series CSV")->required();
  fit->add_option("--pair", fit_pair, "exact column: return|sshape");
  fit->add_option("--beta", fit_beta, "dimension ratio");
  fit->add_option("--epsilon", fit_epsilon, "dimension penalty weight");

  // solve-approx
  auto* solve = app.add_subcommand("solve-approx", "branch-and-bound on the pattern model");
  std::string solve_instance, solve_weighting = "ap2", solve_out, solve_report;
  BnbConfig solve_config;
  solve->add_option("--instance", solve_instance)->required();
  solve->add_option("--weighting", solve_weighting, "ap1|ap2");
  solve->add_option("--time-limit", solve_config.time_limit_seconds, "seconds");
  solve->add_option("--node-limit", solve_config.node_limit, "node budget (reproducible)");
  solve->add_option("--out", solve_out, "partition file")->required();
  solve->add_option("--report", solve_report, "report file (default stdout)");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "exact minimum by exhaustive enumeration");
  std::string enum_instance, enum_strategy = "sshape", enum_out;
  long long enum_cap = 1'000'000;
  enumerate->add_option("--instance", enum_instance)->required();
  enumerate->add_option("--strategy", enum_strategy, "return|sshape");
  enumerate->add_option("--cap", enum_cap, "partition count cap");
  enumerate->add_option("--out", enum_out, "partition file");

  // heuristic
  auto* heuristic = app.add_subcommand("heuristic", "run a named batching heuristic");
  std::string heur_name, heur_instance, heur_strategy = "sshape", heur_out;
  double heur_budget = 0.0;
  std::uint64_t heur_seed = 1;
  heuristic->add_option("--name", heur_name, "fcfs|seed|cw1|cw2|ils|ap1|ap2|ap1vpg|ap2vpg|exact")
      ->required();
  heuristic->add_option("--instance", heur_instance)->required();
  heuristic->add_option("--strategy", heur_strategy, "return|sshape");
  heuristic->add_option("--budget", heur_budget, "seconds (0 = default)");
  heuristic->add_option("--seed", heur_seed, "seed for randomized heuristics");
  heuristic->add_option("--out", heur_out, "partition file")->required();

  // vpg
  auto* vpg = app.add_subcommand("vpg", "improve a partition by valuable pair swaps");
  std::string vpg_instance, vpg_in, vpg_out, vpg_strategy = "sshape";
  VpgConfig vpg_config;
  bool vpg_fixpoint = false;
  vpg->add_option("--instance", vpg_instance)->required();
  vpg->add_option("--partition-in", vpg_in)->required();
  vpg->add_option("--partition-out", vpg_out)->required();
  vpg->add_option("--strategy", vpg_strategy, "return|sshape");
  vpg->add_option("--k", vpg_config.k, "max aisle-set difference");
  vpg->add_option("--m", vpg_config.m, "orders need more than m items");
  vpg->add_flag("--fixpoint", vpg_fixpoint, "rescan until no swap applies");

  // export-model
  auto* export_cmd = app.add_subcommand("export-model", "write a solver file");
  std::string export_instance, export_model_name = "ap2", export_format = "mps", export_out;
  export_cmd->add_option("--instance", export_instance)->required();
  export_cmd->add_option("--model", export_model_name, "return|sshape|ap1|ap2");
  export_cmd->add_option("--format", export_format, "mps|lp");
  export_cmd->add_option("--out", export_out, "output file")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  std::string bench_suite, bench_out, bench_reference = "ap2vpg";
  int bench_workers = 1;
  std::uint64_t bench_seed = 1;
  double bench_tau = 0.4;
  bench->add_option("--suite", bench_suite, "suite file")->required();
  bench->add_option("--out", bench_out, "report CSV")->required();
  bench->add_option("--reference", bench_reference, "ratio reference algorithm");
  bench->add_option("--workers", bench_workers, "worker threads (BATCHOPT_WORKERS overrides)");
  bench->add_option("--base-seed", bench_seed, "suite base seed");
  bench->add_option("--tau", bench_tau, "packing weight for generated instances");

  CLI11_PARSE(app, argc, argv);

  if (*generate) {
    Instance instance = generate_instance(gen_config);
    write_instance(instance, gen_out);
    std::cout << "wrote " << gen_out << ": " << instance.num_orders() << " orders, "
              << instance.items.size() << " items\n";
    return 0;
  }

  if (*evaluate) {
    Instance instance = read_instance(eval_instance);
    Partition partition = read_partition(instance, eval_partition);
    ObjectiveValue value = combined_cost(instance, partition, parse_strategy(eval_strategy),
                                         parse_variant(eval_variant));
    std::cout << "packing=" << value.packing << '\n'
              << "travel=" << value.travel << '\n'
              << "combined=" << value.combined << '\n';
    return 0;
  }

  if (*sample) {
    Instance instance = read_instance(sample_instance);
    sample_config.surrogate = parse_weighting(sample_surrogate);
    SampleSeries series = sample_objectives(instance, sample_config);
    std::ofstream out(sample_out);
    if (!out) throw ParseError("cannot write series file: " + sample_out);
    write_series_csv(series, out);
    std::cout << "wrote " << sample_out << ": " << series.size() << " rows\n";
    if (sample_ks) {
      auto report = [&](const char* label, const std::vector<double>& column) {
        KsResult ks = ks_normality_test(column);
        std::cout << label << ": D=" << ks.statistic << " p=" << ks.p_value << '\n';
      };
      report("x_return", series.x_return);
      report("x_sshape", series.x_sshape);
    }
    return 0;
  }

  if (*fit) {
    std::ifstream in(fit_series);
    if (!in) throw ParseError("cannot open series file: " + fit_series);
    SampleSeries series = read_series_csv(in);
    Strategy exact_column = parse_strategy(fit_pair);
    BivariateFit bf = fit_bivariate(series, exact_column);
    McrpScore score = mcrp_score(series, exact_column, fit_beta, fit_epsilon);
    std::cout << "mu_x=" << bf.mu_x << '\n'
              << "mu_y=" << bf.mu_y << '\n'
              << "sigma_x=" << bf.sigma_x << '\n'
              << "sigma_y=" << bf.sigma_y << '\n'
              << "rho=" << bf.rho << '\n'
              << "score=" << score.score << '\n';
    return 0;
  }

  if (*solve) {
    Instance instance = read_instance(solve_instance);
    SolveReport report = solve_approx(instance, parse_weighting(solve_weighting), solve_config);
    write_partition(instance, report.best_partition, solve_out);
    if (solve_report.empty()) {
      write_report(report, std::cout);
    } else {
      std::ofstream out(solve_report);
      if (!out) throw ParseError("cannot write report file: " + solve_report);
      write_report(report, out);
    }
    return 0;
  }

  if (*enumerate) {
    Instance instance = read_instance(enum_instance);
    SolveReport report = enumerate_exact(instance, parse_strategy(enum_strategy), enum_cap);
    if (!enum_out.empty()) write_partition(instance, report.best_partition, enum_out);
    write_report(report, std::cout);
    return 0;
  }

  if (*heuristic) {
    Instance instance = read_instance(heur_instance);
    Partition partition =
        run_algorithm(heur_name, instance, parse_strategy(heur_strategy), heur_budget, heur_seed);
    write_partition(instance, partition, heur_out);
    ObjectiveValue value = combined_cost(instance, partition, parse_strategy(heur_strategy));
    std::cout << "objective=" << value.combined << '\n';
    return 0;
  }

  if (*vpg) {
    Instance instance = read_instance(vpg_instance);
    Partition partition = read_partition(instance, vpg_in);
    vpg_config.strategy = parse_strategy(vpg_strategy);
    auto pairs = generate_valuable_pairs(instance, vpg_config);
    VpgResult result = vpg_fixpoint
                           ? vpg_improve_fixpoint(instance, partition, pairs, vpg_config)
                           : vpg_improve(instance, partition, pairs, vpg_config);
    write_partition(instance, result.partition, vpg_out);
    std::cout << "pairs=" << pairs.size() << '\n' << "swaps=" << result.swaps_applied << '\n';
    return 0;
  }

  if (*export_cmd) {
    Instance instance = read_instance(export_instance);
    ModelIR ir;
    if (export_model_name == "return") {
      ir = build_exact_return(instance);
    } else if (export_model_name == "sshape") {
      ir = build_exact_sshape(instance);
    } else {
      ir = build_approx(instance, parse_weighting(export_model_name));
    }
    ModelFormat format;
    if (export_format == "mps") {
      format = ModelFormat::Mps;
    } else if (export_format == "lp") {
      format = ModelFormat::Lp;
    } else {
      throw ParseError("unknown format '" + export_format + "' (want mps|lp)");
    }
    export_model(ir, export_out, format);
    std::cout << "wrote " << export_out << ": " << ir.num_variables() << " variables, "
              << ir.constraints.size() << " rows\n";
    return 0;
  }

  if (*bench) {
    SuiteConfig suite = read_suite(bench_suite);
    suite.reference = bench_reference;
    suite.workers = bench_workers;
    suite.base_seed = bench_seed;
    suite.tau = bench_tau;
    BenchReport report = run_benchmark(suite);
    std::ofstream out(bench_out);
    if (!out) throw ParseError("cannot write report file: " + bench_out);
    write_report_csv(report, out);
    std::cout << "wrote " << bench_out << ": " << report.rows.size() << " rows\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& error) {
    std::cerr << "validation error: " << error.what() << '\n';
    return 2;
  } catch (const ParseError& error) {
    std::cerr << "parse error: " << error.what() << '\n';
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 3;
  }
}
