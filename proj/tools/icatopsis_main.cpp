// Command-line front end: `rank` scores a decision CSV with one of the four
// methods, `bench` runs the Monte Carlo experiments and writes result CSVs.
#include "icatopsis/icatopsis.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace icatopsis;

WeightVector parse_weights(const std::string& spec, std::size_t m) {
  if (spec.empty()) return WeightVector::equal(m);
  WeightVector weights;
  std::istringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) weights.w.push_back(std::stod(item));
  return weights;
}

int run_rank(const std::string& input, const std::string& method, const std::string& ica,
             const std::string& weight_spec, std::uint64_t seed, bool ridge) {
  const DecisionMatrix matrix = read_decision_csv(input);
  const WeightVector weights =
      parse_weights(weight_spec, static_cast<std::size_t>(matrix.criteria()));
  CovarianceOptions cov;
  cov.ridge = ridge;
  IcaConfig config;
  config.seed = seed;
  config.algorithm = ica == "fastica" ? IcaAlgorithm::fastica_kurtosis : IcaAlgorithm::jade;

  RankingOutcome outcome;
  if (method == "topsis") {
    outcome = topsis_rank(matrix, weights).outcome;
  } else if (method == "topsis-m") {
    outcome = topsis_m_rank(matrix, weights, cov).outcome;
  } else if (method == "ica-topsis") {
    outcome = ica_topsis(matrix, weights, config).outcome;
  } else if (method == "ica-topsis-m") {
    outcome = ica_topsis_m(matrix, weights, config, cov).outcome;
  } else {
    std::cerr << "unknown method: " << method << "\n";
    return 1;
  }
  for (const std::string& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
  write_ranking_csv(outcome, matrix.alternative_ids, std::cout);
  return 0;
}

void write_table(const ResultTable& table, const std::filesystem::path& dir,
                 const std::string& name) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (name + ".csv"));
    if (!out) throw IoError("cli: cannot write to " + (dir / (name + ".csv")).string());
    write_result_csv(table, out);
  }
  std::ofstream out(dir / (name + "_long.csv"));
  if (!out) throw IoError("cli: cannot write to " + (dir / (name + "_long.csv")).string());
  write_result_long_csv(table, out);
}

std::vector<Method> all_methods() {
  return {Method::topsis,
          Method::topsis_m,
          Method::ica_topsis_fastica,
          Method::ica_topsis_jade,
          Method::ica_topsis_m_fastica,
          Method::ica_topsis_m_jade,
          Method::utopic_ica_topsis,
          Method::utopic_ica_topsis_m};
}

int run_bench(const std::string& experiment, int replications, std::uint64_t seed,
              const std::string& out_dir, const std::string& profile, int criteria) {
  const bool paper = profile == "paper";
  ExperimentSpec spec;
  spec.base_seed = seed;

  if (experiment == "grid") {
    spec.alpha_grid = {-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75};
    spec.beta_grid = spec.alpha_grid;
    spec.alternatives = {100};
    spec.replications = replications > 0 ? replications : (paper ? 500 : 50);
    write_table(run_grid_experiment(spec), out_dir, "grid");
  } else if (experiment == "snr") {
    spec.methods = all_methods();
    spec.snr_db = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    spec.alternatives = {100};
    spec.replications = replications > 0 ? replications : (paper ? 500 : 50);
    write_table(run_snr_sweep(spec), out_dir, "snr");
  } else if (experiment == "alternatives") {
    spec.methods = all_methods();
    spec.snr_db = {30};
    spec.alternatives = {10, 30, 50, 100, 170};
    spec.replications = replications > 0 ? replications : (paper ? 500 : 50);
    write_table(run_alternatives_sweep(spec), out_dir, "alternatives");
  } else if (experiment == "tables") {
    spec.methods = {Method::topsis, Method::topsis_m, Method::ica_topsis_m_jade};
    spec.criteria = criteria;
    spec.snr_db = {15, 30, 45};
    spec.alternatives = {30, 100, 170};
    spec.replications = replications > 0 ? replications : (paper ? 1000 : 30);
    write_table(run_table_experiment(spec), out_dir, "tables_m" + std::to_string(criteria));
  } else {
    std::cerr << "unknown experiment: " << experiment << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multicriteria ranking under dependent criteria"};
  app.require_subcommand(1);

  std::string input, method = "topsis", ica = "jade", weight_spec;
  std::uint64_t seed = 0;
  bool ridge = false;
  CLI::App* rank = app.add_subcommand("rank", "Rank the alternatives of a decision CSV");
  rank->add_option("--input", input, "Decision CSV (alternatives as rows)")->required();
  rank->add_option("--method", method, "topsis|topsis-m|ica-topsis|ica-topsis-m");
  rank->add_option("--ica", ica, "fastica|jade (default jade)")
      ->check(CLI::IsMember({"fastica", "jade"}));
  rank->add_option("--weights", weight_spec, "Comma-separated weights (default equal)");
  rank->add_option("--seed", seed, "Seed for the separation stage");
  rank->add_flag("--ridge", ridge, "Enable covariance ridge regularization");

  std::string experiment, out_dir = ".", profile = "ci";
  int replications = 0;
  int criteria = 3;
  CLI::App* bench = app.add_subcommand("bench", "Run a Monte Carlo experiment");
  bench->add_option("experiment", experiment, "grid|snr|alternatives|tables")->required();
  bench->add_option("--replications", replications, "Override the profile's replication count");
  bench->add_option("--seed", seed, "Base seed");
  bench->add_option("--out", out_dir, "Output directory (default .)");
  bench->add_option("--profile", profile, "ci|paper (default ci)")
      ->check(CLI::IsMember({"ci", "paper"}));
  bench->add_option("--criteria", criteria, "Criteria count for the tables experiment")
      ->check(CLI::Range(2, 10));

  CLI11_PARSE(app, argc, argv);

  try {
    if (rank->parsed()) return run_rank(input, method, ica, weight_spec, seed, ridge);
    return run_bench(experiment, replications, seed, out_dir, profile, criteria);
  } catch (const icatopsis::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
