// Monte Carlo harness: paired replications of every method on shared
// synthetic instances, aggregated into per-scenario result tables.
#pragma once

#include "icatopsis/metrics.hpp"
#include "icatopsis/pipelines.hpp"
#include "icatopsis/synth.hpp"

#include <atomic>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

namespace icatopsis {

enum class Method {
  topsis,
  topsis_m,
  ica_topsis_fastica,
  ica_topsis_jade,
  ica_topsis_m_fastica,
  ica_topsis_m_jade,
  utopic_ica_topsis,
  utopic_ica_topsis_m,
};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::topsis: return "topsis";
    case Method::topsis_m: return "topsis-m";
    case Method::ica_topsis_fastica: return "ica-topsis(fastica)";
    case Method::ica_topsis_jade: return "ica-topsis(jade)";
    case Method::ica_topsis_m_fastica: return "ica-topsis-m(fastica)";
    case Method::ica_topsis_m_jade: return "ica-topsis-m(jade)";
    case Method::utopic_ica_topsis: return "utopic-ica-topsis";
    case Method::utopic_ica_topsis_m: return "utopic-ica-topsis-m";
  }
  return "?";
}

struct ExperimentSpec {
  std::vector<Method> methods;
  int criteria = 2;
  std::vector<int> alternatives = {100};
  std::vector<double> snr_db;          // empty = noiseless
  std::vector<double> alpha_grid;      // 2x2 grid experiment only
  std::vector<double> beta_grid;
  int replications = 100;
  std::uint64_t base_seed = 0;
  int max_threads = 0;  // 0 = ICATOPSIS_THREADS env or hardware concurrency
};

struct ResultCell {
  Method method = Method::topsis;
  std::string scenario;
  int replications = 0;
  int failures = 0;
  double tau_mean = 0, tau_std = 0;
  double rho_mean = 0, rho_std = 0;
  double mae_mean = 0, mae_std = 0;
};

struct ResultTable {
  std::vector<ResultCell> rows;
};

namespace detail {

inline int default_thread_count() {
  if (const char* env = std::getenv("ICATOPSIS_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

template <typename Body>
void parallel_for(int n, int max_threads, Body&& body) {
  int threads = max_threads > 0 ? max_threads : default_thread_count();
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct RepMetrics {
  double tau = 0, rho = 0, mae = 0;
  bool failed = true;
};

inline RankingOutcome run_method(Method method, const DecisionMatrix& observed,
                                 const WeightVector& weights, const MixingInstance& instance,
                                 std::uint64_t rep_seed) {
  IcaConfig config;
  config.seed = derive_seed(rep_seed, 16 + static_cast<std::uint64_t>(method));
  switch (method) {
    case Method::topsis:
      return topsis_rank(observed, weights).outcome;
    case Method::topsis_m:
      return topsis_m_rank(observed, weights).outcome;
    case Method::ica_topsis_fastica:
      config.algorithm = IcaAlgorithm::fastica_kurtosis;
      return ica_topsis(observed, weights, config).outcome;
    case Method::ica_topsis_jade:
      config.algorithm = IcaAlgorithm::jade;
      return ica_topsis(observed, weights, config).outcome;
    case Method::ica_topsis_m_fastica:
      config.algorithm = IcaAlgorithm::fastica_kurtosis;
      return ica_topsis_m(observed, weights, config).outcome;
    case Method::ica_topsis_m_jade:
      config.algorithm = IcaAlgorithm::jade;
      return ica_topsis_m(observed, weights, config).outcome;
    case Method::utopic_ica_topsis:
      return utopic_pipeline(instance, weights, PipelineKind::ica_topsis);
    case Method::utopic_ica_topsis_m:
      return utopic_pipeline(instance, weights, PipelineKind::ica_topsis_m);
  }
  throw ValidationError("bench: unknown method");
}

inline ResultCell aggregate(Method method, const std::string& scenario,
                            const std::vector<RepMetrics>& reps) {
  ResultCell cell;
  cell.method = method;
  cell.scenario = scenario;
  cell.replications = static_cast<int>(reps.size());
  std::vector<double> taus, rhos, maes;
  for (const RepMetrics& r : reps) {
    if (r.failed) {
      ++cell.failures;
      continue;
    }
    taus.push_back(r.tau);
    rhos.push_back(r.rho);
    maes.push_back(r.mae);
  }
  auto mean_of = [](const std::vector<double>& xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  };
  auto std_of = [](const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return xs.empty() ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));  // unbiased
  };
  cell.tau_mean = mean_of(taus);
  cell.tau_std = std_of(taus, cell.tau_mean);
  cell.rho_mean = mean_of(rhos);
  cell.rho_std = std_of(rhos, cell.rho_mean);
  cell.mae_mean = mean_of(maes);
  cell.mae_std = std_of(maes, cell.mae_mean);
  return cell;
}

// One scenario of paired replications: every method sees the same instance.
// `mixing_factory(rep_seed)` supplies the mixing matrix per replication.
inline std::vector<ResultCell> run_paired_scenario(
    const ExperimentSpec& spec, const std::string& scenario, Index m, Index k,
    std::optional<double> snr_db, const std::vector<Method>& methods,
    const std::function<Matrix(std::uint64_t)>& mixing_factory, std::uint64_t scenario_index) {
  const WeightVector weights = WeightVector::equal(static_cast<std::size_t>(m));
  std::vector<std::vector<RepMetrics>> results(
      methods.size(), std::vector<RepMetrics>(static_cast<std::size_t>(spec.replications)));

  parallel_for(spec.replications, spec.max_threads, [&](int rep) {
    const std::uint64_t rep_seed =
        derive_seed(spec.base_seed ^ static_cast<std::uint64_t>(rep), scenario_index);
    const MixingInstance instance = make_instance(mixing_factory(rep_seed), k, snr_db, rep_seed);
    const DecisionMatrix observed = DecisionMatrix::from_values(instance.observed);
    const RankingOutcome target =
        topsis_rank(DecisionMatrix::from_values(instance.latents), weights).outcome;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      RepMetrics& out = results[mi][static_cast<std::size_t>(rep)];
      try {
        const RankingOutcome est = run_method(methods[mi], observed, weights, instance, rep_seed);
        out.tau = kendall_tau(est.order, target.order);
        out.rho = pearson_closeness(est.closeness, target.closeness);
        out.mae = top_segment_mae(est.order, target.order, 0.2);
        out.failed = false;
      } catch (const Error&) {
        out.failed = true;  // recorded, excluded from the mean
      }
    }
  });

  std::vector<ResultCell> cells;
  cells.reserve(methods.size());
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    cells.push_back(aggregate(methods[mi], scenario, results[mi]));
  return cells;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace detail

/// Grid over the off-diagonal mixing entries (alpha, beta), two criteria,
/// noiseless: TOPSIS-M on the mixed data against the target ranking from the
/// true latents.
inline ResultTable run_grid_experiment(const ExperimentSpec& spec) {
  if (spec.criteria != 2)
    throw ValidationError("bench: the grid experiment is defined for 2 criteria");
  if (spec.alpha_grid.empty() || spec.beta_grid.empty())
    throw ValidationError("bench: grid experiment needs alpha and beta values");
  if (spec.replications < 1) throw ValidationError("bench: replications must be >= 1");
  const Index k = static_cast<Index>(spec.alternatives.at(0));
  ResultTable table;
  std::uint64_t scenario_index = 0;
  for (double alpha : spec.alpha_grid) {
    for (double beta : spec.beta_grid) {
      std::ostringstream scenario;
      scenario << "alpha=" << alpha << ",beta=" << beta;
      auto factory = [alpha, beta](std::uint64_t) { return make_mixing_2x2(alpha, beta); };
      auto cells = detail::run_paired_scenario(spec, scenario.str(), 2, k, std::nullopt,
                                               {Method::topsis_m}, factory, scenario_index++);
      table.rows.insert(table.rows.end(), cells.begin(), cells.end());
    }
  }
  return table;
}

namespace detail {

inline ResultTable run_sweep(const ExperimentSpec& spec,
                             const std::vector<std::pair<std::optional<double>, int>>& scenarios) {
  if (spec.methods.empty()) throw ValidationError("bench: no methods selected");
  if (spec.replications < 1) throw ValidationError("bench: replications must be >= 1");
  const Index m = static_cast<Index>(spec.criteria);
  ResultTable table;
  std::uint64_t scenario_index = 0;
  for (const auto& [snr, k] : scenarios) {
    std::ostringstream label;
    if (snr)
      label << "snr=" << *snr << ",k=" << k;
    else
      label << "noiseless,k=" << k;
    auto factory = [m](std::uint64_t rep_seed) {
      return make_mixing_random(m, derive_seed(rep_seed, 2));
    };
    auto cells = run_paired_scenario(spec, label.str(), m, static_cast<Index>(k), snr,
                                     spec.methods, factory, scenario_index++);
    table.rows.insert(table.rows.end(), cells.begin(), cells.end());
  }
  return table;
}

}  // namespace detail

/// Noise sweep: fixed K (first entry of `alternatives`), one scenario per SNR.
inline ResultTable run_snr_sweep(const ExperimentSpec& spec) {
  if (spec.snr_db.empty()) throw ValidationError("bench: SNR sweep needs SNR values");
  std::vector<std::pair<std::optional<double>, int>> scenarios;
  for (double snr : spec.snr_db) scenarios.emplace_back(snr, spec.alternatives.at(0));
  return detail::run_sweep(spec, scenarios);
}

/// Alternatives sweep: fixed SNR (first entry of `snr_db`), one scenario per K.
inline ResultTable run_alternatives_sweep(const ExperimentSpec& spec) {
  if (spec.alternatives.empty()) throw ValidationError("bench: alternatives sweep needs K values");
  if (spec.snr_db.size() != 1)
    throw ValidationError("bench: alternatives sweep needs exactly one SNR value");
  std::vector<std::pair<std::optional<double>, int>> scenarios;
  for (int k : spec.alternatives) scenarios.emplace_back(spec.snr_db.front(), k);
  return detail::run_sweep(spec, scenarios);
}

/// Full scenario table for a fixed criteria count: every (snr, K) pair in the
/// spec crossed with every method.
inline ResultTable run_table_experiment(const ExperimentSpec& spec) {
  if (spec.snr_db.empty() || spec.alternatives.empty())
    throw ValidationError("bench: table experiment needs SNR and K lists");
  std::vector<std::pair<std::optional<double>, int>> scenarios;
  for (double snr : spec.snr_db)
    for (int k : spec.alternatives) scenarios.emplace_back(snr, k);
  return detail::run_sweep(spec, scenarios);
}

/// Wide CSV: one row per method x scenario.
inline void write_result_csv(const ResultTable& table, std::ostream& out) {
  out << "method,scenario,replications,failures,tau_mean,tau_std,rho_mean,rho_std,mae_mean,"
         "mae_std\n";
  for (const ResultCell& c : table.rows) {
    out << method_name(c.method) << ",\"" << c.scenario << "\"," << c.replications << ","
        << c.failures << "," << detail::format_double(c.tau_mean) << ","
        << detail::format_double(c.tau_std) << "," << detail::format_double(c.rho_mean) << ","
        << detail::format_double(c.rho_std) << "," << detail::format_double(c.mae_mean) << ","
        << detail::format_double(c.mae_std) << "\n";
  }
}

/// Long (plot-ready) CSV: one value per row.
inline void write_result_long_csv(const ResultTable& table, std::ostream& out) {
  out << "scenario,method,metric,value\n";
  for (const ResultCell& c : table.rows) {
    const std::pair<const char*, double> fields[] = {
        {"tau_mean", c.tau_mean},   {"tau_std", c.tau_std}, {"rho_mean", c.rho_mean},
        {"rho_std", c.rho_std},     {"mae_mean", c.mae_mean}, {"mae_std", c.mae_std},
        {"failures", static_cast<double>(c.failures)},
    };
    for (const auto& [metric, value] : fields)
      out << "\"" << c.scenario << "\"," << method_name(c.method) << "," << metric << ","
          << detail::format_double(value) << "\n";
  }
}

}  // namespace icatopsis
