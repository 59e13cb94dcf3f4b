// Decision-matrix ingestion and serialization. On disk, decision data is
// alternatives-as-rows (first row = criterion labels, first column =
// alternative labels); in memory it is criteria-as-rows. The boundary
// converts.
#pragma once

#include "icatopsis/bench.hpp"
#include "icatopsis/core.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace icatopsis {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty())
    throw IoError("io: non-numeric cell \"" + cell + "\" at row " + std::to_string(row + 1) +
                  ", column " + std::to_string(col + 1));
  return value;
}

inline void check_unique(const std::vector<std::string>& labels, const char* what) {
  std::set<std::string> seen;
  for (const auto& label : labels)
    if (!seen.insert(label).second)
      throw IoError("io: duplicate " + std::string(what) + " label \"" + label + "\"");
}

}  // namespace detail

/// Parses a decision CSV (alternatives as rows) into the criteria-as-rows
/// in-memory layout. Rejects ragged rows, blank or non-numeric cells and
/// duplicate labels.
inline DecisionMatrix read_decision_csv(std::istream& in) {
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    rows.push_back(detail::split_csv_line(line));
  }
  if (rows.empty()) throw IoError("io: empty input");
  const std::size_t width = rows.front().size();
  if (width < 2) throw IoError("io: header must name at least one criterion");
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r].size() != width)
      throw IoError("io: ragged row " + std::to_string(r + 1) + " has " +
                    std::to_string(rows[r].size()) + " cells, expected " + std::to_string(width));

  DecisionMatrix d;
  d.criterion_ids.assign(rows.front().begin() + 1, rows.front().end());
  const std::size_t m = d.criterion_ids.size();
  const std::size_t k = rows.size() - 1;
  if (k < 2)
    throw IoError("io: need at least 2 alternatives, got " + std::to_string(k));
  d.values.resize(static_cast<Index>(m), static_cast<Index>(k));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    d.alternative_ids.push_back(rows[r][0]);
    for (std::size_t c = 1; c < width; ++c)
      d.values(static_cast<Index>(c - 1), static_cast<Index>(r - 1)) =
          detail::parse_cell(rows[r][c], r, c);
  }
  detail::check_unique(d.criterion_ids, "criterion");
  detail::check_unique(d.alternative_ids, "alternative");
  return d;
}

inline DecisionMatrix read_decision_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("io: cannot open " + path);
  return read_decision_csv(in);
}

/// Writes decision data back to the on-disk layout (alternatives as rows)
/// with round-trip-safe numeric formatting.
inline void write_decision_csv(const DecisionMatrix& matrix, std::ostream& out) {
  out << "alternative";
  for (const auto& id : matrix.criterion_ids) out << "," << id;
  out << "\n";
  out << std::setprecision(17);
  for (Index k = 0; k < matrix.alternatives(); ++k) {
    out << matrix.alternative_ids[static_cast<std::size_t>(k)];
    for (Index m = 0; m < matrix.criteria(); ++m) out << "," << matrix.values(m, k);
    out << "\n";
  }
}

/// Emits the ranking as CSV: position, alternative label, closeness with 9
/// fractional digits, best first.
inline void write_ranking_csv(const RankingOutcome& outcome,
                              const std::vector<std::string>& labels, std::ostream& out) {
  if (static_cast<Index>(labels.size()) != outcome.closeness.size())
    throw ValidationError("io: label count does not match ranked alternatives");
  out << "rank,alternative,closeness\n";
  out << std::fixed << std::setprecision(9);
  for (std::size_t pos = 0; pos < outcome.order.size(); ++pos) {
    const int idx = outcome.order[pos];
    out << pos + 1 << "," << labels[static_cast<std::size_t>(idx)] << ","
        << outcome.closeness[idx] << "\n";
  }
  out.unsetf(std::ios_base::floatfield);
}

// --- JSON fixtures ---

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw IoError("io: expected a non-empty matrix array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.front().size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (static_cast<Index>(j[static_cast<std::size_t>(i)].size()) != cols)
      throw IoError("io: ragged matrix row " + std::to_string(i + 1));
    for (Index c = 0; c < cols; ++c)
      m(i, c) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

}  // namespace detail

inline nlohmann::json to_json(const MixingInstance& inst) {
  nlohmann::json j;
  j["latents"] = detail::matrix_to_json(inst.latents);
  j["mixing"] = detail::matrix_to_json(inst.mixing);
  j["noise"] = detail::matrix_to_json(inst.noise);
  j["observed"] = detail::matrix_to_json(inst.observed);
  if (inst.snr_db)
    j["snr_db"] = *inst.snr_db;
  else
    j["snr_db"] = nullptr;
  j["seed"] = inst.seed;
  return j;
}

inline MixingInstance mixing_instance_from_json(const nlohmann::json& j) {
  MixingInstance inst;
  inst.latents = detail::matrix_from_json(j.at("latents"));
  inst.mixing = detail::matrix_from_json(j.at("mixing"));
  inst.noise = detail::matrix_from_json(j.at("noise"));
  inst.observed = detail::matrix_from_json(j.at("observed"));
  if (!j.at("snr_db").is_null()) inst.snr_db = j.at("snr_db").get<double>();
  inst.seed = j.value("seed", std::uint64_t{0});
  return inst;
}

inline nlohmann::json to_json(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ResultCell& c : table.rows) {
    nlohmann::json row;
    row["method"] = method_name(c.method);
    row["scenario"] = c.scenario;
    row["replications"] = c.replications;
    row["failures"] = c.failures;
    row["tau_mean"] = c.tau_mean;
    row["tau_std"] = c.tau_std;
    row["rho_mean"] = c.rho_mean;
    row["rho_std"] = c.rho_std;
    row["mae_mean"] = c.mae_mean;
    row["mae_std"] = c.mae_std;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ResultTable result_table_from_json(const nlohmann::json& j) {
  ResultTable table;
  for (const auto& row : j) {
    ResultCell c;
    const std::string name = row.at("method").get<std::string>();
    bool found = false;
    for (int m = 0; m <= static_cast<int>(Method::utopic_ica_topsis_m); ++m) {
      if (name == method_name(static_cast<Method>(m))) {
        c.method = static_cast<Method>(m);
        found = true;
        break;
      }
    }
    if (!found) throw IoError("io: unknown method \"" + name + "\"");
    c.scenario = row.at("scenario").get<std::string>();
    c.replications = row.at("replications").get<int>();
    c.failures = row.at("failures").get<int>();
    c.tau_mean = row.at("tau_mean").get<double>();
    c.tau_std = row.at("tau_std").get<double>();
    c.rho_mean = row.at("rho_mean").get<double>();
    c.rho_std = row.at("rho_std").get<double>();
    c.mae_mean = row.at("mae_mean").get<double>();
    c.mae_std = row.at("mae_std").get<double>();
    table.rows.push_back(std::move(c));
  }
  return table;
}

}  // namespace icatopsis
