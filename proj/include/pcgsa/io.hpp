#pragma once

// CSV and JSON serialization of designs, surrogates and sensitivity reports.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "pcgsa/error.hpp"
#include "pcgsa/multi_index.hpp"
#include "pcgsa/probability.hpp"
#include "pcgsa/regression.hpp"
#include "pcgsa/sensitivity.hpp"

namespace pcgsa::io {

using nlohmann::json;

/// Full-precision scientific notation; "nan" marks a missing value.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s.empty() || s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(path.string() + " is empty");
  t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    cells.resize(t.header.size());
    t.rows.push_back(std::move(cells));
  }
  return t;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidArgument("failed writing " + path.string());
}

class CsvWriter {
public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) text_ += ',';
      text_ += cells[k];
    }
    text_ += '\n';
  }
  const std::string& str() const { return text_; }
  void save(const std::filesystem::path& path) const { write_text(path, text_); }

private:
  std::string text_;
};

/// Matrix with named columns; NaN entries are written as "nan".
inline void write_matrix(const std::filesystem::path& path, const std::vector<std::string>& names,
                         const Eigen::MatrixXd& m) {
  require(names.size() == static_cast<std::size_t>(m.cols()), "column names do not match the matrix");
  CsvWriter w(names);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> cells;
    for (Eigen::Index j = 0; j < m.cols(); ++j) cells.push_back(format_double(m(i, j)));
    w.row(cells);
  }
  w.save(path);
}

inline Eigen::MatrixXd read_matrix(const std::filesystem::path& path, std::vector<std::string>* names = nullptr) {
  const Table t = read_csv(path);
  if (names) *names = t.header;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.header.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.header.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(t.rows[i][j]);
  return m;
}

// Random vectors ------------------------------------------------------------

inline json to_json(const NamedMarginal& m) {
  if (m.marginal.kind() == DistributionKind::uniform)
    return {{"name", m.name}, {"distribution", "uniform"}, {"lower", m.marginal.first()}, {"upper", m.marginal.second()}};
  return {{"name", m.name}, {"distribution", "gaussian"}, {"mean", m.marginal.first()}, {"sd", m.marginal.second()}};
}

inline json to_json(const RandomVector& rv) {
  json j = json::array();
  for (const auto& m : rv.marginals()) j.push_back(to_json(m));
  return j;
}

inline RandomVector random_vector_from_json(const json& j) {
  require(j.is_array(), "variables must be a list");
  std::vector<NamedMarginal> out;
  for (const auto& v : j) {
    const std::string name = v.at("name");
    const std::string kind = v.at("distribution");
    if (kind == "uniform")
      out.push_back({name, MarginalDistribution::uniform(v.at("lower"), v.at("upper"))});
    else if (kind == "gaussian" || kind == "normal")
      out.push_back({name, MarginalDistribution::gaussian(v.at("mean"), v.at("sd"))});
    else
      throw InvalidArgument("unsupported distribution '" + kind + "' for " + name);
  }
  return RandomVector(std::move(out));
}

// Surrogates ----------------------------------------------------------------

inline json to_json(const SparsePce& pce, const std::optional<FitDiagnostics>& diag = std::nullopt) {
  json j;
  j["inputs"] = to_json(pce.inputs);
  j["response_scale"] = std::string(to_string(pce.scale));
  j["degree"] = pce.degree;
  j["q"] = pce.q;
  j["candidate_size"] = pce.candidate_size;
  j["training_size"] = pce.training_size;
  j["active_size"] = pce.active.size();
  j["sparsity_index"] = pce.sparsity_index();
  j["err_loo"] = pce.err_loo;
  j["err_loo_corrected"] = pce.err_loo_corrected;
  j["err_gen"] = pce.err_gen ? json(*pce.err_gen) : json(nullptr);
  json terms = json::array();
  for (std::size_t k = 0; k < pce.active.size(); ++k)
    terms.push_back({{"index", pce.active[k].to_string()}, {"coefficient", pce.coefficients(static_cast<Eigen::Index>(k))}});
  j["terms"] = terms;
  if (diag) {
    json rows = json::array();
    for (const auto& r : diag->rows)
      rows.push_back({{"p", r.p},
                      {"candidate_size", r.candidate_size},
                      {"active_size", r.active_size},
                      {"err_loo", r.ok ? json(r.err_loo) : json(nullptr)},
                      {"err_loo_corrected", r.ok ? json(r.err_loo_corrected) : json(nullptr)},
                      {"message", r.message}});
    j["degree_sweep"] = rows;
  }
  return j;
}

inline MultiIndex parse_multi_index(const std::string& s) {
  if (s == "0") return {};
  std::vector<MultiIndex::Term> terms;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw InvalidArgument("bad multi-index term '" + tok + "'");
    terms.push_back({static_cast<std::uint32_t>(std::stoul(tok.substr(0, colon))),
                     static_cast<std::uint32_t>(std::stoul(tok.substr(colon + 1)))});
  }
  return MultiIndex(std::move(terms));
}

inline SparsePce pce_from_json(const json& j) {
  RandomVector rv = random_vector_from_json(j.at("inputs"));
  std::vector<std::pair<MultiIndex, double>> terms;
  for (const auto& t : j.at("terms")) terms.emplace_back(parse_multi_index(t.at("index")), t.at("coefficient"));
  std::vector<MultiIndex> indices;
  for (const auto& t : terms) indices.push_back(t.first);
  const unsigned p = j.at("degree");
  const double q = j.at("q");
  MultiIndexSet set(rv.size(), indices, Truncation{p, q});
  Eigen::VectorXd c(static_cast<Eigen::Index>(set.size()));
  for (const auto& [m, v] : terms) {
    const auto pos = std::lower_bound(set.begin(), set.end(), m, graded_less) - set.begin();
    c(static_cast<Eigen::Index>(pos)) = v;
  }
  SparsePce pce{std::move(rv), std::move(set), std::move(c)};
  pce.scale = j.at("response_scale") == "logarithmic" ? ResponseScale::logarithmic : ResponseScale::original;
  pce.degree = p;
  pce.q = q;
  pce.candidate_size = j.at("candidate_size");
  pce.training_size = j.at("training_size");
  pce.err_loo = j.at("err_loo");
  pce.err_loo_corrected = j.at("err_loo_corrected");
  if (!j.at("err_gen").is_null()) pce.err_gen = j.at("err_gen").get<double>();
  return pce;
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// Sensitivity reports -------------------------------------------------------

inline json to_json(const SobolReport& r) {
  json j;
  j["response_scale"] = std::string(to_string(r.scale));
  j["mean"] = r.mean;
  j["total_variance"] = r.total_variance;
  j["threshold"] = r.threshold;
  json vars = json::array();
  for (std::size_t i = 0; i < r.names.size(); ++i)
    vars.push_back({{"name", r.names[i]},
                    {"first_order", r.first_order(static_cast<Eigen::Index>(i))},
                    {"total", r.total(static_cast<Eigen::Index>(i))},
                    {"important", static_cast<bool>(r.important[i])}});
  j["variables"] = vars;
  json pairs = json::array();
  for (const auto& [uv, s] : r.second_order)
    pairs.push_back({{"first", r.names[uv.first]}, {"second", r.names[uv.second]}, {"index", s}});
  j["second_order"] = pairs;
  json groups = json::array();
  for (const auto& [label, s] : r.grouped_sums) groups.push_back({{"group", label}, {"first_order_sum", s}});
  j["grouped_sums"] = groups;
  json top = json::array();
  for (auto i : r.top(10)) top.push_back(r.names[i]);
  j["top10_total"] = top;
  j["important_count"] = r.count_important();
  return j;
}

/// sobol_indices.csv, sobol_second.csv, top10_total.csv, grouped_sums.csv.
inline void write_sobol_tables(const std::filesystem::path& dir, const SobolReport& r) {
  CsvWriter idx({"variable", "first_order", "total", "important"});
  for (std::size_t i = 0; i < r.names.size(); ++i)
    idx.row({r.names[i], format_double(r.first_order(static_cast<Eigen::Index>(i))),
             format_double(r.total(static_cast<Eigen::Index>(i))), r.important[i] ? "1" : "0"});
  idx.save(dir / "sobol_indices.csv");

  CsvWriter sec({"first", "second", "index"});
  for (const auto& [uv, s] : r.second_order) sec.row({r.names[uv.first], r.names[uv.second], format_double(s)});
  sec.save(dir / "sobol_second.csv");

  CsvWriter top({"rank", "variable", "total", "first_order"});
  std::size_t rank = 1;
  for (auto i : r.top(10))
    top.row({std::to_string(rank++), r.names[i], format_double(r.total(static_cast<Eigen::Index>(i))),
             format_double(r.first_order(static_cast<Eigen::Index>(i)))});
  top.save(dir / "top10_total.csv");

  CsvWriter grp({"group", "first_order_sum"});
  for (const auto& [label, s] : r.grouped_sums) grp.row({label, format_double(s)});
  grp.save(dir / "grouped_sums.csv");
}

inline void write_effect(const std::filesystem::path& path, const UnivariateEffect& e, double mean) {
  CsvWriter w({"x", "effect", "conditional_mean"});
  for (std::size_t k = 0; k < e.grid.size(); ++k)
    w.row({format_double(e.grid[k]), format_double(e.values[k]), format_double(e.values[k] + mean)});
  w.save(path);
}

}  // namespace pcgsa::io
