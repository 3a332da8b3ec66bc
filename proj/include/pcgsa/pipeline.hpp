#pragma once

// Run configuration, model adapters and the sample -> evaluate -> fit ->
// sensitivity steps behind the command-line tool.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "pcgsa/aquifer/model.hpp"
#include "pcgsa/benchmarks.hpp"
#include "pcgsa/error.hpp"
#include "pcgsa/io.hpp"
#include "pcgsa/regression.hpp"
#include "pcgsa/sampling.hpp"
#include "pcgsa/sensitivity.hpp"

namespace pcgsa::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct ModelConfig {
  std::string type = "demo";  // demo | ishigami | sobol_g | external
  std::optional<std::string> section_file;
  unsigned refinement = 1;
  double ishigami_a = 7.0;
  double ishigami_b = 0.1;
  std::vector<double> g_coefficients{0.0, 1.0, 4.5, 9.0, 99.0, 99.0, 99.0, 99.0};
  std::string command;  // external: template with {row} {params} {response} {workdir}
  std::string workdir = "external";
};

struct DesignConfig {
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::size_t n_enrich = 0;
  std::uint64_t enrich_seed = 2;
};

struct SobolConfig {
  double threshold = 0.01;
  std::map<std::string, std::string> grouping;  // empty: label = name prefix
  std::size_t effect_points = 101;
};

struct StudyConfig {
  std::size_t subset_size = 200;
  std::size_t repetitions = 100;
  std::uint64_t seed = 3;
};

struct RunConfig {
  std::optional<RandomVector> variables;
  ModelConfig model;
  DesignConfig design;
  FitOptions fit;
  SobolConfig sobol;
  StudyConfig study;
  unsigned workers = 1;
  fs::path output_dir = "pcgsa_out";
  std::string hash;
};

inline ResponseScale scale_from_string(const std::string& s) {
  if (s == "original") return ResponseScale::original;
  if (s == "log" || s == "logarithmic") return ResponseScale::logarithmic;
  throw InvalidArgument("response scale must be 'original' or 'logarithmic', got '" + s + "'");
}

inline RunConfig parse_config(const json& j, const fs::path& base_dir = ".") {
  static const std::vector<std::string> known{"variables", "model", "design", "fit", "sobol", "study",
                                              "workers", "output_dir"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw InvalidArgument("unknown config key '" + k + "'");
  RunConfig c;
  c.hash = hex64(fnv1a(j.dump()));
  if (j.contains("variables")) c.variables = io::random_vector_from_json(j.at("variables"));
  if (j.contains("model")) {
    const auto& m = j.at("model");
    c.model.type = m.value("type", c.model.type);
    if (m.contains("section")) c.model.section_file = (base_dir / m.at("section").get<std::string>()).string();
    c.model.refinement = m.value("refinement", c.model.refinement);
    if (c.model.type == "ishigami") {
      c.model.ishigami_a = m.value("a", c.model.ishigami_a);
      c.model.ishigami_b = m.value("b", c.model.ishigami_b);
    }
    if (c.model.type == "sobol_g" && m.contains("a")) c.model.g_coefficients = m.at("a").get<std::vector<double>>();
    c.model.command = m.value("command", c.model.command);
    c.model.workdir = m.value("workdir", c.model.workdir);
  }
  if (j.contains("design")) {
    const auto& d = j.at("design");
    c.design.n = d.value("n", c.design.n);
    c.design.seed = d.value("seed", c.design.seed);
    c.design.n_enrich = d.value("n_enrich", c.design.n_enrich);
    c.design.enrich_seed = d.value("enrich_seed", c.design.enrich_seed);
  }
  if (j.contains("fit")) {
    const auto& f = j.at("fit");
    c.fit.q = f.value("q", c.fit.q);
    c.fit.p_min = f.value("p_min", c.fit.p_min);
    c.fit.p_max = f.value("p_max", c.fit.p_max);
    c.fit.scale = scale_from_string(f.value("scale", std::string("original")));
    c.fit.early_stop = f.value("early_stop", c.fit.early_stop);
    if (f.contains("max_terms") && !f.at("max_terms").is_null()) c.fit.max_terms = f.at("max_terms").get<std::size_t>();
  }
  if (j.contains("sobol")) {
    const auto& s = j.at("sobol");
    c.sobol.threshold = s.value("threshold", c.sobol.threshold);
    if (s.contains("grouping") && s.at("grouping").is_object())
      c.sobol.grouping = s.at("grouping").get<std::map<std::string, std::string>>();
    c.sobol.effect_points = s.value("effect_points", c.sobol.effect_points);
  }
  if (j.contains("study")) {
    const auto& s = j.at("study");
    c.study.subset_size = s.value("subset_size", c.study.subset_size);
    c.study.repetitions = s.value("repetitions", c.study.repetitions);
    c.study.seed = s.value("seed", c.study.seed);
  }
  c.workers = j.value("workers", c.workers);
  if (j.contains("output_dir")) c.output_dir = base_dir / j.at("output_dir").get<std::string>();

  static const std::vector<std::string> models{"demo", "ishigami", "sobol_g", "external"};
  if (std::find(models.begin(), models.end(), c.model.type) == models.end())
    throw InvalidArgument("unknown model type '" + c.model.type + "'");
  if (c.model.type == "external") {
    require(c.variables.has_value(), "external models need a 'variables' list");
    require(!c.model.command.empty(), "external models need a 'command' template");
  } else {
    require(!c.variables.has_value(), "built-in models define their own variables; drop 'variables'");
  }
  require(c.fit.p_min >= 1 && c.fit.p_min <= c.fit.p_max, "fit: need 1 <= p_min <= p_max");
  require(c.fit.q > 0.0 && c.fit.q <= 1.0, "fit: q must lie in (0, 1]");
  require(c.sobol.threshold >= 0.0 && c.sobol.threshold <= 1.0, "sobol: threshold must lie in [0, 1]");
  require(c.sobol.effect_points >= 2, "sobol: effect_points must be >= 2");
  require(c.workers >= 1, "workers must be >= 1");
  require(c.model.refinement >= 1, "model: refinement must be >= 1");
  return c;
}

inline RunConfig load_config(const fs::path& path) {
  const json j = io::read_json(path);
  return parse_config(j, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

// Models --------------------------------------------------------------------

class Model {
public:
  virtual ~Model() = default;
  virtual RandomVector inputs() const = 0;
  /// Response for design row `row`; throws on failure. Must be thread-safe.
  virtual double evaluate(std::size_t row, const Eigen::VectorXd& x) const = 0;
  virtual json describe() const = 0;
};

class DemoModel : public Model {
public:
  explicit DemoModel(const ModelConfig& c)
      : model_(c.section_file ? aquifer::load_section(*c.section_file) : aquifer::default_section(), c.refinement) {}
  RandomVector inputs() const override { return model_.parameter_distribution(); }
  double evaluate(std::size_t, const Eigen::VectorXd& x) const override { return model_.evaluate(x); }
  json describe() const override {
    return {{"type", "demo"},
            {"grid", {model_.grid().nx(), model_.grid().nz()}},
            {"refinement", model_.refinement()},
            {"response", "mean life expectancy over the target zone"},
            {"time_unit", "year"},
            {"seconds_per_year", model_.section().seconds_per_year},
            {"boundary_heads", "H(x) = mean + gradH * (x - L/2) per zone"}};
  }
  const aquifer::CrossSectionModel& model() const { return model_; }

private:
  aquifer::CrossSectionModel model_;
};

class IshigamiModel : public Model {
public:
  explicit IshigamiModel(const ModelConfig& c) : f_{c.ishigami_a, c.ishigami_b} {}
  RandomVector inputs() const override { return benchmarks::Ishigami::inputs(); }
  double evaluate(std::size_t, const Eigen::VectorXd& x) const override { return f_(x); }
  json describe() const override { return {{"type", "ishigami"}, {"a", f_.a}, {"b", f_.b}}; }

private:
  benchmarks::Ishigami f_;
};

class SobolGModel : public Model {
public:
  explicit SobolGModel(const ModelConfig& c) : f_{c.g_coefficients} {}
  RandomVector inputs() const override { return f_.inputs(); }
  double evaluate(std::size_t, const Eigen::VectorXd& x) const override { return f_(x); }
  json describe() const override { return {{"type", "sobol_g"}, {"a", f_.a}}; }

private:
  benchmarks::SobolG f_;
};

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

/// File exchange: writes <workdir>/row_<i>/params.txt ("name value" lines),
/// runs the command template, reads one number from response.txt.
class ExternalModel : public Model {
public:
  ExternalModel(const ModelConfig& c, RandomVector rv, fs::path base)
      : rv_(std::move(rv)), command_(c.command), workdir_(base / c.workdir) {}
  RandomVector inputs() const override { return rv_; }
  double evaluate(std::size_t row, const Eigen::VectorXd& x) const override {
    const fs::path dir = workdir_ / ("row_" + std::to_string(row));
    fs::create_directories(dir);
    const fs::path params = dir / "params.txt";
    const fs::path response = dir / "response.txt";
    std::string text;
    for (std::size_t k = 0; k < rv_.size(); ++k)
      text += rv_[k].name + " " + io::format_double(x(static_cast<Eigen::Index>(k))) + "\n";
    io::write_text(params, text);
    fs::remove(response);
    std::string cmd = replace_all(command_, "{row}", std::to_string(row));
    cmd = replace_all(cmd, "{params}", params.string());
    cmd = replace_all(cmd, "{response}", response.string());
    cmd = replace_all(cmd, "{workdir}", dir.string());
    const int status = std::system(cmd.c_str());
    if (status != 0) throw NumericalError("external command exited with status " + std::to_string(status));
    std::ifstream in(response);
    if (!in) throw NumericalError("external command wrote no response file");
    std::string tok;
    in >> tok;
    const double v = io::parse_double(tok);
    if (!std::isfinite(v)) throw NumericalError("external response is not a finite number");
    return v;
  }
  json describe() const override { return {{"type", "external"}, {"command", command_}}; }

private:
  RandomVector rv_;
  std::string command_;
  fs::path workdir_;
};

inline std::unique_ptr<Model> make_model(const RunConfig& c) {
  if (c.model.type == "demo") return std::make_unique<DemoModel>(c.model);
  if (c.model.type == "ishigami") return std::make_unique<IshigamiModel>(c.model);
  if (c.model.type == "sobol_g") return std::make_unique<SobolGModel>(c.model);
  return std::make_unique<ExternalModel>(c.model, *c.variables, c.output_dir);
}

inline json provenance(const RunConfig& c, const Model& m) {
  return {{"tool", "pcgsa"},
          {"version", kVersion},
          {"config_hash", c.hash},
          {"seeds", {{"design", c.design.seed}, {"enrichment", c.design.enrich_seed}, {"study", c.study.seed}}},
          {"response_scale", std::string(to_string(c.fit.scale))},
          {"model", m.describe()}};
}

// Steps ---------------------------------------------------------------------

struct Paths {
  fs::path dir;
  fs::path design() const { return dir / "design.csv"; }
  fs::path enrichment() const { return dir / "enrichment.csv"; }
  fs::path responses(bool enrich = false) const {
    return dir / (enrich ? "enrichment_responses.csv" : "responses.csv");
  }
  fs::path partial(bool enrich = false) const {
    return dir / (enrich ? "enrichment_responses.partial.csv" : "responses.partial.csv");
  }
  fs::path failures(bool enrich = false) const {
    return dir / (enrich ? "enrichment_failures.csv" : "failures.csv");
  }
};

inline ExperimentalDesign load_design(const fs::path& path, const RandomVector& rv) {
  std::vector<std::string> names;
  ExperimentalDesign d;
  d.points = io::read_matrix(path, &names);
  require(names == rv.names(), path.string() + ": columns do not match the model variables");
  d.id = path.stem().string();
  return d;
}

/// Writes design.csv (and enrichment.csv when n_enrich > 0).
inline void cmd_sample(const RunConfig& c) {
  const auto model = make_model(c);
  const RandomVector rv = model->inputs();
  const Paths paths{c.output_dir};
  fs::create_directories(paths.dir);
  if (c.design.n == 0) {
    io::CsvWriter(rv.names()).save(paths.design());
    return;
  }
  const ExperimentalDesign d = lhs(c.design.n, rv, c.design.seed);
  io::write_matrix(paths.design(), rv.names(), d.points);
  if (c.design.n_enrich > 0) {
    const ExperimentalDesign e = nested_lhs_enrich(d, c.design.n_enrich, rv, c.design.enrich_seed);
    io::write_matrix(paths.enrichment(), rv.names(), e.points);
  }
}

struct EvaluateSummary {
  std::size_t rows = 0;
  std::size_t computed = 0;
  std::size_t reused = 0;
  std::size_t failed = 0;
};

/// Evaluates missing rows of design.csv (or enrichment.csv). Completed rows
/// are appended to a partial log as they finish, so an interrupted run
/// resumes where it stopped.
inline EvaluateSummary cmd_evaluate(const RunConfig& c, bool enrichment = false) {
  const auto model = make_model(c);
  const RandomVector rv = model->inputs();
  const Paths paths{c.output_dir};
  const fs::path design_path = enrichment ? paths.enrichment() : paths.design();
  const ExperimentalDesign d = load_design(design_path, rv);
  const std::size_t n = d.size();
  std::vector<double> y(n, std::numeric_limits<double>::quiet_NaN());

  if (fs::exists(paths.responses(enrichment))) {
    const auto prev = io::read_matrix(paths.responses(enrichment));
    if (static_cast<std::size_t>(prev.rows()) == n && prev.cols() == 1)
      for (std::size_t i = 0; i < n; ++i) y[i] = prev(static_cast<Eigen::Index>(i), 0);
  }
  if (fs::exists(paths.partial(enrichment))) {
    const auto log = io::read_csv(paths.partial(enrichment));
    for (const auto& row : log.rows) {
      const auto i = static_cast<std::size_t>(std::stoull(row.at(0)));
      if (i < n) y[i] = io::parse_double(row.at(1));
    }
  }

  EvaluateSummary s;
  s.rows = n;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < n; ++i)
    if (std::isnan(y[i]))
      todo.push_back(i);
    else
      ++s.reused;

  std::vector<std::string> errors(n);
  if (!todo.empty()) {
    const bool fresh_log = !fs::exists(paths.partial(enrichment));
    std::ofstream log(paths.partial(enrichment), std::ios::app);
    if (fresh_log) log << "row,response\n" << std::flush;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k = next++; k < todo.size(); k = next++) {
        const std::size_t i = todo[k];
        try {
          const double v = model->evaluate(i, d.points.row(static_cast<Eigen::Index>(i)).transpose());
          if (!std::isfinite(v)) throw NumericalError("response is not finite");
          std::lock_guard<std::mutex> lock(mu);
          y[i] = v;
          log << i << "," << io::format_double(v) << "\n" << std::flush;
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(mu);
          errors[i] = e.what();
        }
      }
    };
    const unsigned nw = std::max(1u, std::min<unsigned>(c.workers, static_cast<unsigned>(todo.size())));
    if (nw == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < nw; ++w) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
  }

  io::CsvWriter out({"response"});
  io::CsvWriter fail({"row", "message"});
  for (std::size_t i = 0; i < n; ++i) {
    out.row({io::format_double(y[i])});
    if (!errors[i].empty()) {
      fail.row({std::to_string(i), "\"" + replace_all(errors[i], "\"", "'") + "\""});
      ++s.failed;
    } else if (std::find(todo.begin(), todo.end(), i) != todo.end()) {
      ++s.computed;
    }
  }
  out.save(paths.responses(enrichment));
  fail.save(paths.failures(enrichment));
  fs::remove(paths.partial(enrichment));
  return s;
}

/// Rows of a design with a response present.
inline std::pair<ExperimentalDesign, Eigen::VectorXd> load_evaluated(const RunConfig& c, const RandomVector& rv,
                                                                     bool enrichment, std::size_t* dropped = nullptr) {
  const Paths paths{c.output_dir};
  const ExperimentalDesign d = load_design(enrichment ? paths.enrichment() : paths.design(), rv);
  const auto r = io::read_matrix(paths.responses(enrichment));
  require(static_cast<std::size_t>(r.rows()) == d.size() && r.cols() == 1,
          "responses do not match the design; run 'evaluate' first");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    if (!std::isnan(r(i, 0))) keep.push_back(i);
  ExperimentalDesign out;
  out.points.resize(static_cast<Eigen::Index>(keep.size()), d.points.cols());
  Eigen::VectorXd y(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.points.row(static_cast<Eigen::Index>(k)) = d.points.row(keep[k]);
    y(static_cast<Eigen::Index>(k)) = r(keep[k], 0);
  }
  out.id = d.id;
  if (dropped) *dropped = d.size() - keep.size();
  return {std::move(out), std::move(y)};
}

struct FitRequest {
  std::optional<ResponseScale> scale;  // overrides the config
  bool joint = false;                  // fit on design + enrichment
  bool validate = true;                // use the enrichment as validation set when not joint
  std::string name = "pce";            // output <name>.json
};

inline SparsePce cmd_fit(const RunConfig& c, const FitRequest& req = {}) {
  const auto model = make_model(c);
  const RandomVector rv = model->inputs();
  const Paths paths{c.output_dir};
  std::size_t dropped = 0;
  auto [design, y] = load_evaluated(c, rv, false, &dropped);
  const bool has_enrichment = fs::exists(paths.enrichment()) && fs::exists(paths.responses(true));
  std::optional<ExperimentalDesign> validation;
  if (has_enrichment) {
    auto [e, ye] = load_evaluated(c, rv, true);
    if (req.joint) {
      ExperimentalDesign joined = join_designs(design, e);
      Eigen::VectorXd yy(y.size() + ye.size());
      yy << y, ye;
      design = std::move(joined);
      y = std::move(yy);
    } else if (req.validate) {
      e.responses = ye;
      validation = std::move(e);
    }
  } else {
    require(!req.joint, "joint fit needs an evaluated enrichment design");
  }
  FitOptions options = c.fit;
  if (req.scale) options.scale = *req.scale;
  auto [pce, diag] = adaptive_fit(design, y, rv, options);
  if (validation) pce.err_gen = generalization_error(pce, *validation);

  json j = io::to_json(pce, diag);
  RunConfig pc = c;
  pc.fit.scale = options.scale;
  j["provenance"] = provenance(pc, *model);
  j["provenance"]["training_rows"] = design.size();
  j["provenance"]["joint"] = req.joint;
  j["provenance"]["validation_rows"] = validation ? json(validation->size()) : json(nullptr);
  j["provenance"]["dropped_rows"] = dropped;
  io::write_json(paths.dir / (req.name + ".json"), j);
  return pce;
}

inline std::vector<std::string> group_labels(const RunConfig& c, const RandomVector& rv,
                                             const std::map<std::string, std::string>& overrides) {
  for (const auto& m : {c.sobol.grouping, overrides})
    for (const auto& entry : m) rv.index_of(entry.first);  // every grouped variable must exist
  std::vector<std::string> labels;
  for (const auto& name : rv.names()) {
    if (auto it = overrides.find(name); it != overrides.end())
      labels.push_back(it->second);
    else if (auto jt = c.sobol.grouping.find(name); jt != c.sobol.grouping.end())
      labels.push_back(jt->second);
    else
      labels.push_back(default_group_label(name));
  }
  return labels;
}

/// Grouping file: CSV with columns variable,group.
inline std::map<std::string, std::string> read_grouping(const fs::path& path) {
  const auto t = io::read_csv(path);
  require(t.header.size() >= 2, "grouping file needs columns variable,group");
  std::map<std::string, std::string> m;
  for (const auto& row : t.rows) m[row.at(0)] = row.at(1);
  return m;
}

/// Sobol' report, top-10 table, grouped sums and univariate effects of a fitted PCE.
inline SobolReport cmd_sobol(const RunConfig& c, const fs::path& pce_path, const fs::path& out_dir,
                             const std::map<std::string, std::string>& grouping = {}) {
  const json pj = io::read_json(pce_path);
  const SparsePce pce = io::pce_from_json(pj);
  const auto labels = group_labels(c, pce.inputs, grouping);
  const SobolReport r = sobol_report(pce, c.sobol.threshold, labels);
  fs::create_directories(out_dir / "effects");
  json j = io::to_json(r);
  j["partition_sum"] = sobol_partition_sum(pce);
  if (pj.contains("provenance")) j["provenance"] = pj.at("provenance");
  j["source"] = pce_path.filename().string();
  io::write_json(out_dir / "sobol.json", j);
  io::write_sobol_tables(out_dir, r);
  for (std::size_t i = 0; i < pce.inputs.size(); ++i) {
    const auto grid = effect_grid(pce.inputs[i].marginal, c.sobol.effect_points);
    io::write_effect(out_dir / "effects" / (pce.inputs[i].name + ".csv"), univariate_effect(pce, i, grid), r.mean);
  }
  return r;
}

/// Repeated random-subset fits; per-repetition totals and box statistics.
inline SubsampleStudy cmd_study(const RunConfig& c) {
  const auto model = make_model(c);
  const RandomVector rv = model->inputs();
  auto [design, y] = load_evaluated(c, rv, false);
  const SubsampleStudy s = repeated_subsample_study(design, y, rv, c.fit, c.study.subset_size,
                                                    c.study.repetitions, c.study.seed, c.workers);
  const auto full = adaptive_fit(design, y, rv, c.fit);
  const Eigen::VectorXd full_total = sobol_total(full.first);

  std::vector<std::string> header{"repetition", "degree"};
  for (const auto& n : rv.names()) header.push_back(n);
  io::CsvWriter totals(header);
  for (Eigen::Index r = 0; r < s.totals.rows(); ++r) {
    std::vector<std::string> row{std::to_string(r), std::to_string(s.degrees[static_cast<std::size_t>(r)])};
    for (Eigen::Index i = 0; i < s.totals.cols(); ++i) row.push_back(io::format_double(s.totals(r, i)));
    totals.row(row);
  }
  totals.save(c.output_dir / "study_totals.csv");

  io::CsvWriter stats({"variable", "min", "q25", "median", "q75", "max", "full_design_total"});
  for (std::size_t i = 0; i < rv.size(); ++i) {
    const auto& b = s.total_stats[i];
    stats.row({rv[i].name, io::format_double(b.min), io::format_double(b.q25), io::format_double(b.median),
               io::format_double(b.q75), io::format_double(b.max),
               io::format_double(full_total(static_cast<Eigen::Index>(i)))});
  }
  stats.save(c.output_dir / "study_stats.csv");
  return s;
}

/// Nominal demo run: summary JSON and a cell-centred field export.
inline aquifer::Evaluation cmd_demo(const RunConfig& c) {
  ModelConfig mc = c.model;
  mc.type = "demo";
  const DemoModel demo(mc);
  const auto& m = demo.model();
  const aquifer::Evaluation e = m.run(m.nominal_parameters());
  fs::create_directories(c.output_dir);
  io::CsvWriter fields({"x", "z", "layer", "H", "E"});
  const auto& g = m.grid();
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const auto id = g.id(i, j);
      fields.row({io::format_double(g.xc(i)), io::format_double(g.zc(j)),
                  m.section().layers[m.layer_of_cell(id)].name,
                  io::format_double(e.flow.head(static_cast<Eigen::Index>(id))),
                  io::format_double(e.life_years(static_cast<Eigen::Index>(id)))});
    }
  fields.save(c.output_dir / "demo_fields.csv");
  json j;
  j["response_years"] = e.response_years;
  j["target_zone_cells"] = m.target_cells().size();
  j["outflow_fraction"] = e.budget.group_fraction;
  j["outflow_by_segment"] = e.budget.segment_outflow;
  j["mass_balance_error"] = e.budget.balance_error();
  j["model"] = demo.describe();
  j["version"] = kVersion;
  io::write_json(c.output_dir / "demo_summary.json", j);
  return e;
}

/// sample -> evaluate (design and enrichment) -> fit -> sobol.
inline SobolReport cmd_full(const RunConfig& c) {
  cmd_sample(c);
  cmd_evaluate(c, false);
  if (c.design.n_enrich > 0) cmd_evaluate(c, true);
  cmd_fit(c);
  return cmd_sobol(c, c.output_dir / "pce.json", c.output_dir / "sobol");
}

}  // namespace pcgsa::pipeline
