#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "pcgsa/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pcgsa;
using namespace pcgsa::pipeline;

namespace {

class ScratchDir {
public:
  ScratchDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("pcgsa_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json ishigami_json(std::size_t n = 80) {
  return json{{"model", {{"type", "ishigami"}}},
              {"design", {{"n", n}, {"seed", 5}, {"n_enrich", 40}, {"enrich_seed", 6}}},
              {"fit", {{"q", 1.0}, {"p_min", 1}, {"p_max", 6}}},
              {"sobol", {{"effect_points", 11}}},
              {"study", {{"subset_size", 50}, {"repetitions", 4}, {"seed", 9}}}};
}

RunConfig config_in(const json& j, const fs::path& dir) {
  RunConfig c = parse_config(j, dir);
  c.output_dir = dir / "out";
  return c;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(PCGSA_CLI) + " " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_config(const fs::path& path, const json& j) { io::write_json(path, j); }

}  // namespace

TEST(Config, Defaults) {
  const RunConfig c = parse_config(json::object());
  EXPECT_EQ(c.model.type, "demo");
  EXPECT_EQ(c.fit.p_min, 1u);
  EXPECT_FALSE(c.variables.has_value());
  EXPECT_EQ(c.workers, 1u);
}

TEST(Config, RejectsUnknownKey) {
  EXPECT_THROW(parse_config(json{{"desing", json::object()}}), InvalidArgument);
}

TEST(Config, RejectsBadDegreeRange) {
  json j = ishigami_json();
  j["fit"]["p_min"] = 5;
  j["fit"]["p_max"] = 3;
  EXPECT_THROW(parse_config(j), InvalidArgument);
  j["fit"]["p_min"] = 0;
  EXPECT_THROW(parse_config(j), InvalidArgument);
}

TEST(Config, RejectsBadThresholdAndQ) {
  json j = ishigami_json();
  j["sobol"]["threshold"] = 1.5;
  EXPECT_THROW(parse_config(j), InvalidArgument);
  j = ishigami_json();
  j["fit"]["q"] = 0.0;
  EXPECT_THROW(parse_config(j), InvalidArgument);
  j = ishigami_json();
  j["fit"]["scale"] = "cubic";
  EXPECT_THROW(parse_config(j), InvalidArgument);
}

TEST(Config, ModelRules) {
  EXPECT_THROW(parse_config(json{{"model", {{"type", "nonsense"}}}}), InvalidArgument);
  const json vars = json::array({{{"name", "x"}, {"distribution", "uniform"}, {"lower", 0}, {"upper", 1}}});
  EXPECT_THROW(parse_config(json{{"model", {{"type", "external"}}}, {"variables", vars}}), InvalidArgument);
  EXPECT_THROW(parse_config(json{{"model", {{"type", "external"}, {"command", "true"}}}}), InvalidArgument);
  EXPECT_THROW(parse_config(json{{"model", {{"type", "ishigami"}}}, {"variables", vars}}), InvalidArgument);
  EXPECT_NO_THROW(parse_config(json{{"model", {{"type", "external"}, {"command", "true"}}}, {"variables", vars}}));
}

TEST(Config, HashTracksContent) {
  const RunConfig a = parse_config(ishigami_json(80));
  const RunConfig b = parse_config(ishigami_json(80));
  const RunConfig c = parse_config(ishigami_json(81));
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_NE(a.hash, c.hash);
}

TEST(Pipeline, SampleEvaluateFitSobolStudy) {
  ScratchDir tmp;
  RunConfig c = config_in(ishigami_json(), tmp.path());
  cmd_sample(c);
  const auto d = io::read_matrix(c.output_dir / "design.csv");
  EXPECT_EQ(d.rows(), 80);
  EXPECT_EQ(d.cols(), 3);
  EXPECT_EQ(io::read_matrix(c.output_dir / "enrichment.csv").rows(), 40);

  const auto s = cmd_evaluate(c);
  EXPECT_EQ(s.rows, 80u);
  EXPECT_EQ(s.computed, 80u);
  EXPECT_EQ(s.failed, 0u);
  EXPECT_FALSE(fs::exists(c.output_dir / "responses.partial.csv"));
  const auto y = io::read_matrix(c.output_dir / "responses.csv");
  const benchmarks::Ishigami f;
  for (Eigen::Index i = 0; i < d.rows(); ++i) EXPECT_DOUBLE_EQ(y(i, 0), f(d.row(i).transpose()));
  cmd_evaluate(c, true);

  const SparsePce pce = cmd_fit(c);
  ASSERT_TRUE(pce.err_gen.has_value());
  const json pj = io::read_json(c.output_dir / "pce.json");
  EXPECT_EQ(pj.at("provenance").at("training_rows"), 80);
  EXPECT_EQ(pj.at("provenance").at("validation_rows"), 40);
  EXPECT_EQ(pj.at("provenance").at("config_hash"), c.hash);

  const SparsePce joint = cmd_fit(c, FitRequest{.joint = true, .name = "joint"});
  EXPECT_EQ(joint.training_size, 120u);
  EXPECT_FALSE(joint.err_gen.has_value());

  const SobolReport r = cmd_sobol(c, c.output_dir / "pce.json", c.output_dir / "sobol");
  for (const char* file : {"sobol.json", "sobol_indices.csv", "top10_total.csv", "grouped_sums.csv",
                           "effects/x1.csv", "effects/x2.csv", "effects/x3.csv"})
    EXPECT_TRUE(fs::exists(c.output_dir / "sobol" / file)) << file;
  EXPECT_NEAR(io::read_json(c.output_dir / "sobol" / "sobol.json").at("partition_sum").get<double>(), 1.0, 1e-12);
  EXPECT_EQ(r.names.size(), 3u);

  const auto study = cmd_study(c);
  EXPECT_EQ(study.totals.rows(), 4);
  const auto totals = io::read_csv(c.output_dir / "study_totals.csv");
  EXPECT_EQ(totals.rows.size(), 4u);
  EXPECT_EQ(io::read_csv(c.output_dir / "study_stats.csv").rows.size(), 3u);
}

TEST(Pipeline, RerunIsByteIdentical) {
  ScratchDir a, b;
  for (const auto* dir : {&a, &b}) {
    RunConfig c = config_in(ishigami_json(60), dir->path());
    cmd_full(c);
  }
  for (const char* file : {"design.csv", "enrichment.csv", "responses.csv", "pce.json", "sobol/sobol.json",
                           "sobol/sobol_indices.csv", "sobol/effects/x1.csv"})
    EXPECT_EQ(slurp(a.path() / "out" / file), slurp(b.path() / "out" / file)) << file;
}

TEST(Pipeline, WorkersDoNotChangeResults) {
  ScratchDir a, b;
  RunConfig c1 = config_in(ishigami_json(60), a.path());
  RunConfig c4 = config_in(ishigami_json(60), b.path());
  c4.workers = 4;
  for (auto* c : {&c1, &c4}) {
    cmd_sample(*c);
    cmd_evaluate(*c);
  }
  EXPECT_EQ(slurp(a.path() / "out" / "responses.csv"), slurp(b.path() / "out" / "responses.csv"));
}

TEST(Pipeline, ResumesFromPartialLog) {
  ScratchDir tmp;
  RunConfig c = config_in(ishigami_json(30), tmp.path());
  cmd_sample(c);
  const auto d = io::read_matrix(c.output_dir / "design.csv");
  // Pretend rows 3 and 7 finished before an interruption, with marker values.
  io::write_text(c.output_dir / "responses.partial.csv", "row,response\n3,123.5\n7,-4.25\n");
  const auto s = cmd_evaluate(c);
  EXPECT_EQ(s.reused, 2u);
  EXPECT_EQ(s.computed, 28u);
  const auto y = io::read_matrix(c.output_dir / "responses.csv");
  EXPECT_EQ(y(3, 0), 123.5);
  EXPECT_EQ(y(7, 0), -4.25);
  EXPECT_FALSE(fs::exists(c.output_dir / "responses.partial.csv"));

  const auto again = cmd_evaluate(c);
  EXPECT_EQ(again.reused, 30u);
  EXPECT_EQ(again.computed, 0u);
}

TEST(Pipeline, ExternalModelViaFiles) {
  ScratchDir tmp;
  const json vars = json::array({{{"name", "a"}, {"distribution", "uniform"}, {"lower", 0}, {"upper", 1}},
                                 {{"name", "b"}, {"distribution", "gaussian"}, {"mean", 2}, {"sd", 0.5}}});
  json j{{"variables", vars},
         {"model", {{"type", "external"}, {"command", "echo 3.5 > {response}"}}},
         {"design", {{"n", 6}}}};
  RunConfig c = config_in(j, tmp.path());
  cmd_sample(c);
  const auto s = cmd_evaluate(c);
  EXPECT_EQ(s.computed, 6u);
  const auto y = io::read_matrix(c.output_dir / "responses.csv");
  for (Eigen::Index i = 0; i < y.rows(); ++i) EXPECT_EQ(y(i, 0), 3.5);
  const std::string params = slurp(c.output_dir / "external" / "row_2" / "params.txt");
  EXPECT_EQ(params.rfind("a ", 0), 0u);
  EXPECT_NE(params.find("\nb "), std::string::npos);
}

TEST(Pipeline, ExternalFailuresAreRecorded) {
  ScratchDir tmp;
  const json vars = json::array({{{"name", "a"}, {"distribution", "uniform"}, {"lower", 0}, {"upper", 1}}});
  json j{{"variables", vars},
         {"model", {{"type", "external"}, {"command", "test {row} -ne 2 && echo 1 > {response}"}}},
         {"design", {{"n", 4}}}};
  RunConfig c = config_in(j, tmp.path());
  cmd_sample(c);
  const auto s = cmd_evaluate(c);
  EXPECT_EQ(s.failed, 1u);
  EXPECT_EQ(s.computed, 3u);
  const auto fails = io::read_csv(c.output_dir / "failures.csv");
  ASSERT_EQ(fails.rows.size(), 1u);
  EXPECT_EQ(fails.rows[0].at(0), "2");
  EXPECT_TRUE(std::isnan(io::read_matrix(c.output_dir / "responses.csv")(2, 0)));
}

TEST(Pipeline, EmptyDesign) {
  ScratchDir tmp;
  RunConfig c = config_in(ishigami_json(0), tmp.path());
  cmd_sample(c);
  const auto t = io::read_csv(c.output_dir / "design.csv");
  EXPECT_EQ(t.header.size(), 3u);
  EXPECT_TRUE(t.rows.empty());
  const auto s = cmd_evaluate(c);
  EXPECT_EQ(s.rows, 0u);
  EXPECT_EQ(s.failed, 0u);
}

TEST(Pipeline, SingleDegreeRange) {
  ScratchDir tmp;
  json j = ishigami_json(40);
  j["fit"]["p_min"] = 1;
  j["fit"]["p_max"] = 1;
  RunConfig c = config_in(j, tmp.path());
  cmd_sample(c);
  cmd_evaluate(c);
  const SparsePce pce = cmd_fit(c, FitRequest{.validate = false});
  EXPECT_EQ(pce.degree, 1u);
  const json pj = io::read_json(c.output_dir / "pce.json");
  EXPECT_EQ(pj.at("degree"), 1);
}

TEST(Pipeline, GroupingOverrides) {
  ScratchDir tmp;
  RunConfig c = config_in(ishigami_json(60), tmp.path());
  cmd_sample(c);
  cmd_evaluate(c);
  cmd_fit(c, FitRequest{.validate = false});
  io::write_text(tmp.path() / "groups.csv", "variable,group\nx1,first\nx3,first\nx2,second\n");
  const auto g = read_grouping(tmp.path() / "groups.csv");
  const SobolReport r = cmd_sobol(c, c.output_dir / "pce.json", c.output_dir / "grouped", g);
  ASSERT_EQ(r.grouped_sums.size(), 2u);
  double total = 0.0;
  for (const auto& [label, v] : r.grouped_sums) total += v;
  EXPECT_NEAR(total, r.first_order.sum(), 1e-12);

  io::write_text(tmp.path() / "bad.csv", "variable,group\nX9,oops\n");
  EXPECT_THROW(cmd_sobol(c, c.output_dir / "pce.json", c.output_dir / "bad", read_grouping(tmp.path() / "bad.csv")),
               InvalidArgument);
}

TEST(Pipeline, FitNeedsResponses) {
  ScratchDir tmp;
  RunConfig c = config_in(ishigami_json(20), tmp.path());
  cmd_sample(c);
  EXPECT_ANY_THROW(cmd_fit(c));
  EXPECT_THROW(cmd_fit(c, FitRequest{.joint = true}), std::exception);
}

TEST(Cli, FullRunAndExitCodes) {
  ScratchDir tmp;
  write_config(tmp.path() / "run.json", ishigami_json(60));
  const fs::path log = tmp.path() / "log.txt";
  const std::string base = "-c " + (tmp.path() / "run.json").string() + " -o " + (tmp.path() / "cli").string();
  EXPECT_EQ(run_cli(base + " sample", log), 0) << slurp(log);
  EXPECT_EQ(run_cli(base + " evaluate", log), 0) << slurp(log);
  EXPECT_NE(slurp(log).find("60 computed"), std::string::npos) << slurp(log);
  EXPECT_EQ(run_cli(base + " evaluate", log), 0);
  EXPECT_NE(slurp(log).find("60 reused"), std::string::npos) << slurp(log);
  EXPECT_EQ(run_cli(base + " evaluate --enrichment", log), 0) << slurp(log);
  EXPECT_EQ(run_cli(base + " fit --name main", log), 0) << slurp(log);
  EXPECT_TRUE(fs::exists(tmp.path() / "cli" / "main.json"));
  EXPECT_EQ(run_cli(base + " fit --scale logarithmic --name logfit", log), 1);  // Ishigami takes negative values
  EXPECT_EQ(run_cli(base + " sobol --pce main.json", log), 0) << slurp(log);
  EXPECT_TRUE(fs::exists(tmp.path() / "cli" / "sobol_main" / "sobol.json"));
  EXPECT_NE(slurp(log).find("x1"), std::string::npos);
  EXPECT_EQ(run_cli(base + " study", log), 0) << slurp(log);
  EXPECT_TRUE(fs::exists(tmp.path() / "cli" / "study_stats.csv"));
}

TEST(Cli, Errors) {
  ScratchDir tmp;
  const fs::path log = tmp.path() / "log.txt";
  EXPECT_NE(run_cli("", log), 0);
  EXPECT_EQ(run_cli("sample", log), 1);  // no config
  write_config(tmp.path() / "bad.json", json{{"bogus", 1}});
  EXPECT_EQ(run_cli("-c " + (tmp.path() / "bad.json").string() + " sample", log), 1);
  EXPECT_NE(slurp(log).find("bogus"), std::string::npos);
  write_config(tmp.path() / "ok.json", ishigami_json(10));
  EXPECT_EQ(run_cli("-c " + (tmp.path() / "ok.json").string() + " -o " + (tmp.path() / "x").string() + " fit", log), 1);
}

TEST(Cli, FailedEvaluationsExitTwo) {
  ScratchDir tmp;
  const json vars = json::array({{{"name", "a"}, {"distribution", "uniform"}, {"lower", 0}, {"upper", 1}}});
  write_config(tmp.path() / "ext.json", json{{"variables", vars},
                                             {"model", {{"type", "external"}, {"command", "false"}}},
                                             {"design", {{"n", 3}}}});
  const fs::path log = tmp.path() / "log.txt";
  const std::string base = "-c " + (tmp.path() / "ext.json").string() + " -o " + (tmp.path() / "o").string();
  EXPECT_EQ(run_cli(base + " sample", log), 0) << slurp(log);
  EXPECT_EQ(run_cli(base + " evaluate", log), 2) << slurp(log);
  EXPECT_EQ(io::read_csv(tmp.path() / "o" / "failures.csv").rows.size(), 3u);
}

TEST(Cli, Demo) {
  ScratchDir tmp;
  const fs::path log = tmp.path() / "log.txt";
  ASSERT_EQ(run_cli("-o " + (tmp.path() / "demo").string() + " demo", log), 0) << slurp(log);
  const json s = io::read_json(tmp.path() / "demo" / "demo_summary.json");
  EXPECT_GT(s.at("response_years").get<double>(), 40000.0);
  EXPECT_LT(s.at("mass_balance_error").get<double>(), 1e-8);
  const auto fields = io::read_csv(tmp.path() / "demo" / "demo_fields.csv");
  EXPECT_EQ(fields.header.size(), 5u);
  EXPECT_FALSE(fields.rows.empty());
}
