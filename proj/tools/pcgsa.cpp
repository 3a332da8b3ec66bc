// pcgsa: sparse PCE surrogates and Sobol' sensitivity analysis from the command line.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcgsa/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pcgsa;

namespace {

void print_report(const SobolReport& r) {
  std::printf("response scale: %s, mean %.6g, variance %.6g\n", std::string(to_string(r.scale)).c_str(), r.mean,
              r.total_variance);
  std::printf("%zu of %zu variables important (S_T >= %g)\n", r.count_important(), r.names.size(), r.threshold);
  std::printf("%-4s %-20s %12s %12s\n", "rank", "variable", "total", "first");
  std::size_t rank = 1;
  for (auto i : r.top(10))
    std::printf("%-4zu %-20s %12.6f %12.6f\n", rank++, r.names[i].c_str(), r.total(static_cast<Eigen::Index>(i)),
                r.first_order(static_cast<Eigen::Index>(i)));
  std::printf("grouped first-order sums:\n");
  for (const auto& [label, s] : r.grouped_sums) std::printf("  %-12s %.6f\n", label.c_str(), s);
}

void print_fit(const SparsePce& pce) {
  std::printf("degree %u, q %.3g, %zu of %zu terms, err_loo %.4e, corrected %.4e", pce.degree, pce.q,
              pce.active.size(), pce.candidate_size, pce.err_loo, pce.err_loo_corrected);
  if (pce.err_gen) std::printf(", err_gen %.4e", *pce.err_gen);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse polynomial chaos surrogates and Sobol' sensitivity analysis"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> output_override;
  std::optional<unsigned> workers_override;
  app.add_option("-c,--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("-o,--output", output_override, "Output directory (overrides the config)");
  app.add_option("-j,--workers", workers_override, "Concurrent model evaluations (overrides the config)");

  auto* sample = app.add_subcommand("sample", "Draw the Latin hypercube design (and its nested enrichment)");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate the model on missing design rows");
  bool enrichment = false;
  evaluate->add_flag("--enrichment", enrichment, "Evaluate the enrichment design instead");

  auto* fit = app.add_subcommand("fit", "Fit a sparse PCE with degree adaptivity");
  std::optional<std::string> scale;
  bool joint = false;
  bool no_validate = false;
  std::string fit_name = "pce";
  fit->add_option("--scale", scale, "original | logarithmic (overrides the config)");
  fit->add_flag("--joint", joint, "Fit on design + enrichment");
  fit->add_flag("--no-validate", no_validate, "Skip the generalization error on the enrichment");
  fit->add_option("--name", fit_name, "Report name, written as <name>.json");

  auto* sobol = app.add_subcommand("sobol", "Sobol' indices, top-10 table, grouped sums, univariate effects");
  std::string pce_file = "pce.json";
  std::optional<std::string> grouping_file;
  std::optional<std::string> sobol_dir;
  sobol->add_option("--pce", pce_file, "PCE report inside the output directory, or a path");
  sobol->add_option("--grouping", grouping_file, "CSV with columns variable,group")->check(CLI::ExistingFile);
  sobol->add_option("--out", sobol_dir, "Report directory (default <output>/sobol_<pce name>)");

  auto* study = app.add_subcommand("study", "Repeated random-subset fits and box statistics of total indices");
  auto* demo = app.add_subcommand("demo", "Nominal run of the aquifer model with field export");
  auto* full = app.add_subcommand("full", "sample, evaluate, fit and sobol in one go");

  CLI11_PARSE(app, argc, argv);

  try {
    pipeline::RunConfig cfg = config_path.empty() ? pipeline::parse_config(nlohmann::json::object())
                                                  : pipeline::load_config(config_path);
    if (output_override) cfg.output_dir = *output_override;
    if (workers_override) cfg.workers = *workers_override;
    if (config_path.empty() && !demo->parsed())
      throw InvalidArgument("--config is required for this subcommand");

    if (sample->parsed()) {
      pipeline::cmd_sample(cfg);
      std::printf("design written to %s\n", (cfg.output_dir / "design.csv").string().c_str());
    } else if (evaluate->parsed()) {
      const auto s = pipeline::cmd_evaluate(cfg, enrichment);
      std::printf("%zu rows: %zu computed, %zu reused, %zu failed\n", s.rows, s.computed, s.reused, s.failed);
      if (s.failed > 0) return 2;
    } else if (fit->parsed()) {
      pipeline::FitRequest req;
      if (scale) req.scale = pipeline::scale_from_string(*scale);
      req.joint = joint;
      req.validate = !no_validate;
      req.name = fit_name;
      print_fit(pipeline::cmd_fit(cfg, req));
    } else if (sobol->parsed()) {
      fs::path pce_path = pce_file;
      if (!fs::exists(pce_path)) pce_path = cfg.output_dir / pce_file;
      const fs::path out = sobol_dir ? fs::path(*sobol_dir) : cfg.output_dir / ("sobol_" + pce_path.stem().string());
      const auto grouping = grouping_file ? pipeline::read_grouping(*grouping_file) : std::map<std::string, std::string>{};
      print_report(pipeline::cmd_sobol(cfg, pce_path, out, grouping));
    } else if (study->parsed()) {
      const auto s = pipeline::cmd_study(cfg);
      std::printf("%zu repetitions of %zu points\n", static_cast<std::size_t>(s.totals.rows()), cfg.study.subset_size);
      std::printf("%-20s %10s %10s %10s\n", "variable", "q25", "median", "q75");
      for (std::size_t i = 0; i < s.names.size(); ++i)
        std::printf("%-20s %10.4f %10.4f %10.4f\n", s.names[i].c_str(), s.total_stats[i].q25,
                    s.total_stats[i].median, s.total_stats[i].q75);
    } else if (demo->parsed()) {
      const auto e = pipeline::cmd_demo(cfg);
      std::printf("target-zone mean life expectancy: %.1f years\n", e.response_years);
      for (const auto& [g, f] : e.budget.group_fraction) std::printf("outflow %-10s %.3f\n", g.c_str(), f);
    } else if (full->parsed()) {
      print_report(pipeline::cmd_full(cfg));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
