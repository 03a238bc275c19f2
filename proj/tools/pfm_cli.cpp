#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "pfm/experiment.hpp"
#include "pfm/io.hpp"
#include "pfm/sampling.hpp"
#include "pfm/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pfm::PfmError(pfm::ErrorCode::ConfigError, "cannot open config " + path);
  json doc;
  in >> doc;
  return doc;
}

pfm::ExperimentConfig experiment_from_file(const std::string& path) {
  return pfm::ExperimentConfig::from_json(load_config(path));
}

void print_frame_warnings(const pfm::PreferenceFrame& frame) {
  for (const auto& warning : frame.warnings) std::cerr << "warning: " << warning << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference frame model generator, spectral clustering pipeline and checkers"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", format = "json", variant = "main";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int replicates = 0, jobs = 0;
  bool expected_model = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "experiment config JSON");
    if (needs_config) opt->required();
    cmd->add_option("--seed", seed, "master seed (overrides config)")
        ->each([&](const std::string&) { seed_given = true; });
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--replicates", replicates, "replicate count (overrides config)");
    cmd->add_option("--jobs", jobs, "max concurrent replicates");
    cmd->add_option("--format", format, "matrix output format: json|csv|binary");
    cmd->add_flag("--expected-model", expected_model, "noiseless mode: analyze E[A] directly");
  };

  auto* generate = app.add_subcommand("generate", "build a model and export S");
  add_common(generate, true);
  auto* sample = app.add_subcommand("sample", "draw one adjacency realization");
  add_common(sample, true);
  auto* cluster = app.add_subcommand("cluster", "run one spectral clustering pass");
  add_common(cluster, true);
  auto* verify = app.add_subcommand("verify", "frame and block-stochasticity checks");
  add_common(verify, true);
  auto* bound = app.add_subcommand("bound", "assumptions and Theorem-3 bounds for one sample");
  add_common(bound, true);
  auto* run = app.add_subcommand("run", "replicated end-to-end experiment");
  add_common(run, true);
  auto* sec42 = app.add_subcommand("reproduce-sec42", "the built-in section 4.2 comparison");
  add_common(sec42, false);
  sec42->add_option("--variant", variant, "main|alt weight distribution");

  CLI11_PARSE(app, argc, argv);

  try {
    auto apply_overrides = [&](pfm::ExperimentConfig& config) {
      if (seed_given) config.seed = seed;
      if (replicates > 0) config.replicates = replicates;
      if (jobs > 0) config.jobs = jobs;
      if (expected_model) config.expected_model = true;
      config.out_dir = out_dir;
      config.format = format;
    };

    if (generate->parsed()) {
      auto config = experiment_from_file(config_path);
      apply_overrides(config);
      pfm::PfmModel model = pfm::build_model(config.model);
      print_frame_warnings(model.frame);
      fs::create_directories(out_dir);
      if (format == "csv")
        pfm::io::write_matrix_csv(model.S, model.frame.K, out_dir + "/S.csv");
      else
        pfm::io::write_matrix_binary(model.S, model.frame.K, out_dir + "/S.bin");
      char hash_hex[32];
      std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                    static_cast<unsigned long long>(pfm::model_hash(model)));
      json summary = {{"n", model.partition.n},
                      {"K", model.frame.K},
                      {"d_min", model.d_min},
                      {"d_tot", model.d_tot},
                      {"d_max_scaled", model.d_max_scaled},
                      {"frame", pfm::frame_to_json(model.frame)},
                      {"model_hash", hash_hex}};
      std::ofstream(out_dir + "/model.json") << summary.dump(2) << '\n';
      std::cout << summary.dump(2) << '\n';
    } else if (sample->parsed()) {
      auto config = experiment_from_file(config_path);
      apply_overrides(config);
      pfm::PfmModel model = pfm::build_model(config.model);
      pfm::SampledGraph graph = pfm::sample_adjacency(model, config.seed);
      fs::create_directories(out_dir);
      pfm::write_edge_list(graph, out_dir + "/edges.csv", out_dir + "/edges.json");
      std::cout << "n=" << model.partition.n << " dhat_min=" << graph.dhat_min
                << " edges written to " << out_dir << "/edges.csv\n";
    } else if (cluster->parsed()) {
      auto config = experiment_from_file(config_path);
      apply_overrides(config);
      config.replicates = 1;
      pfm::ExperimentResult result = pfm::run_experiment(config);
      const auto& rec = result.replicates.front();
      std::cout << "p_err=" << pfm::io::fmt(rec.p_err)
                << " sigma=" << pfm::io::fmt(rec.sigma_hat)
                << " norm_diff=" << pfm::io::fmt(rec.norm_diff) << '\n';
    } else if (verify->parsed()) {
      auto config = experiment_from_file(config_path);
      apply_overrides(config);
      pfm::PfmModel model = pfm::build_model(config.model);
      print_frame_warnings(model.frame);
      auto check = pfm::verify_block_stochastic(model.S, model.partition);
      json report = {{"max_residual", check.max_residual},
                     {"frame", pfm::frame_to_json(model.frame)},
                     {"reversibility_residual", model.frame.reversibility_residual},
                     {"frame_factor", pfm::frame_factor(model.frame)}};
      std::vector<std::vector<double>> rhat(model.frame.K, std::vector<double>(model.frame.K));
      for (int k = 0; k < model.frame.K; ++k)
        for (int l = 0; l < model.frame.K; ++l) rhat[k][l] = check.R_hat(k, l);
      report["R_hat"] = rhat;
      std::cout << report.dump(2) << '\n';
    } else if (bound->parsed()) {
      auto config = experiment_from_file(config_path);
      apply_overrides(config);
      config.replicates = 1;
      pfm::ExperimentResult result = pfm::run_experiment(config);
      json doc = pfm::result_to_json(result);
      std::cout << doc["replicates"][0].dump(2) << '\n';
    } else if (run->parsed()) {
      auto config = experiment_from_file(config_path);
      apply_overrides(config);
      pfm::ExperimentResult result = pfm::run_experiment(config);
      std::cout << "median p_err=" << pfm::io::fmt(result.median_p_err)
                << " median norm_diff=" << pfm::io::fmt(result.median_norm_diff)
                << " g_max=" << pfm::io::fmt(result.separation.g_max) << "\nreports in "
                << config.out_dir << '\n';
    } else if (sec42->parsed()) {
      if (!seed_given) seed = 4242;
      if (replicates <= 0) replicates = 10;
      fs::create_directories(out_dir);
      pfm::Sec42Report report = pfm::reproduce_sec42(variant, seed, replicates, out_dir);
      std::cout << report.rendered;
    }
  } catch (const pfm::PfmError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
