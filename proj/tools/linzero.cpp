// Copyright 2026 The LinZero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// linzero run <config> | summarize <results...> | oracle <env-spec>
//
// Exit codes: 0 success, 1 config or argument error, 2 I/O error,
// 3 any other failure.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "linzero/experiment.hpp"
#include "linzero/matgame.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& seeds, const std::string& output, int workers,
                const std::string& format) {
  auto cfg = linzero::ExperimentConfig::from_file(config_path);
  if (!seeds.empty()) cfg.seeds = linzero::parse_seeds(seeds);
  if (!output.empty()) cfg.output_path = output;
  if (workers > 0) cfg.workers = workers;
  if (!format.empty()) cfg.format = linzero::parse_format(format);
  if (cfg.output_path.empty()) throw linzero::ConfigError("no output path: set [output] path or pass --output");
  const auto records = linzero::run(cfg);
  std::cerr << "wrote " << records.size() << " records to " << cfg.output_path << "\n";
  return 0;
}

int summarize_command(const std::vector<std::string>& inputs, const std::string& output) {
  std::vector<linzero::ResultFile> files;
  for (const auto& path : inputs) files.push_back(linzero::read_results_file(path));
  const auto rows = linzero::summarize(files);
  if (output.empty()) {
    linzero::write_summary(std::cout, rows);
    return 0;
  }
  std::ofstream out(output);
  if (!out) throw linzero::IoError("cannot write '" + output + "'");
  linzero::write_summary(out, rows);
  return 0;
}

int oracle_command(const std::string& spec_path, const std::string& tensor_path) {
  const auto spec = linzero::read_matgame_spec(spec_path);
  // Enumerate rather than trust the closed form, so the printout checks it.
  const auto best = linzero::brute_force_select(
      spec.space(), linzero::full_partition(spec.space()),
      [&](const linzero::JointAction& a) { return linzero::linear_reward(spec, a); });
  std::cout << "action = " << best.action.to_string() << "\nexpected_reward = " << best.value << "\n";
  if (!tensor_path.empty()) {
    std::ofstream out(tensor_path);
    if (!out) throw linzero::IoError("cannot write '" + tensor_path + "'");
    linzero::dump_reward_tensor(out, spec);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-bandit tree search experiments on MatGame"};
  app.require_subcommand(1);

  std::string config_path, seeds, output, format;
  int workers = 0;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config file")->required();
  run->add_option("--seeds", seeds, "Seed list, e.g. 1,2,5..9 (overrides the config)");
  run->add_option("--output", output, "Output path (overrides the config)");
  run->add_option("--workers", workers, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
  run->add_option("--format", format, "csv or jsonl (overrides the config)");

  std::vector<std::string> inputs;
  std::string summary_output;
  auto* summarize = app.add_subcommand("summarize", "Mean and sd per cell across result files");
  summarize->add_option("results", inputs, "Result files")->required();
  summarize->add_option("--output", summary_output, "Write the CSV table here instead of stdout");

  std::string spec_path, tensor_path;
  auto* oracle = app.add_subcommand("oracle", "Print the optimal joint action of a MatGame spec");
  oracle->add_option("env-spec", spec_path, "File with an [env] section")->required();
  oracle->add_option("--dump-tensor", tensor_path, "Write the expected reward of every joint action as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return run_command(config_path, seeds, output, workers, format);
    if (*summarize) return summarize_command(inputs, summary_output);
    if (*oracle) return oracle_command(spec_path, tensor_path);
  } catch (const linzero::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
