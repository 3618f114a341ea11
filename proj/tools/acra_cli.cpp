// Copyright 2026 The ACRA Authors
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

// Command-line experiment harness around the ACRA library: train a model,
// attack a test set, classify instances, and reproduce the evaluation,
// robustness and speed-up studies.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "acra/errors.hpp"
#include "acra/experiment.hpp"
#include "acra/synthetic.hpp"

namespace {

using namespace acra;

struct GlobalArgs {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
  std::vector<std::string> overrides;  // extra key=value pairs
};

ExperimentConfig build_config(const GlobalArgs& args) {
  ExperimentConfig config;
  if (!args.config_path.empty()) config = load_config(args.config_path);
  for (const auto& entry : args.overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("override must be key=value, got '" + entry + "'");
    }
    apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
  }
  if (args.seed) config.master_seed = *args.seed;
  if (args.jobs) config.jobs = *args.jobs;
  return config;
}

void add_global_options(CLI::App* cmd, GlobalArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value experiment config");
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--jobs", args.jobs, "worker threads (0 = single)");
  cmd->add_option("--out", args.out, "output path");
  cmd->add_option("--set", args.overrides, "config override key=value")->allow_extra_args(false);
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> values;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  return values;
}

int cmd_train(const GlobalArgs& args) {
  ExperimentConfig config = build_config(args);
  config.validate();
  const Dataset data = load_experiment_data(config);
  const GenerativeModel model = GenerativeModel::fit(data, config.smoothing);
  const std::string out = args.out.empty() ? "model.txt" : args.out;
  model.save(out);
  std::cout << "fitted on " << data.size() << " instances (" << data.count(Label::positive)
            << " positive), model -> " << out << "\n";
  return 0;
}

int cmd_attack(const GlobalArgs& args, const std::string& model_path,
               const std::string& sidecar) {
  ExperimentConfig config = build_config(args);
  config.validate();
  const Dataset data = load_experiment_data(config);
  const GenerativeModel model = GenerativeModel::load(model_path);
  const UtilityMatrix utility = UtilityMatrix::from_id(config.utility_id);
  const DetectionOracle oracle = worst_case_oracle(
      [&](const BinaryInstance& x) { return nb_classify(model, utility, x); });
  std::vector<TaintRecord> audit;
  const Dataset tainted = taint_test_set(data, config.attacker, oracle, config.budget,
                                         StreamFamily(config.master_seed), &audit);
  const std::string out = args.out.empty() ? "tainted.txt" : args.out;
  write_instances(tainted, out);
  if (!sidecar.empty()) write_taint_audit(audit, sidecar);
  std::cout << "attacked " << audit.size() << " of " << data.count(Label::positive)
            << " positive instances -> " << out << "\n";
  return 0;
}

int cmd_classify(const GlobalArgs& args, const std::string& model_path) {
  ExperimentConfig config = build_config(args);
  config.validate();
  const Dataset data = load_experiment_data(config);
  const GenerativeModel model = GenerativeModel::load(model_path);
  const UtilityMatrix utility = UtilityMatrix::from_id(config.utility_id);
  const StreamFamily rng(config.master_seed);

  std::function<Label(const BinaryInstance&)> classify;
  if (config.variant == "nb") {
    classify = [&](const BinaryInstance& x) { return nb_classify(model, utility, x); };
  } else if (config.variant == "acra") {
    classify = [&](const BinaryInstance& x) {
      return acra_classify(x, model, config.beliefs, utility, config.budget,
                           config.mc_samples, rng);
    };
  } else if (config.variant == "acra-mc") {
    classify = [&](const BinaryInstance& x) {
      return mc_classify(x, model, config.beliefs, utility, config.budget,
                         config.mc_samples, config.mc, rng);
    };
  } else {
    const AdversaryBeliefModel point = config.beliefs.collapsed();
    classify = [&, point](const BinaryInstance& x) {
      return acra_classify(x, model, point, utility, config.budget, config.mc_samples,
                           rng);
    };
  }

  const auto results =
      parallel_classify(data.instances, classify, config.jobs == 0 ? 1 : config.jobs);
  std::ostream* sink = &std::cout;
  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) throw IoError("cannot write '" + args.out + "'");
    sink = &file;
  }
  for (const auto& item : results) {
    if (!item.ok()) throw NumericError("classification failed: " + item.error);
    (*sink) << label_symbol(item.label) << '\n';
  }
  return 0;
}

int cmd_evaluate(const GlobalArgs& args) {
  ExperimentConfig config = build_config(args);
  const MetricsReport report = evaluate(config);
  const auto mean = report.mean();
  const auto sd = report.stddev();
  std::cout << config.variant << " utility=" << config.utility_id
            << " k=" << config.beliefs.var_fraction_k << " R=" << config.repetitions
            << "\n";
  std::printf("accuracy %.4f +- %.4f  fpr %.4f +- %.4f  fnr %.4f +- %.4f  utility %.4f\n",
              mean.accuracy, sd.accuracy, mean.fpr, sd.fpr, mean.fnr, sd.fnr,
              mean.avg_utility);
  if (!args.out.empty()) {
    write_metrics_csv(report, args.out);
    std::cout << "metrics -> " << args.out << "\n";
  }
  return 0;
}

int cmd_robustness(const GlobalArgs& args, const std::string& k_list,
                   const std::string& ka_list) {
  ExperimentConfig config = build_config(args);
  const auto grid = robustness_grid(config, parse_list(k_list), parse_list(ka_list));
  for (size_t ka = 0; ka < grid.ka_values.size(); ++ka) {
    for (size_t k = 0; k < grid.k_values.size(); ++k) {
      std::printf("k=%.2f k_A=%.2f acra=%.4f gt=%.4f gain=%+.4f\n", grid.k_values[k],
                  grid.ka_values[ka], grid.acra_at(ka, k),
                  grid.gt_accuracy[ka * grid.k_values.size() + k], grid.gain_at(ka, k));
    }
  }
  if (!args.out.empty()) {
    write_grid_csv(grid, args.out);
    std::cout << "grid -> " << args.out << "\n";
  }
  return 0;
}

int cmd_bench(const GlobalArgs& args, const std::string& fractions_list) {
  ExperimentConfig config = build_config(args);
  const auto result = bench(config, parse_list(fractions_list));
  for (const auto& fraction : result.fractions) {
    std::printf("fraction %.2f: mean speed-up %.2f median %.2f mean acc delta %+.4f\n",
                fraction.fraction, fraction.mean_speedup, fraction.median_speedup,
                fraction.mean_acc_delta);
  }
  if (!args.out.empty()) {
    write_bench_csv(result, args.out);
    std::cout << "bench -> " << args.out << "\n";
  }
  return 0;
}

int cmd_synth(const GlobalArgs& args, int instances, int positives) {
  const uint64_t seed = args.seed.value_or(1);
  const Dataset corpus = synthesize_spam_corpus(instances, positives, seed);
  const std::string out = args.out.empty() ? "corpus.csv" : args.out;
  write_synthetic_csv(corpus, out);
  std::cout << "synthesized " << instances << " instances (" << positives
            << " positive, seed " << seed << ") -> " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversary-aware spam classification toolkit"};
  app.require_subcommand(1);

  GlobalArgs train_args, attack_args, classify_args, eval_args, robust_args, bench_args,
      synth_args;
  std::string model_path = "model.txt", sidecar, k_list = "0.1,0.3,0.5,0.7,0.9",
              ka_list = "0.1,0.3,0.5,0.7,0.9", fractions = "0.25,0.5,0.75";
  int synth_instances = 4601, synth_positives = 1813;

  auto* train = app.add_subcommand("train", "fit the generative model");
  add_global_options(train, train_args);

  auto* attack = app.add_subcommand("attack", "build a tainted test set");
  add_global_options(attack, attack_args);
  attack->add_option("--model", model_path, "trained model file");
  attack->add_option("--sidecar", sidecar, "audit file of inserted indices");

  auto* classify = app.add_subcommand("classify", "label instances");
  add_global_options(classify, classify_args);
  classify->add_option("--model", model_path, "trained model file");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "repeated hold-out evaluation");
  add_global_options(evaluate_cmd, eval_args);

  auto* robustness = app.add_subcommand("robustness", "accuracy across (k, k_A) grid");
  add_global_options(robustness, robust_args);
  robustness->add_option("--k-grid", k_list, "comma-separated k values");
  robustness->add_option("--ka-grid", ka_list, "comma-separated k_A values");

  auto* bench_cmd = app.add_subcommand("bench", "exact vs Monte Carlo speed-ups");
  add_global_options(bench_cmd, bench_args);
  bench_cmd->add_option("--fractions", fractions, "comma-separated sample fractions");

  auto* synth = app.add_subcommand("synth", "generate the benchmark corpus");
  add_global_options(synth, synth_args);
  synth->add_option("--instances", synth_instances, "total instance count");
  synth->add_option("--positives", synth_positives, "positive instance count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(train_args);
    if (attack->parsed()) return cmd_attack(attack_args, model_path, sidecar);
    if (classify->parsed()) return cmd_classify(classify_args, model_path);
    if (evaluate_cmd->parsed()) return cmd_evaluate(eval_args);
    if (robustness->parsed()) return cmd_robustness(robust_args, k_list, ka_list);
    if (bench_cmd->parsed()) return cmd_bench(bench_args, fractions);
    if (synth->parsed()) return cmd_synth(synth_args, synth_instances, synth_positives);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
