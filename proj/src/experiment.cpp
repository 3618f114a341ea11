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

#include "acra/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "acra/errors.hpp"

namespace acra {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ValidationError("expected a boolean, got '" + value + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  if (repetitions < 1) problems.push_back("repetitions: must be >= 1");
  if (mc_samples < 1) problems.push_back("K: must be >= 1");
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    problems.push_back("train_fraction: must lie in (0,1)");
  }
  if (!(smoothing > 0.0)) problems.push_back("smoothing: must be positive");
  if (budget.max_insertions < 0) problems.push_back("budget: must be >= 0");
  if (variant != "acra" && variant != "acra-mc" && variant != "nb" &&
      variant != "game-theory") {
    problems.push_back("variant: expected acra|acra-mc|nb|game-theory");
  }
  if (data_format != "csv" && data_format != "bits") {
    problems.push_back("format: expected csv|bits");
  }
  if (!(mc.sample_fraction > 0.0) || mc.sample_fraction > 1.0) {
    problems.push_back("fraction: must lie in (0,1]");
  }
  if (mc.parallel_batches < 1) problems.push_back("parallel_batches: must be >= 1");
  if (jobs < 0) problems.push_back("jobs: must be >= 0");
  try {
    UtilityMatrix::from_id(utility_id);
  } catch (const ValidationError&) {
    problems.push_back("utility: unknown id '" + utility_id + "'");
  }
  try {
    attacker.validate();
  } catch (const ValidationError& e) {
    problems.push_back(e.what());
  }
  try {
    beliefs.validate();
  } catch (const ValidationError& e) {
    problems.push_back(e.what());
  }
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += " [" + p + "]";
    throw ValidationError(msg);
  }
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "data") config.data_path = value;
  else if (key == "format") config.data_format = value;
  else if (key == "n_words") config.csv.n_word_features = std::stoi(value);
  else if (key == "binarize_threshold") config.csv.binarize_threshold = std::stod(value);
  else if (key == "has_header") config.csv.has_header = parse_bool(value);
  else if (key == "train_fraction") config.train_fraction = std::stod(value);
  else if (key == "stratify") config.stratify = parse_bool(value);
  else if (key == "smoothing") config.smoothing = std::stod(value);
  else if (key == "budget") config.budget.max_insertions = std::stoi(value);
  else if (key == "utility") config.utility_id = value;
  else if (key == "variant") config.variant = value;
  else if (key == "taint") config.taint = parse_bool(value);
  else if (key == "K") config.mc_samples = static_cast<uint32_t>(std::stoul(value));
  else if (key == "R") config.repetitions = std::stoi(value);
  else if (key == "seed") config.master_seed = std::stoull(value);
  else if (key == "jobs") config.jobs = std::stoi(value);
  else if (key == "fraction") config.mc.sample_fraction = std::stod(value);
  else if (key == "sequential") config.mc.sequential = parse_bool(value);
  else if (key == "dirichlet") config.mc.dirichlet_smoothing = parse_bool(value);
  else if (key == "verbatim_spread") config.mc.verbatim_spread = parse_bool(value);
  else if (key == "parallel_batches") config.mc.parallel_batches = std::stoi(value);
  else if (key == "perturb") config.attacker.perturbation = perturb_mode_from_id(value);
  else if (key == "ka") config.attacker.k_attacker = std::stod(value);
  else if (key == "attacker_gain_detected") config.attacker.gain_detected = std::stod(value);
  else if (key == "attacker_gain_evaded") config.attacker.gain_evaded = std::stod(value);
  else if (key == "attacker_cost") config.attacker.cost_per_change = std::stod(value);
  else if (key == "attacker_rho") config.attacker.risk_proneness = std::stod(value);
  else if (key == "gain_detected_mean") config.beliefs.gain_detected.mean = std::stod(value);
  else if (key == "gain_detected_var") config.beliefs.gain_detected.variance = std::stod(value);
  else if (key == "gain_evaded_mean") config.beliefs.gain_evaded.mean = std::stod(value);
  else if (key == "gain_evaded_var") config.beliefs.gain_evaded.variance = std::stod(value);
  else if (key == "cost_lo") config.beliefs.cost_per_change.lo = std::stod(value);
  else if (key == "cost_hi") config.beliefs.cost_per_change.hi = std::stod(value);
  else if (key == "rho_lo") config.beliefs.risk_proneness.lo = std::stod(value);
  else if (key == "rho_hi") config.beliefs.risk_proneness.hi = std::stod(value);
  else if (key == "k") config.beliefs.var_fraction_k = std::stod(value);
  else throw ValidationError("unknown config key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  ExperimentConfig config;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("bad key=value at line " + std::to_string(line_no) + " of '" +
                            path + "'");
    }
    apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

Dataset load_experiment_data(const ExperimentConfig& config) {
  if (config.data_path.empty()) throw ValidationError("no dataset path configured");
  if (config.data_format == "bits") return read_instances(config.data_path);
  return load_csv(config.data_path, config.csv);
}

namespace {

// Builds the per-instance classifier for the configured variant. The stream
// family already carries the repetition seed.
std::function<Label(const BinaryInstance&)> make_classifier(
    const ExperimentConfig& config, const GenerativeModel& model,
    const UtilityMatrix& utility, const StreamFamily& rng) {
  if (config.variant == "nb") {
    return [&model, utility](const BinaryInstance& x) {
      return nb_classify(model, utility, x);
    };
  }
  if (config.variant == "acra") {
    return [&model, utility, &config, rng](const BinaryInstance& x) {
      return acra_classify(x, model, config.beliefs, utility, config.budget,
                           config.mc_samples, rng);
    };
  }
  if (config.variant == "acra-mc") {
    return [&model, utility, &config, rng](const BinaryInstance& x) {
      return mc_classify(x, model, config.beliefs, utility, config.budget,
                         config.mc_samples, config.mc, rng);
    };
  }
  if (config.variant == "game-theory") {
    const AdversaryBeliefModel point = config.beliefs.collapsed();
    return [&model, utility, &config, point, rng](const BinaryInstance& x) {
      return acra_classify(x, model, point, utility, config.budget, config.mc_samples,
                           rng);
    };
  }
  throw ValidationError("unknown variant '" + config.variant + "'");
}

RepMetrics run_repetition(const ExperimentConfig& config, const Dataset& data, int rep) {
  const uint64_t rep_seed = config.master_seed ^ static_cast<uint64_t>(rep);
  const UtilityMatrix utility = UtilityMatrix::from_id(config.utility_id);
  RepMetrics metrics;
  metrics.rep = rep;

  auto t0 = Clock::now();
  auto [train, test] = config.stratify
                           ? split_stratified(data, config.train_fraction, rep_seed)
                           : split(data, config.train_fraction, rep_seed);
  metrics.split_ms = ms_since(t0);

  t0 = Clock::now();
  const GenerativeModel model = GenerativeModel::fit(train, config.smoothing);
  metrics.fit_ms = ms_since(t0);

  const StreamFamily rep_rng(rep_seed);

  t0 = Clock::now();
  Dataset evaluated;
  if (config.taint) {
    const DetectionOracle oracle = worst_case_oracle(
        [&model, utility](const BinaryInstance& x) { return nb_classify(model, utility, x); });
    evaluated = taint_test_set(test, config.attacker, oracle, config.budget, rep_rng);
  } else {
    evaluated = test;
  }
  metrics.taint_ms = ms_since(t0);

  t0 = Clock::now();
  const auto classify = make_classifier(config, model, utility, rep_rng);
  const auto results = parallel_classify(evaluated.instances, classify,
                                         config.jobs == 0 ? 1 : config.jobs);
  metrics.classify_ms = ms_since(t0);

  for (size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) {
      throw NumericError("classification failed on instance " + std::to_string(i) +
                         ": " + results[i].error);
    }
    metrics.confusion.add(results[i].label, *evaluated.instances[i].label);
  }
  metrics.accuracy = metrics.confusion.accuracy();
  metrics.fpr = metrics.confusion.fpr();
  metrics.fnr = metrics.confusion.fnr();
  metrics.avg_utility = average_utility(metrics.confusion, utility);
  return metrics;
}

}  // namespace

MetricsReport evaluate(const ExperimentConfig& config) {
  return evaluate(config, load_experiment_data(config));
}

MetricsReport evaluate(const ExperimentConfig& config, const Dataset& data) {
  config.validate();
  MetricsReport report;
  report.run = {config.variant, config.utility_id, config.beliefs.var_fraction_k,
                config.attacker.k_attacker, config.budget.max_insertions};
  report.reps.reserve(config.repetitions);
  for (int rep = 0; rep < config.repetitions; ++rep) {
    report.reps.push_back(run_repetition(config, data, rep));
  }
  return report;
}

double RobustnessGrid::acra_at(size_t ka_index, size_t k_index) const {
  return acra_accuracy[ka_index * k_values.size() + k_index];
}

double RobustnessGrid::gain_at(size_t ka_index, size_t k_index) const {
  return gain[ka_index * k_values.size() + k_index];
}

RobustnessGrid robustness_grid(const ExperimentConfig& config,
                               const std::vector<double>& k_values,
                               const std::vector<double>& ka_values) {
  if (k_values.empty() || ka_values.empty()) {
    throw ValidationError("robustness grid requires nonempty k and k_A lists");
  }
  const Dataset data = load_experiment_data(config);

  RobustnessGrid grid;
  grid.k_values = k_values;
  grid.ka_values = ka_values;
  const size_t cells = k_values.size() * ka_values.size();
  std::vector<double> acra_sum(cells, 0.0);
  std::vector<double> gt_sum(ka_values.size(), 0.0);

  for (size_t ka_index = 0; ka_index < ka_values.size(); ++ka_index) {
    ExperimentConfig cell = config;
    cell.attacker.k_attacker = ka_values[ka_index];
    if (cell.attacker.perturbation == PerturbMode::none) {
      throw ValidationError("robustness grid needs a perturbation mode (beta|uniform)");
    }
    // Game-theoretic baseline once per ka; it has no k dependence.
    ExperimentConfig gt = cell;
    gt.variant = "game-theory";
    const auto gt_report = evaluate(gt, data);
    gt_sum[ka_index] = gt_report.mean().accuracy;

    for (size_t k_index = 0; k_index < k_values.size(); ++k_index) {
      ExperimentConfig acra_cell = cell;
      acra_cell.beliefs.var_fraction_k = k_values[k_index];
      const auto report = evaluate(acra_cell, data);
      acra_sum[ka_index * k_values.size() + k_index] = report.mean().accuracy;
    }
  }

  grid.acra_accuracy = std::move(acra_sum);
  grid.gt_accuracy.resize(cells);
  grid.gain.resize(cells);
  for (size_t ka_index = 0; ka_index < ka_values.size(); ++ka_index) {
    for (size_t k_index = 0; k_index < k_values.size(); ++k_index) {
      const size_t cell = ka_index * k_values.size() + k_index;
      grid.gt_accuracy[cell] = gt_sum[ka_index];
      grid.gain[cell] = grid.acra_accuracy[cell] - gt_sum[ka_index];
    }
  }
  return grid;
}

void write_grid_csv(const RobustnessGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "k,k_A,acra_accuracy,gt_accuracy,gain\n";
  char buffer[256];
  for (size_t ka_index = 0; ka_index < grid.ka_values.size(); ++ka_index) {
    for (size_t k_index = 0; k_index < grid.k_values.size(); ++k_index) {
      const size_t cell = ka_index * grid.k_values.size() + k_index;
      std::snprintf(buffer, sizeof(buffer), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    grid.k_values[k_index], grid.ka_values[ka_index],
                    grid.acra_accuracy[cell], grid.gt_accuracy[cell], grid.gain[cell]);
      out << buffer;
    }
  }
  if (!out) throw IoError("write failed: '" + path + "'");
}

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

BenchResult bench(const ExperimentConfig& config, const std::vector<double>& fractions) {
  if (fractions.empty()) throw ValidationError("bench requires at least one fraction");
  for (double f : fractions) {
    if (!(f > 0.0) || f > 1.0) throw ValidationError("bench fractions must lie in (0,1]");
  }
  const Dataset data = load_experiment_data(config);

  BenchResult result;
  result.fractions.resize(fractions.size());
  for (size_t i = 0; i < fractions.size(); ++i) result.fractions[i].fraction = fractions[i];

  for (int rep = 0; rep < config.repetitions; ++rep) {
    const uint64_t rep_seed = config.master_seed ^ static_cast<uint64_t>(rep);
    const UtilityMatrix utility = UtilityMatrix::from_id(config.utility_id);
    auto [train, test] = config.stratify
                             ? split_stratified(data, config.train_fraction, rep_seed)
                             : split(data, config.train_fraction, rep_seed);
    const GenerativeModel model = GenerativeModel::fit(train, config.smoothing);
    const StreamFamily rep_rng(rep_seed);
    const DetectionOracle oracle = worst_case_oracle(
        [&model, utility](const BinaryInstance& x) { return nb_classify(model, utility, x); });
    const Dataset tainted =
        taint_test_set(test, config.attacker, oracle, config.budget, rep_rng);

    const int jobs = config.jobs == 0 ? 1 : config.jobs;

    auto t0 = Clock::now();
    const auto exact_results = parallel_classify(
        tainted.instances,
        [&](const BinaryInstance& x) {
          return acra_classify(x, model, config.beliefs, utility, config.budget,
                               config.mc_samples, rep_rng);
        },
        jobs);
    const double exact_ms = ms_since(t0);

    ConfusionCounts exact_counts;
    for (size_t i = 0; i < exact_results.size(); ++i) {
      exact_counts.add(exact_results[i].label, *tainted.instances[i].label);
    }
    result.exact_accuracy.push_back(exact_counts.accuracy());

    for (size_t fi = 0; fi < fractions.size(); ++fi) {
      McConfig mc = config.mc;
      mc.sample_fraction = fractions[fi];
      t0 = Clock::now();
      const auto mc_results = parallel_classify(
          tainted.instances,
          [&](const BinaryInstance& x) {
            return mc_classify(x, model, config.beliefs, utility, config.budget,
                               config.mc_samples, mc, rep_rng);
          },
          jobs);
      const double mc_ms = ms_since(t0);

      ConfusionCounts mc_counts;
      for (size_t i = 0; i < mc_results.size(); ++i) {
        mc_counts.add(mc_results[i].label, *tainted.instances[i].label);
      }
      result.fractions[fi].speedups.push_back(exact_ms / std::max(mc_ms, 1e-6));
      result.fractions[fi].acc_deltas.push_back(mc_counts.accuracy() -
                                                exact_counts.accuracy());
    }
  }

  for (auto& fraction : result.fractions) {
    fraction.mean_speedup = mean_of(fraction.speedups);
    fraction.median_speedup = median_of(fraction.speedups);
    fraction.mean_acc_delta = mean_of(fraction.acc_deltas);
  }
  return result;
}

void write_bench_csv(const BenchResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "fraction,rep,speedup,acc_delta,exact_accuracy\n";
  char buffer[256];
  for (const auto& fraction : result.fractions) {
    for (size_t rep = 0; rep < fraction.speedups.size(); ++rep) {
      std::snprintf(buffer, sizeof(buffer), "%.17g,%zu,%.17g,%.17g,%.17g\n",
                    fraction.fraction, rep, fraction.speedups[rep],
                    fraction.acc_deltas[rep], result.exact_accuracy[rep]);
      out << buffer;
    }
    std::snprintf(buffer, sizeof(buffer), "%.17g,mean,%.17g,%.17g,\n", fraction.fraction,
                  fraction.mean_speedup, fraction.mean_acc_delta);
    out << buffer;
    std::snprintf(buffer, sizeof(buffer), "%.17g,median,%.17g,,\n", fraction.fraction,
                  fraction.median_speedup);
    out << buffer;
  }
  if (!out) throw IoError("write failed: '" + path + "'");
}

}  // namespace acra
