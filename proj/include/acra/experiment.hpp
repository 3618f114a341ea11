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

#ifndef ACRA_EXPERIMENT_HPP_
#define ACRA_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "acra/adversary_sim.hpp"
#include "acra/metrics.hpp"
#include "acra/scalable_engine.hpp"

namespace acra {

// Full description of one repeated hold-out experiment. Flat key=value config
// files mirror these fields one to one.
struct ExperimentConfig {
  std::string data_path;
  std::string data_format = "csv";  // csv | bits
  CsvOptions csv;
  double train_fraction = 0.75;
  bool stratify = false;
  double smoothing = 1.0;

  AttackBudget budget{1};
  std::string utility_id = "zero-one";
  std::string variant = "acra";  // acra | acra-mc | nb | game-theory
  bool taint = true;             // attack the test set before evaluation

  uint32_t mc_samples = 1000;  // K
  int repetitions = 10;        // R
  uint64_t master_seed = 20190415;
  int jobs = 1;

  McConfig mc;                 // acra-mc settings
  AttackerParams attacker;     // includes k_A and the perturbation mode
  AdversaryBeliefModel beliefs;

  void validate() const;
};

// Parses one key=value assignment into the config; unknown keys throw.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);
ExperimentConfig load_config(const std::string& path);

// Loads the dataset named by the config (csv or canonical dump format).
Dataset load_experiment_data(const ExperimentConfig& config);

// Repeated hold-out evaluation: per repetition split / fit / taint / classify,
// with metrics aggregated over repetitions. Repetition r runs on seed
// master_seed xor r so any repetition reproduces in isolation.
MetricsReport evaluate(const ExperimentConfig& config);
MetricsReport evaluate(const ExperimentConfig& config, const Dataset& data);

struct RobustnessGrid {
  std::vector<double> k_values;
  std::vector<double> ka_values;
  // Row-major [ka][k] for the robust classifier; the common-knowledge
  // baseline depends on ka only.
  std::vector<double> acra_accuracy;
  std::vector<double> gt_accuracy;
  std::vector<double> gain;  // acra - gt, in accuracy points

  double acra_at(size_t ka_index, size_t k_index) const;
  double gain_at(size_t ka_index, size_t k_index) const;
};

// Shared tainted sets per (repetition, ka): the robust classifier at every k
// and the game-theoretic baseline face identical attacks.
RobustnessGrid robustness_grid(const ExperimentConfig& config,
                               const std::vector<double>& k_values,
                               const std::vector<double>& ka_values);
void write_grid_csv(const RobustnessGrid& grid, const std::string& path);

struct BenchFraction {
  double fraction = 0.0;
  std::vector<double> speedups;     // per repetition: exact time / mc time
  std::vector<double> acc_deltas;   // per repetition: mc accuracy - exact accuracy
  double mean_speedup = 0.0;
  double median_speedup = 0.0;
  double mean_acc_delta = 0.0;
};

struct BenchResult {
  std::vector<double> exact_accuracy;  // per repetition
  std::vector<BenchFraction> fractions;
};

// Times exhaustive classification against the subsampled Monte Carlo path on
// identical tainted sets.
BenchResult bench(const ExperimentConfig& config, const std::vector<double>& fractions);
void write_bench_csv(const BenchResult& result, const std::string& path);

}  // namespace acra

#endif  // ACRA_EXPERIMENT_HPP_
