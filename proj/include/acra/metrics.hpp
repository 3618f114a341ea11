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

#ifndef ACRA_METRICS_HPP_
#define ACRA_METRICS_HPP_

#include <string>
#include <vector>

#include "acra/corpus.hpp"
#include "acra/generative_model.hpp"

namespace acra {

struct ConfusionCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;

  long total() const { return tp + fp + tn + fn; }
  double accuracy() const;
  double fpr() const;  // fp / (fp + tn)
  double fnr() const;  // fn / (fn + tp)

  void add(Label predicted, Label truth);
};

double average_utility(const ConfusionCounts& counts, const UtilityMatrix& utility);

struct RepMetrics {
  int rep = 0;
  double accuracy = 0, fpr = 0, fnr = 0, avg_utility = 0;
  ConfusionCounts confusion;
  double split_ms = 0, fit_ms = 0, taint_ms = 0, classify_ms = 0;

  double wall_ms() const { return split_ms + fit_ms + taint_ms + classify_ms; }
};

struct RunDescriptor {
  std::string variant = "acra";
  std::string utility_id = "zero-one";
  double var_fraction_k = 0.1;
  double k_attacker = 0.0;
  int budget = 1;
};

struct MetricsReport {
  RunDescriptor run;
  std::vector<RepMetrics> reps;

  struct Aggregate {
    double accuracy = 0, fpr = 0, fnr = 0, avg_utility = 0, wall_ms = 0;
  };
  Aggregate mean() const;
  Aggregate stddev() const;  // sample standard deviation; 0 for a single rep
};

// Schema: rep,variant,utility,k,k_A,budget,accuracy,fpr,fnr,avg_utility,
// wall_time_ms. One row per repetition, then ":mean" and ":std" rows.
// Numbers carry 17 significant digits so parsing recovers them exactly.
void write_metrics_csv(const MetricsReport& report, const std::string& path);

struct ParsedMetricsCsv {
  RunDescriptor run;
  std::vector<RepMetrics> reps;
  MetricsReport::Aggregate mean;
  MetricsReport::Aggregate stddev;
  bool has_aggregates = false;
};
ParsedMetricsCsv read_metrics_csv(const std::string& path);

}  // namespace acra

#endif  // ACRA_METRICS_HPP_
