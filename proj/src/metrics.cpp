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

#include "acra/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "acra/errors.hpp"

namespace acra {

double ConfusionCounts::accuracy() const {
  const long t = total();
  return t == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(t);
}

double ConfusionCounts::fpr() const {
  const long negatives = fp + tn;
  return negatives == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(negatives);
}

double ConfusionCounts::fnr() const {
  const long positives = fn + tp;
  return positives == 0 ? 0.0 : static_cast<double>(fn) / static_cast<double>(positives);
}

void ConfusionCounts::add(Label predicted, Label truth) {
  if (truth == Label::positive) {
    (predicted == Label::positive ? tp : fn) += 1;
  } else {
    (predicted == Label::positive ? fp : tn) += 1;
  }
}

double average_utility(const ConfusionCounts& counts, const UtilityMatrix& utility) {
  const long total = counts.total();
  if (total == 0) return 0.0;
  const double sum =
      counts.tp * utility(Label::positive, Label::positive) +
      counts.fn * utility(Label::negative, Label::positive) +
      counts.fp * utility(Label::positive, Label::negative) +
      counts.tn * utility(Label::negative, Label::negative);
  return sum / static_cast<double>(total);
}

namespace {

template <typename Getter>
double mean_of(const std::vector<RepMetrics>& reps, Getter get) {
  if (reps.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : reps) sum += get(r);
  return sum / static_cast<double>(reps.size());
}

template <typename Getter>
double stddev_of(const std::vector<RepMetrics>& reps, Getter get) {
  if (reps.size() < 2) return 0.0;
  const double mu = mean_of(reps, get);
  double ss = 0.0;
  for (const auto& r : reps) {
    const double d = get(r) - mu;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(reps.size() - 1));
}

std::string format_g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

MetricsReport::Aggregate MetricsReport::mean() const {
  return {mean_of(reps, [](const RepMetrics& r) { return r.accuracy; }),
          mean_of(reps, [](const RepMetrics& r) { return r.fpr; }),
          mean_of(reps, [](const RepMetrics& r) { return r.fnr; }),
          mean_of(reps, [](const RepMetrics& r) { return r.avg_utility; }),
          mean_of(reps, [](const RepMetrics& r) { return r.wall_ms(); })};
}

MetricsReport::Aggregate MetricsReport::stddev() const {
  return {stddev_of(reps, [](const RepMetrics& r) { return r.accuracy; }),
          stddev_of(reps, [](const RepMetrics& r) { return r.fpr; }),
          stddev_of(reps, [](const RepMetrics& r) { return r.fnr; }),
          stddev_of(reps, [](const RepMetrics& r) { return r.avg_utility; }),
          stddev_of(reps, [](const RepMetrics& r) { return r.wall_ms(); })};
}

void write_metrics_csv(const MetricsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "rep,variant,utility,k,k_A,budget,accuracy,fpr,fnr,avg_utility,wall_time_ms\n";
  const auto& run = report.run;
  const std::string common = run.utility_id + ',' + format_g17(run.var_fraction_k) + ',' +
                             format_g17(run.k_attacker) + ',' + std::to_string(run.budget);
  for (const auto& rep : report.reps) {
    out << rep.rep << ',' << run.variant << ',' << common << ','
        << format_g17(rep.accuracy) << ',' << format_g17(rep.fpr) << ','
        << format_g17(rep.fnr) << ',' << format_g17(rep.avg_utility) << ','
        << format_g17(rep.wall_ms()) << '\n';
  }
  if (report.reps.empty()) {  // header-only file
    if (!out) throw IoError("write failed: '" + path + "'");
    return;
  }
  const auto mean = report.mean();
  const auto sd = report.stddev();
  out << ',' << run.variant << ":mean," << common << ',' << format_g17(mean.accuracy)
      << ',' << format_g17(mean.fpr) << ',' << format_g17(mean.fnr) << ','
      << format_g17(mean.avg_utility) << ',' << format_g17(mean.wall_ms) << '\n';
  out << ',' << run.variant << ":std," << common << ',' << format_g17(sd.accuracy) << ','
      << format_g17(sd.fpr) << ',' << format_g17(sd.fnr) << ','
      << format_g17(sd.avg_utility) << ',' << format_g17(sd.wall_ms) << '\n';
  if (!out) throw IoError("write failed: '" + path + "'");
}

ParsedMetricsCsv read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  ParsedMetricsCsv parsed;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty metrics file: '" + path + "'");

  bool saw_mean = false, saw_std = false;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 11) {
      throw ValidationError("bad metrics row at line " + std::to_string(line_no));
    }
    const std::string& variant = fields[1];
    parsed.run.utility_id = fields[2];
    parsed.run.var_fraction_k = std::stod(fields[3]);
    parsed.run.k_attacker = std::stod(fields[4]);
    parsed.run.budget = std::stoi(fields[5]);

    const bool is_mean = variant.size() > 5 && variant.ends_with(":mean");
    const bool is_std = variant.size() > 4 && variant.ends_with(":std");
    if (is_mean || is_std) {
      MetricsReport::Aggregate agg;
      agg.accuracy = std::stod(fields[6]);
      agg.fpr = std::stod(fields[7]);
      agg.fnr = std::stod(fields[8]);
      agg.avg_utility = std::stod(fields[9]);
      agg.wall_ms = std::stod(fields[10]);
      (is_mean ? parsed.mean : parsed.stddev) = agg;
      (is_mean ? saw_mean : saw_std) = true;
      parsed.run.variant = variant.substr(0, variant.rfind(':'));
    } else {
      RepMetrics rep;
      rep.rep = std::stoi(fields[0]);
      rep.accuracy = std::stod(fields[6]);
      rep.fpr = std::stod(fields[7]);
      rep.fnr = std::stod(fields[8]);
      rep.avg_utility = std::stod(fields[9]);
      rep.classify_ms = std::stod(fields[10]);  // single wall-time column
      parsed.reps.push_back(rep);
      parsed.run.variant = variant;
    }
  }
  parsed.has_aggregates = saw_mean && saw_std;
  return parsed;
}

}  // namespace acra
