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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the exit status is the number of failures. Run `acceptance --list` to see
// the criteria, `acceptance 3 5` to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "acra/experiment.hpp"
#include "acra/synthetic.hpp"

using namespace acra;

namespace {

struct Check {
  std::string detail;
  bool ok;
};

std::vector<Check> g_checks;

void expect(bool ok, const std::string& detail) { g_checks.push_back({detail, ok}); }

void expect_near(double value, double target, double tolerance, const std::string& name) {
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), "%s = %.4f (target %.3f +- %.3f)", name.c_str(),
                value, target, tolerance);
  expect(std::abs(value - target) <= tolerance, buffer);
}

void expect_ge(double value, double bound, const std::string& name) {
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), "%s = %.4f (>= %.3f)", name.c_str(), value, bound);
  expect(value >= bound, buffer);
}

void expect_in(double value, double lo, double hi, const std::string& name) {
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), "%s = %.3f (within [%.2f, %.2f])", name.c_str(),
                value, lo, hi);
  expect(value >= lo && value <= hi, buffer);
}

// Desk-scale benchmark corpus: the documented stand-in for the 4601 x 54
// spam corpus with 1813 positives.
const Dataset& benchmark_corpus() {
  static const Dataset corpus = synthesize_spam_corpus(4601, 1813, 1);
  return corpus;
}

ExperimentConfig desk_config() {
  ExperimentConfig config;
  config.utility_id = "zero-one";
  config.beliefs.var_fraction_k = 0.1;
  config.mc_samples = 1000;
  config.repetitions = 10;
  config.budget = {1};
  config.master_seed = 20190415;
  return config;
}

// ---------------------------------------------------------------------------
// Criterion 1: headline metrics of the robust rule and the tainted baseline.

void criterion1() {
  ExperimentConfig config = desk_config();
  config.variant = "acra";
  const MetricsReport acra = evaluate(config, benchmark_corpus());
  config.variant = "nb";
  const MetricsReport nb = evaluate(config, benchmark_corpus());

  const auto mean = acra.mean();
  expect_near(mean.accuracy, 0.919, 0.03, "robust accuracy");
  expect_near(mean.fpr, 0.019, 0.015, "robust FPR");
  expect_near(mean.fnr, 0.177, 0.06, "robust FNR");
  expect_near(nb.mean().accuracy, 0.761, 0.10, "tainted baseline accuracy");
}

// ---------------------------------------------------------------------------
// Criterion 2: ordering and monotonicity across k and the utility models.

void criterion2() {
  const std::vector<double> k_values = {0.01, 0.1, 0.5};
  const std::vector<std::string> utilities = {"zero-one", "penalty-2", "penalty-5",
                                              "penalty-10"};
  for (const auto& utility : utilities) {
    ExperimentConfig config = desk_config();
    config.utility_id = utility;
    config.variant = "nb";
    const MetricsReport nb = evaluate(config, benchmark_corpus());
    const double nb_acc = nb.mean().accuracy;
    const double nb_util = nb.mean().avg_utility;

    // The subsampled engine carries the ordering claims at a tractable cost.
    config.variant = "acra-mc";
    config.mc.sample_fraction = 0.5;
    config.mc.sequential = true;

    std::vector<double> acc(k_values.size()), acc_sd(k_values.size());
    for (size_t i = 0; i < k_values.size(); ++i) {
      config.beliefs.var_fraction_k = k_values[i];
      const MetricsReport report = evaluate(config, benchmark_corpus());
      acc[i] = report.mean().accuracy;
      acc_sd[i] = report.stddev().accuracy;
      char name[96];
      std::snprintf(name, sizeof(name), "%s k=%.2f: robust accuracy %.4f >= baseline",
                    utility.c_str(), k_values[i], acc[i]);
      expect(report.mean().accuracy >= nb_acc, name);
      std::snprintf(name, sizeof(name), "%s k=%.2f: robust utility %.4f >= baseline",
                    utility.c_str(), k_values[i], report.mean().avg_utility);
      expect(report.mean().avg_utility >= nb_util, name);
    }
    for (size_t i = 0; i + 1 < k_values.size(); ++i) {
      char name[120];
      std::snprintf(name, sizeof(name),
                    "%s: accuracy at k=%.2f (%.4f) within error bars below k=%.2f (%.4f)",
                    utility.c_str(), k_values[i + 1], acc[i + 1], k_values[i], acc[i]);
      expect(acc[i + 1] <= acc[i] + std::max(acc_sd[i], acc_sd[i + 1]), name);
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 3: Monte Carlo fraction sweep, accuracy and speed-ups.

void criterion3() {
  ExperimentConfig config = desk_config();
  config.variant = "acra";
  config.mc.sequential = true;
  const BenchResult result = bench(config, {0.5, 0.25});

  const BenchFraction& half = result.fractions[0];
  const BenchFraction& quarter = result.fractions[1];
  expect(std::abs(half.mean_acc_delta) <= 0.02,
         "fraction 0.5 accuracy within 0.02 of exhaustive (delta " +
             std::to_string(half.mean_acc_delta) + ")");
  expect_in(half.median_speedup, 1.5, 3.0, "fraction 0.5 median speed-up");
  expect_in(quarter.median_speedup, 2.5, 6.0, "fraction 0.25 median speed-up");
  expect(half.mean_speedup > half.median_speedup,
         "fraction 0.5 right skew (mean " + std::to_string(half.mean_speedup) +
             " > median " + std::to_string(half.median_speedup) + ")");
  expect(quarter.mean_speedup > quarter.median_speedup,
         "fraction 0.25 right skew (mean " + std::to_string(quarter.mean_speedup) +
             " > median " + std::to_string(quarter.median_speedup) + ")");
}

// ---------------------------------------------------------------------------
// Criterion 4: robustness floors against perturbed attackers.

void criterion4() {
  const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (const PerturbMode mode : {PerturbMode::beta, PerturbMode::uniform}) {
    ExperimentConfig config = desk_config();
    config.variant = "acra-mc";
    config.mc.sample_fraction = 0.5;
    config.mc.sequential = true;
    config.mc.dirichlet_smoothing = true;
    config.mc_samples = 250;  // small-sample mode, smoothed
    config.attacker.perturbation = mode;

    const RobustnessGrid result = robustness_grid(config, grid, grid);
    double min_acc = 1.0;
    for (double acc : result.acra_accuracy) min_acc = std::min(min_acc, acc);
    expect_ge(min_acc, 0.85,
              std::string("grid accuracy floor (") + perturb_mode_id(mode) + ")");
    // Largest attacker perturbation, smallest classifier variance.
    const double edge_gain = result.gain_at(grid.size() - 1, 0);
    expect_ge(edge_gain, 0.0, std::string("gain at max k_A, min k (") +
                                  perturb_mode_id(mode) + ")");
  }
}

// ---------------------------------------------------------------------------
// Criterion 5: estimator property suite (no corpus involved).

GenerativeModel acceptance_model(double prior, const std::vector<double>& tp,
                                 const std::vector<double>& tm) {
  const std::string path = "./acceptance_fixture.txt";
  std::FILE* f = std::fopen(path.c_str(), "w");
  std::fprintf(f, "%zu 1\n%.17g\n", tp.size(), prior);
  for (size_t i = 0; i < tp.size(); ++i) {
    std::fprintf(f, "%zu %.17g %.17g\n", i, tp[i], tm[i]);
  }
  std::fclose(f);
  GenerativeModel model = GenerativeModel::load(path);
  std::remove(path.c_str());
  return model;
}

GenerativeModel random_acceptance_model(int n, Philox& rng) {
  std::vector<double> tp(n), tm(n);
  for (int i = 0; i < n; ++i) {
    tp[i] = 0.05 + 0.9 * rng.next_double();
    tm[i] = 0.05 + 0.9 * rng.next_double();
  }
  return acceptance_model(0.2 + 0.6 * rng.next_double(), tp, tm);
}

void criterion5() {
  // (a) tallies sum to the sample count; degenerate models give {0,1}.
  {
    Philox gen(100, 0);
    const GenerativeModel model = random_acceptance_model(6, gen);
    AdversaryBeliefModel beliefs;
    bool sums_ok = true, degen_ok = true;
    for (int trial = 0; trial < 10; ++trial) {
      BinaryInstance x;
      x.bits.resize(6);
      for (int i = 0; i < 6; ++i) x.bits[i] = gen.next_double() < 0.5;
      const AttackTally tally =
          simulate_attack_choices(x, model, beliefs, {1}, 500, StreamFamily(trial));
      sums_ok &= std::accumulate(tally.counts.begin(), tally.counts.end(), 0u) == 500u;
      const AttackTally point = simulate_attack_choices(
          x, model, beliefs.collapsed(), {1}, 500, StreamFamily(trial));
      for (uint32_t c : point.counts) degen_ok &= (c == 0u || c == 500u);
    }
    expect(sums_ok, "(a) argmax tallies sum to the sample count");
    expect(degen_ok, "(b=0,1) degenerate beliefs give zero-one estimates");
  }

  // (b) beta moments: symbolic identities to ten digits and a sampling check.
  {
    Philox rng(101, 0);
    bool symbolic_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
      const double r = 0.001 + 0.998 * rng.next_double();
      const double k = 0.01 + 0.99 * rng.next_double();
      const auto [d1, d2] = detection_prob_params(r, k);
      const double mean = d1 / (d1 + d2);
      const double var = d1 * d2 / ((d1 + d2) * (d1 + d2) * (d1 + d2 + 1.0));
      symbolic_ok &= std::abs(mean - r) <= 1e-10 * r;
      symbolic_ok &= std::abs(var - k * beta_variance_bound(r)) <=
                     1e-10 * k * beta_variance_bound(r);
    }
    expect(symbolic_ok, "(b) beta parameters hit the target moments to 10 digits");

    const double r = 0.42, k = 0.35;
    const auto [d1, d2] = detection_prob_params(r, k);
    const int n = 100000;
    double sum = 0, sum_sq = 0;
    std::vector<double> draws;
    draws.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double x = rng.beta(d1, d2);
      draws.push_back(x);
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    const double target_var = k * beta_variance_bound(r);
    double m4 = 0;
    for (double x : draws) m4 += std::pow(x - mean, 4);
    m4 /= n;
    const bool mean_ok = std::abs(mean - r) <= 3.0 * std::sqrt(target_var / n);
    const bool var_ok =
        std::abs(var - target_var) <= 3.0 * std::sqrt((m4 - var * var) / n);
    expect(mean_ok && var_ok, "(b) sampled beta moments within three standard errors");
  }

  // (c) unbiasedness of the subsampled estimator against the exhaustive sum.
  {
    Philox gen(102, 0);
    int tested = 0;
    bool ok = true;
    for (int attempt = 0; attempt < 20 && tested < 3; ++attempt) {
      const GenerativeModel model = random_acceptance_model(8, gen);
      const AdversaryBeliefModel beliefs = AdversaryBeliefModel{}.collapsed();
      BinaryInstance observed;
      observed.bits.resize(8);
      for (int i = 0; i < 8; ++i) observed.bits[i] = gen.next_double() < 0.6;
      if (observed.ones_count() < 3) continue;

      const ImportanceSampler sampler(observed, model, {1});
      double exact = 0.0;
      double min_term = 1.0, max_term = 0.0;
      for (const auto& origin : sampler.origins()) {
        const double p_hat = estimate_attack_prob(origin, observed, model, beliefs, {1},
                                                  64, StreamFamily(7777));
        min_term = std::min(min_term, p_hat);
        max_term = std::max(max_term, p_hat);
        exact += p_hat * std::exp(model.log_likelihood(origin, Label::positive));
      }
      if (max_term == min_term) continue;
      ++tested;

      McConfig mc;
      mc.sample_fraction = 0.5;
      const int replications = 1000;
      double sum = 0, sum_sq = 0, log_scale = 0;
      for (int r = 0; r < replications; ++r) {
        McDecision decision;
        mc_classify(observed, model, beliefs, UtilityMatrix::zero_one(), {1}, 64, mc,
                    StreamFamily(7777).derive(r), &decision);
        sum += decision.estimate;
        sum_sq += decision.estimate * decision.estimate;
        log_scale = decision.log_scale;
      }
      const double mean = sum / replications;
      const double sd = std::sqrt(std::max(0.0, sum_sq / replications - mean * mean));
      ok &= std::abs(mean - exact / std::exp(log_scale)) <=
            3.0 * sd / std::sqrt(static_cast<double>(replications)) + 1e-12;
    }
    expect(ok && tested == 3,
           "(c) subsampled estimator unbiased against the exhaustive sum");
  }

  // (d) argmax form and threshold form agree.
  {
    Philox rng(103, 0);
    bool ok = true;
    for (int trial = 0; trial < 10000; ++trial) {
      const int n = 1 + static_cast<int>(rng.next_double() * 5);
      std::vector<double> tp(n), tm(n);
      for (int i = 0; i < n; ++i) {
        tp[i] = 0.02 + 0.96 * rng.next_double();
        tm[i] = 0.02 + 0.96 * rng.next_double();
      }
      const GenerativeModel model = acceptance_model(0.05 + 0.9 * rng.next_double(), tp, tm);
      const UtilityMatrix utility = trial % 2 == 0
                                        ? UtilityMatrix::zero_one()
                                        : UtilityMatrix::penalized(-1 - 9 * rng.next_double());
      BinaryInstance observed;
      observed.bits.resize(n);
      for (int i = 0; i < n; ++i) observed.bits[i] = rng.next_double() < 0.5;
      const double log_mass = std::log(rng.next_double() + 1e-12) +
                              model.log_likelihood(observed, Label::positive);
      ok &= argmax_rule(log_mass, observed, model, utility) ==
            threshold_rule(log_mass, observed, model, utility);
    }
    expect(ok, "(d) argmax and threshold forms agree on 10^4 random instances");
  }

  // (e) attack/origin duality, exhaustive.
  {
    bool ok = true;
    for (int n : {6, 10}) {
      for (int k : {1, 2}) {
        for (int mask = 0; mask < (1 << n); ++mask) {
          BinaryInstance x;
          x.bits.resize(n);
          for (int i = 0; i < n; ++i) x.bits[i] = (mask >> i) & 1;
          for (const Attack& a : attack_set(x, {k})) {
            const BinaryInstance dest = apply_attack(a, x);
            const auto origins = origin_set(dest, {k});
            ok &= std::find(origins.begin(), origins.end(), x) != origins.end();
          }
          for (const BinaryInstance& origin : origin_set(x, {k})) {
            Attack a;
            for (int i = 0; i < n; ++i) {
              if (origin.bits[i] != x.bits[i]) a.insert_indices.push_back(i);
            }
            ok &= a.change_count() <= k;
            ok &= apply_attack(a, origin).bits == x.bits;
          }
        }
      }
    }
    expect(ok, "(e) attack/origin duality holds exhaustively for n <= 10, k <= 2");
  }

  // (f) parallel and single-worker classification agree.
  {
    Philox gen(104, 0);
    const GenerativeModel model = random_acceptance_model(8, gen);
    AdversaryBeliefModel beliefs;
    const StreamFamily rng(4242);
    std::vector<BinaryInstance> batch;
    for (int i = 0; i < 80; ++i) {
      BinaryInstance x;
      x.bits.resize(8);
      for (int j = 0; j < 8; ++j) x.bits[j] = gen.next_double() < 0.5;
      batch.push_back(x);
    }
    const auto classify = [&](const BinaryInstance& x) {
      return acra_classify(x, model, beliefs, UtilityMatrix::zero_one(), {1}, 80, rng);
    };
    const auto serial = parallel_classify(batch, classify, 1);
    const auto threaded = parallel_classify(batch, classify, 4);
    bool ok = true;
    for (size_t i = 0; i < batch.size(); ++i) {
      ok &= serial[i].ok() && threaded[i].ok() && serial[i].label == threaded[i].label;
    }
    expect(ok, "(f) one worker and four workers produce identical label vectors");
  }
}

// ---------------------------------------------------------------------------
// Criterion 6: two-word insertion budget, subsampled engine vs baseline.

void criterion6() {
  ExperimentConfig config = desk_config();
  config.budget = {2};
  config.variant = "acra-mc";
  config.mc.sample_fraction = 0.5;
  config.mc.sequential = true;
  config.mc.dirichlet_smoothing = true;
  config.mc_samples = 100;  // small-sample mode over the larger attack sets

  const MetricsReport acra = evaluate(config, benchmark_corpus());
  config.variant = "nb";
  const MetricsReport nb = evaluate(config, benchmark_corpus());
  const double gap = acra.mean().accuracy - nb.mean().accuracy;
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer),
                "two-insertion budget: %.4f vs baseline %.4f (gap %.4f >= 0.10)",
                acra.mean().accuracy, nb.mean().accuracy, gap);
  expect(gap >= 0.10, buffer);
}

struct Criterion {
  int number;
  const char* summary;
  std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "headline accuracy/FPR/FNR and tainted baseline", criterion1},
      {2, "ordering and monotonicity over k and utility models", criterion2},
      {3, "Monte Carlo fraction sweep: accuracy and speed-ups", criterion3},
      {4, "robustness floors under perturbed attackers", criterion4},
      {5, "estimator property suite", criterion5},
      {6, "two-word insertion budget comparison", criterion6},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : criteria) std::printf("%d: %s\n", c.number, c.summary);
      return 0;
    }
    selected.push_back(std::atoi(argv[i]));
  }

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), criterion.number) == selected.end()) {
      continue;
    }
    g_checks.clear();
    const auto start = std::chrono::steady_clock::now();
    criterion.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = true;
    for (const auto& check : g_checks) ok &= check.ok;
    std::printf("[%s] criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", criterion.number,
                criterion.summary, seconds);
    for (const auto& check : g_checks) {
      std::printf("    %s %s\n", check.ok ? "ok  " : "FAIL", check.detail.c_str());
    }
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
