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

#ifndef ACRA_SCALABLE_ENGINE_HPP_
#define ACRA_SCALABLE_ENGINE_HPP_

#include <functional>
#include <string>
#include <vector>

#include "acra/ara_engine.hpp"

namespace acra {

struct McConfig {
  double sample_fraction = 1.0;   // N = ceil(fraction * |origin set|)
  bool sequential = false;        // early positive declaration
  bool dirichlet_smoothing = false;
  // The decision margin uses the standard error of the running mean. The
  // literal sample standard deviation of the summands is available behind
  // this flag; its margin is so wide on heterogeneous origin sets that the
  // subsampled rule stops tracking the exhaustive one.
  bool verbatim_spread = false;
  int parallel_batches = 1;       // term-evaluation worker hint
};

// Importance distribution over the origin set: draws origins proportionally
// to p(x|+). The normalizer Q is computed exactly by enumeration.
class ImportanceSampler {
 public:
  ImportanceSampler(const BinaryInstance& observed, const GenerativeModel& model,
                    AttackBudget budget);

  double log_total_weight() const { return log_total_; }  // log Q
  double total_weight() const;                            // Q; underflows for large n
  const std::vector<BinaryInstance>& origins() const { return origins_; }
  int draw_index(Philox& rng) const;
  const BinaryInstance& draw(Philox& rng) const { return origins_[draw_index(rng)]; }

 private:
  std::vector<BinaryInstance> origins_;
  std::vector<double> cumulative_;  // rescaled cumulative weights
  double log_total_ = 0.0;
};

inline ImportanceSampler importance_weight(const BinaryInstance& observed,
                                           const GenerativeModel& model,
                                           AttackBudget budget) {
  return ImportanceSampler(observed, model, budget);
}

// Posterior-mean attack probability under a Dirichlet(1,...,1) prior over the
// attacks: (count + 1) / (total + |attack set|).
double smoothed_attack_prob(uint32_t count, uint32_t total_samples,
                            size_t attack_set_size);

// Running mean and spread of the summation terms, maintained by the stated
// recursions. At every step the mean equals the batch mean and the squared
// spread equals the batch sample variance of the terms seen so far.
class SequentialAccumulator {
 public:
  void add(double term);
  int count() const { return count_; }
  double mean() const { return mean_; }
  double spread() const;  // sample standard deviation; 0 before the second term

 private:
  int count_ = 0;
  double mean_ = 0.0;
  double spread_sq_ = 0.0;
};

struct McDecision {
  Label label = Label::negative;
  double estimate = 0.0;      // running mean of Q * p_hat, in rescaled units
  double spread = 0.0;        // sample standard deviation of the terms
  double threshold = 0.0;     // rescaled decision threshold
  double log_scale = 0.0;     // everything above is in units of exp(log_scale)
  int terms_used = 0;
  bool stopped_early = false;
};

// Monte Carlo decision rule: importance-sample origins and keep the running
// mean and spread of the terms Q * p_hat. With sequential stopping enabled, a
// positive is declared as soon as the mean clears the threshold by twice the
// spread; at exhaustion the plain mean-threshold comparison decides.
Label mc_classify(const BinaryInstance& observed, const GenerativeModel& model,
                  const AdversaryBeliefModel& beliefs, const UtilityMatrix& utility,
                  AttackBudget budget, uint32_t samples, const McConfig& config,
                  const StreamFamily& rng, McDecision* decision = nullptr);

struct BatchItem {
  Label label = Label::negative;
  std::string error;
  bool ok() const { return error.empty(); }
};

// Deterministic parallel map over a batch of instances. Per-instance failures
// are reported in the result slot instead of aborting the batch. Determinism
// across worker counts holds because classifiers derive their randomness from
// instance content, not from scheduling.
std::vector<BatchItem> parallel_classify(
    const std::vector<BinaryInstance>& batch,
    const std::function<Label(const BinaryInstance&)>& classify_one, int jobs);

}  // namespace acra

#endif  // ACRA_SCALABLE_ENGINE_HPP_
