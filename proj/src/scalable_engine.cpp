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

#include "acra/scalable_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "acra/errors.hpp"

namespace acra {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ImportanceSampler::ImportanceSampler(const BinaryInstance& observed,
                                     const GenerativeModel& model, AttackBudget budget)
    : origins_(origin_set(observed, budget)) {
  std::vector<double> log_weights;
  log_weights.reserve(origins_.size());
  double shift = -kInf;
  for (const auto& origin : origins_) {
    log_weights.push_back(model.log_likelihood(origin, Label::positive));
    shift = std::max(shift, log_weights.back());
  }
  cumulative_.resize(origins_.size());
  double running = 0.0;
  for (size_t i = 0; i < origins_.size(); ++i) {
    running += std::exp(log_weights[i] - shift);
    cumulative_[i] = running;
  }
  if (!(running > 0.0)) {
    throw NumericError("importance sampler: total origin weight is zero");
  }
  log_total_ = shift + std::log(running);
}

double ImportanceSampler::total_weight() const { return std::exp(log_total_); }

int ImportanceSampler::draw_index(Philox& rng) const {
  const double u = rng.next_double() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const size_t index = std::min<size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
  return static_cast<int>(index);
}

double smoothed_attack_prob(uint32_t count, uint32_t total_samples,
                            size_t attack_set_size) {
  return (static_cast<double>(count) + 1.0) /
         (static_cast<double>(total_samples) + static_cast<double>(attack_set_size));
}

void SequentialAccumulator::add(double term) {
  const int next = count_ + 1;
  const double prev_mean = mean_;
  mean_ = ((next - 1) * prev_mean + term) / next;
  if (next >= 2) {
    spread_sq_ = ((next - 2) * spread_sq_ + term * term +
                  (next - 1) * prev_mean * prev_mean - next * mean_ * mean_) /
                 (next - 1);
    if (spread_sq_ < 0.0) spread_sq_ = 0.0;  // fp cancellation guard
  }
  count_ = next;
}

double SequentialAccumulator::spread() const { return std::sqrt(spread_sq_); }

namespace {

// The margin used by the decision rule: standard error of the running mean,
// or the raw sample standard deviation when the verbatim form is requested.
double decision_spread(const SequentialAccumulator& terms, const McConfig& config) {
  double spread = terms.spread();
  if (!config.verbatim_spread && terms.count() >= 1) {
    spread /= std::sqrt(static_cast<double>(terms.count()));
  }
  return spread;
}

// Attack probability for one drawn origin, raw or Dirichlet-smoothed.
double term_attack_prob(const BinaryInstance& origin, const BinaryInstance& observed,
                        const GenerativeModel& model, const AdversaryBeliefModel& beliefs,
                        AttackBudget budget, uint32_t samples, bool dirichlet,
                        const StreamFamily& tally_rng) {
  Attack attack;
  for (int i = 0; i < origin.dimension(); ++i) {
    if (origin.bits[i] != observed.bits[i]) attack.insert_indices.push_back(i);
  }
  const AttackTally tally =
      simulate_attack_choices(origin, model, beliefs, budget, samples, tally_rng);
  const int index = tally.find(attack);
  return dirichlet ? tally.smoothed_prob(index) : tally.raw_prob(index);
}

}  // namespace

Label mc_classify(const BinaryInstance& observed, const GenerativeModel& model,
                  const AdversaryBeliefModel& beliefs, const UtilityMatrix& utility,
                  AttackBudget budget, uint32_t samples, const McConfig& config,
                  const StreamFamily& rng, McDecision* decision) {
  if (!(config.sample_fraction > 0.0) || config.sample_fraction > 1.0) {
    throw ValidationError("sample fraction must lie in (0,1]");
  }
  const ImportanceSampler sampler(observed, model, budget);
  const int total_origins = static_cast<int>(sampler.origins().size());
  const int draw_count = static_cast<int>(
      std::ceil(config.sample_fraction * static_cast<double>(total_origins)));

  // Rescale so that both the threshold and the term weights are representable
  // in linear space; the decision is invariant to the common factor.
  const double log_t = log_decision_threshold(observed, model, utility);
  const double log_scale = std::max(sampler.log_total_weight(), log_t);
  const double q_scaled = std::exp(sampler.log_total_weight() - log_scale);
  const double t_scaled = std::exp(log_t - log_scale);

  // Fix the origin draws up front; term evaluation must not disturb them.
  Philox draw_rng = rng.derive(stream_tag::kOriginDraw).stream(instance_hash(observed));
  std::vector<int> drawn(draw_count);
  for (int m = 0; m < draw_count; ++m) drawn[m] = sampler.draw_index(draw_rng);

  const StreamFamily tally_rng = rng.derive(stream_tag::kAttackChoice);
  auto term_value = [&](int origin_index) {
    const double p_hat = term_attack_prob(sampler.origins()[origin_index], observed,
                                          model, beliefs, budget, samples,
                                          config.dirichlet_smoothing, tally_rng);
    return q_scaled * p_hat;
  };

  // Terms arrive in batches (possibly computed by several workers), but the
  // running recursions and the stopping checks always consume them in draw
  // order, so the decision matches the single-worker path exactly.
  const int workers = std::max(1, config.parallel_batches);
  const int batch_size =
      workers == 1 ? draw_count : std::max(1, (draw_count + workers - 1) / workers);

  SequentialAccumulator terms;
  bool stopped = false;
  std::vector<double> batch_terms;
  for (int start = 0; start < draw_count && !stopped; start += batch_size) {
    const int end = std::min(draw_count, start + batch_size);
    batch_terms.assign(end - start, 0.0);
    if (workers == 1 || end - start == 1) {
      for (int m = start; m < end; ++m) batch_terms[m - start] = term_value(drawn[m]);
    } else {
      std::atomic<int> next{start};
      std::vector<std::thread> pool;
      const int pool_size = std::min(workers, end - start);
      pool.reserve(pool_size);
      for (int w = 0; w < pool_size; ++w) {
        pool.emplace_back([&] {
          for (int m = next.fetch_add(1); m < end; m = next.fetch_add(1)) {
            batch_terms[m - start] = term_value(drawn[m]);
          }
        });
      }
      for (auto& t : pool) t.join();
    }

    for (int m = start; m < end; ++m) {
      terms.add(batch_terms[m - start]);
      if (config.sequential && terms.count() >= 2) {
        if (terms.mean() - 2.0 * decision_spread(terms, config) > t_scaled) {
          stopped = true;
          break;
        }
      }
    }
  }

  // At exhaustion the unbiased comparison decides; the spread margin is a
  // confidence gate for early positives only. Requiring the margin here too
  // would permanently block instances whose term spread exceeds their mean,
  // however far above the threshold they sit.
  const double spread = decision_spread(terms, config);
  const Label label = stopped || terms.mean() > t_scaled ? Label::positive
                                                         : Label::negative;

  if (decision) {
    decision->label = label;
    decision->estimate = terms.mean();
    decision->spread = spread;
    decision->threshold = t_scaled;
    decision->log_scale = log_scale;
    decision->terms_used = terms.count();
    decision->stopped_early = stopped;
  }
  return label;
}

std::vector<BatchItem> parallel_classify(
    const std::vector<BinaryInstance>& batch,
    const std::function<Label(const BinaryInstance&)>& classify_one, int jobs) {
  std::vector<BatchItem> results(batch.size());
  if (batch.empty()) return results;

  auto run_one = [&](size_t i) {
    try {
      results[i].label = classify_one(batch[i]);
    } catch (const std::exception& e) {
      results[i].error = e.what();
    } catch (...) {
      results[i].error = "unknown error";
    }
  };

  if (jobs <= 1) {
    for (size_t i = 0; i < batch.size(); ++i) run_one(i);
    return results;
  }

  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  const int pool_size = std::min<size_t>(jobs, batch.size());
  pool.reserve(pool_size);
  for (int w = 0; w < pool_size; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < batch.size(); i = next.fetch_add(1)) {
        run_one(i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace acra
