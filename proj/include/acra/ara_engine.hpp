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

#ifndef ACRA_ARA_ENGINE_HPP_
#define ACRA_ARA_ENGINE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "acra/attack_space.hpp"
#include "acra/corpus.hpp"
#include "acra/generative_model.hpp"
#include "acra/rng.hpp"

namespace acra {

// A distribution given by its first two moments; variance 0 is the point mass
// at the mean (used by tests and by the game-theoretic baseline).
struct MomentGamma {
  double mean = 0.0;
  double variance = 0.0;
  bool degenerate() const { return variance <= 0.0; }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const { return 0.5 * (lo + hi); }
  bool degenerate() const { return lo >= hi; }
};

// What the classifier believes about the adversary: gains from detection and
// evasion (gamma, by sign convention the detected gain is negative), the
// per-change cost factor and risk proneness (uniform), and the fraction k of
// the maximum admissible variance used for the detection-probability beta.
struct AdversaryBeliefModel {
  MomentGamma gain_detected{-5.0, 0.01};
  MomentGamma gain_evaded{5.0, 0.01};
  Interval cost_per_change{0.4, 0.6};
  Interval risk_proneness{0.4, 0.6};
  double var_fraction_k = 0.1;

  void validate() const;
  bool fully_degenerate() const;
  // Point masses at the means, k = 0: the common-knowledge baseline.
  AdversaryBeliefModel collapsed() const;

  void save(const std::string& path) const;
  static AdversaryBeliefModel load(const std::string& path);
};

// Shape/scale of a gamma with the given mean magnitude and variance.
std::pair<double, double> gamma_from_moments(double mean, double variance);

// One draw of the adversary's random utilities for an attack with the given
// change count: (u_plus, u_minus) = exp(rho * (Y - d * alpha)) for the
// detected and evaded gains respectively.
std::pair<double, double> sample_adversary_utility(const AdversaryBeliefModel& model,
                                                   int change_count, Philox& rng);

// Concavity bound on the beta variance for mean r.
double beta_variance_bound(double r);

// Beta parameters with mean r and variance k * bound(r). Requires 0 < r < 1
// and k > 0; degenerate cases are the caller's shortcut.
std::pair<double, double> detection_prob_params(double r, double var_fraction_k);

// Heuristic posterior probability that an observed (possibly attacked)
// instance is malicious: mass of origins under the positive class plus the
// observation itself, against the observation under the negative class.
double compute_r(const BinaryInstance& attacked, const GenerativeModel& model,
                 AttackBudget budget);

// Argmax tallies of the simulated adversary's choices over attack_set(origin).
struct AttackTally {
  std::vector<Attack> attacks;   // lexicographic, identity first
  std::vector<uint32_t> counts;  // sums to samples
  uint32_t samples = 0;

  int find(const Attack& attack) const;  // -1 when absent
  double raw_prob(int index) const;
  double smoothed_prob(int index) const;  // Dirichlet(1,...,1) posterior mean
};

// Runs the adversary simulation for one origin: per sample, draws utilities
// and a detection-probability belief for every available attack, scores them
// and tallies the argmax (ties to the first attack in lexicographic order).
// Per-sample substreams are keyed by the origin's content hash, so results do
// not depend on evaluation order.
AttackTally simulate_attack_choices(const BinaryInstance& origin,
                                    const GenerativeModel& model,
                                    const AdversaryBeliefModel& beliefs,
                                    AttackBudget budget, uint32_t samples,
                                    const StreamFamily& rng);

// Monte Carlo estimate of the probability that the adversary transforms
// `origin` into `observed`, given the origin is malicious.
double estimate_attack_prob(const BinaryInstance& origin, const BinaryInstance& observed,
                            const GenerativeModel& model,
                            const AdversaryBeliefModel& beliefs, AttackBudget budget,
                            uint32_t samples, const StreamFamily& rng);

struct AcraDecision {
  Label label = Label::negative;
  double log_attack_mass = 0.0;  // log sum over origins of p_hat * p(x|+)
  double log_threshold = 0.0;
  int origin_count = 0;
};

// Log of the decision threshold: the attack mass must exceed
// [u(-,-) - u(+,-)] p(x'|-) p(-) / ([u(+,+) - u(-,+)] p(+)).
double log_decision_threshold(const BinaryInstance& observed,
                              const GenerativeModel& model,
                              const UtilityMatrix& utility);

// Expected-utility argmax given the log attack mass; algebraically equivalent
// to comparing against log_decision_threshold. Both routes are kept so tests
// can cross-check them.
Label argmax_rule(double log_attack_mass, const BinaryInstance& observed,
                  const GenerativeModel& model, const UtilityMatrix& utility);
Label threshold_rule(double log_attack_mass, const BinaryInstance& observed,
                     const GenerativeModel& model, const UtilityMatrix& utility);

// The full decision rule: estimate attack probabilities for every origin of
// the observation, accumulate the adversary-aware positive-class mass, and
// pick the expected-utility argmax.
Label acra_classify(const BinaryInstance& observed, const GenerativeModel& model,
                    const AdversaryBeliefModel& beliefs, const UtilityMatrix& utility,
                    AttackBudget budget, uint32_t samples, const StreamFamily& rng,
                    AcraDecision* decision = nullptr);

}  // namespace acra

#endif  // ACRA_ARA_ENGINE_HPP_
