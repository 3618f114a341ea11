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

#ifndef ACRA_ADVERSARY_SIM_HPP_
#define ACRA_ADVERSARY_SIM_HPP_

#include <functional>
#include <string>
#include <vector>

#include "acra/attack_space.hpp"
#include "acra/corpus.hpp"
#include "acra/rng.hpp"

namespace acra {

enum class PerturbMode { none, beta, uniform };

PerturbMode perturb_mode_from_id(const std::string& id);
std::string perturb_mode_id(PerturbMode mode);

// The attacker's own (deterministic, from his point of view) parameters.
struct AttackerParams {
  double gain_detected = -5.0;
  double gain_evaded = 5.0;
  double cost_per_change = 0.5;
  double risk_proneness = 0.5;
  PerturbMode perturbation = PerturbMode::none;
  double k_attacker = 0.0;  // perturbation scale

  void validate() const;
};

// Probability that the classifier declares an instance malicious, as the
// attacker believes it.
using DetectionOracle = std::function<double(const BinaryInstance&)>;

// The worst-case attacker knows the deployed classifier's decision exactly.
DetectionOracle worst_case_oracle(
    const std::function<Label(const BinaryInstance&)>& target);

// Departure from common knowledge: beta keeps the mean and inflates the
// variance to k * bound, uniform adds U[-k, k] and clamps to [0,1].
double perturb(double p, PerturbMode mode, double k_attacker, Philox& rng);

// Expected-utility attack choice over attack_set(x); ties resolve to the
// identity first, then lexicographic order.
Attack solve_attack(const BinaryInstance& x, const AttackerParams& params,
                    const DetectionOracle& oracle, AttackBudget budget, Philox& rng);

struct TaintRecord {
  int instance_index = 0;
  Attack attack;
};

// Attacks every positive instance of a labelled test set; negative instances
// pass through untouched. Labels never change.
Dataset taint_test_set(const Dataset& test, const AttackerParams& params,
                       const DetectionOracle& oracle, AttackBudget budget,
                       const StreamFamily& rng,
                       std::vector<TaintRecord>* audit = nullptr);

// Sidecar audit file: one line per attacked instance with the inserted
// feature indices.
void write_taint_audit(const std::vector<TaintRecord>& audit, const std::string& path);

}  // namespace acra

#endif  // ACRA_ADVERSARY_SIM_HPP_
