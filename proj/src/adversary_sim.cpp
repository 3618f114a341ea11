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

#include "acra/adversary_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "acra/ara_engine.hpp"
#include "acra/errors.hpp"

namespace acra {

PerturbMode perturb_mode_from_id(const std::string& id) {
  if (id == "none") return PerturbMode::none;
  if (id == "beta") return PerturbMode::beta;
  if (id == "uniform") return PerturbMode::uniform;
  throw ValidationError("unknown perturbation mode '" + id +
                        "' (expected none|beta|uniform)");
}

std::string perturb_mode_id(PerturbMode mode) {
  switch (mode) {
    case PerturbMode::none: return "none";
    case PerturbMode::beta: return "beta";
    case PerturbMode::uniform: return "uniform";
  }
  return "none";
}

void AttackerParams::validate() const {
  std::vector<std::string> problems;
  if (!(gain_detected < gain_evaded)) {
    problems.push_back("gain_detected must be below gain_evaded");
  }
  if (!(risk_proneness > 0)) problems.push_back("risk_proneness must be positive");
  if (cost_per_change < 0) problems.push_back("cost_per_change must be >= 0");
  if (k_attacker < 0 || k_attacker > 1) problems.push_back("k_attacker must lie in [0,1]");
  if (perturbation == PerturbMode::none && k_attacker > 0) {
    problems.push_back("k_attacker set but perturbation mode is none");
  }
  if (!problems.empty()) {
    std::string msg = "invalid attacker params:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ValidationError(msg);
  }
}

DetectionOracle worst_case_oracle(
    const std::function<Label(const BinaryInstance&)>& target) {
  return [target](const BinaryInstance& x) {
    return target(x) == Label::positive ? 1.0 : 0.0;
  };
}

double perturb(double p, PerturbMode mode, double k_attacker, Philox& rng) {
  if (p < 0.0 || p > 1.0) throw ValidationError("probability outside [0,1]");
  switch (mode) {
    case PerturbMode::none:
      return p;
    case PerturbMode::beta: {
      constexpr double kEps = 1e-9;
      if (k_attacker <= 0.0 || p <= kEps || p >= 1.0 - kEps) return p;
      auto [d1, d2] = detection_prob_params(p, k_attacker);
      return rng.beta(d1, d2);
    }
    case PerturbMode::uniform: {
      const double shifted = p + rng.uniform(-k_attacker, k_attacker);
      return std::clamp(shifted, 0.0, 1.0);
    }
  }
  return p;
}

Attack solve_attack(const BinaryInstance& x, const AttackerParams& params,
                    const DetectionOracle& oracle, AttackBudget budget, Philox& rng) {
  params.validate();
  const std::vector<Attack> attacks = attack_set(x, budget);
  double best = -std::numeric_limits<double>::infinity();
  size_t best_index = 0;
  for (size_t a = 0; a < attacks.size(); ++a) {
    const BinaryInstance attacked = apply_attack(attacks[a], x);
    const double p = perturb(oracle(attacked), params.perturbation, params.k_attacker, rng);
    const double cost = params.cost_per_change * attacks[a].change_count();
    const double u_detected = std::exp(params.risk_proneness * (params.gain_detected - cost));
    const double u_evaded = std::exp(params.risk_proneness * (params.gain_evaded - cost));
    const double eu = u_detected * p + u_evaded * (1.0 - p);
    if (eu > best) {
      best = eu;
      best_index = a;
    }
  }
  return attacks[best_index];
}

Dataset taint_test_set(const Dataset& test, const AttackerParams& params,
                       const DetectionOracle& oracle, AttackBudget budget,
                       const StreamFamily& rng, std::vector<TaintRecord>* audit) {
  params.validate();
  Dataset tainted;
  tainted.n = test.n;
  tainted.feature_names = test.feature_names;
  tainted.instances.reserve(test.size());
  if (audit) audit->clear();

  const StreamFamily taint_rng = rng.derive(stream_tag::kTaint);
  for (size_t i = 0; i < test.size(); ++i) {
    const BinaryInstance& instance = test.instances[i];
    if (!instance.label) {
      throw ValidationError("taint_test_set requires a labelled test set (instance " +
                            std::to_string(i) + " is unlabelled)");
    }
    if (*instance.label == Label::negative) {
      tainted.instances.push_back(instance);
      continue;
    }
    Philox instance_rng = taint_rng.stream(static_cast<uint64_t>(i));
    const Attack attack = solve_attack(instance, params, oracle, budget, instance_rng);
    BinaryInstance attacked = apply_attack(attack, instance);
    attacked.label = Label::positive;
    tainted.instances.push_back(std::move(attacked));
    if (audit && !attack.is_identity()) {
      audit->push_back({static_cast<int>(i), attack});
    }
  }
  return tainted;
}

void write_taint_audit(const std::vector<TaintRecord>& audit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (const auto& record : audit) {
    out << record.instance_index;
    for (int index : record.attack.insert_indices) out << ' ' << index;
    out << '\n';
  }
  if (!out) throw IoError("write failed: '" + path + "'");
}

}  // namespace acra
