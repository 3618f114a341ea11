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

#include "acra/ara_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "acra/errors.hpp"

namespace acra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateR = 1e-9;

double logsumexp(const std::vector<double>& terms) {
  double m = -kInf;
  for (double t : terms) m = std::max(m, t);
  if (m == -kInf) return -kInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - m);
  return m + std::log(sum);
}

}  // namespace

void AdversaryBeliefModel::validate() const {
  std::vector<std::string> problems;
  if (!(gain_detected.mean < 0)) problems.push_back("gain_detected mean must be negative");
  if (!(gain_evaded.mean > 0)) problems.push_back("gain_evaded mean must be positive");
  if (gain_detected.variance < 0) problems.push_back("gain_detected variance must be >= 0");
  if (gain_evaded.variance < 0) problems.push_back("gain_evaded variance must be >= 0");
  if (cost_per_change.lo < 0 || cost_per_change.hi < cost_per_change.lo) {
    problems.push_back("cost_per_change interval must satisfy 0 <= lo <= hi");
  }
  if (!(risk_proneness.lo > 0) || risk_proneness.hi < risk_proneness.lo) {
    problems.push_back("risk_proneness interval must satisfy 0 < lo <= hi");
  }
  if (var_fraction_k < 0 || var_fraction_k > 1) {
    problems.push_back("var fraction k must lie in [0,1]");
  }
  if (!problems.empty()) {
    std::string msg = "invalid adversary belief model:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ValidationError(msg);
  }
}

bool AdversaryBeliefModel::fully_degenerate() const {
  return gain_detected.degenerate() && gain_evaded.degenerate() &&
         cost_per_change.degenerate() && risk_proneness.degenerate() &&
         var_fraction_k <= 0.0;
}

AdversaryBeliefModel AdversaryBeliefModel::collapsed() const {
  AdversaryBeliefModel point = *this;
  point.gain_detected.variance = 0.0;
  point.gain_evaded.variance = 0.0;
  const double cost = cost_per_change.midpoint();
  point.cost_per_change = {cost, cost};
  const double rho = risk_proneness.midpoint();
  point.risk_proneness = {rho, rho};
  point.var_fraction_k = 0.0;
  return point;
}

void AdversaryBeliefModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << std::setprecision(17);
  out << "gain_detected_mean=" << gain_detected.mean << '\n';
  out << "gain_detected_var=" << gain_detected.variance << '\n';
  out << "gain_evaded_mean=" << gain_evaded.mean << '\n';
  out << "gain_evaded_var=" << gain_evaded.variance << '\n';
  out << "cost_lo=" << cost_per_change.lo << '\n';
  out << "cost_hi=" << cost_per_change.hi << '\n';
  out << "rho_lo=" << risk_proneness.lo << '\n';
  out << "rho_hi=" << risk_proneness.hi << '\n';
  out << "k=" << var_fraction_k << '\n';
  if (!out) throw IoError("write failed: '" + path + "'");
}

AdversaryBeliefModel AdversaryBeliefModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  AdversaryBeliefModel model;  // defaults stand for missing keys
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("bad key=value at line " + std::to_string(line_no) +
                            " of '" + path + "'");
    }
    const std::string key = line.substr(0, eq);
    const double value = std::stod(line.substr(eq + 1));
    if (key == "gain_detected_mean") model.gain_detected.mean = value;
    else if (key == "gain_detected_var") model.gain_detected.variance = value;
    else if (key == "gain_evaded_mean") model.gain_evaded.mean = value;
    else if (key == "gain_evaded_var") model.gain_evaded.variance = value;
    else if (key == "cost_lo") model.cost_per_change.lo = value;
    else if (key == "cost_hi") model.cost_per_change.hi = value;
    else if (key == "rho_lo") model.risk_proneness.lo = value;
    else if (key == "rho_hi") model.risk_proneness.hi = value;
    else if (key == "k") model.var_fraction_k = value;
    else throw ValidationError("unknown key '" + key + "' in '" + path + "'");
  }
  model.validate();
  return model;
}

std::pair<double, double> gamma_from_moments(double mean, double variance) {
  if (!(variance > 0.0)) throw ValidationError("gamma variance must be positive");
  if (mean == 0.0) throw ValidationError("gamma mean must be nonzero");
  const double magnitude = std::abs(mean);
  return {magnitude * magnitude / variance, variance / magnitude};
}

namespace {

// Precompiled draw plan for the belief model; keeps the gamma constants out
// of the sampling loop.
struct UtilitySamplers {
  bool det_degenerate, eva_degenerate, cost_degenerate, rho_degenerate;
  double det_mean, eva_mean;
  double cost_lo, cost_hi, rho_lo, rho_hi;
  GammaSampler det, eva;

  explicit UtilitySamplers(const AdversaryBeliefModel& m)
      : det_degenerate(m.gain_detected.degenerate()),
        eva_degenerate(m.gain_evaded.degenerate()),
        cost_degenerate(m.cost_per_change.degenerate()),
        rho_degenerate(m.risk_proneness.degenerate()),
        det_mean(m.gain_detected.mean),
        eva_mean(m.gain_evaded.mean),
        cost_lo(m.cost_per_change.lo),
        cost_hi(m.cost_per_change.hi),
        rho_lo(m.risk_proneness.lo),
        rho_hi(m.risk_proneness.hi) {
    if (!det_degenerate) {
      auto [shape, scale] = gamma_from_moments(m.gain_detected.mean, m.gain_detected.variance);
      det = GammaSampler(shape, scale);
    }
    if (!eva_degenerate) {
      auto [shape, scale] = gamma_from_moments(m.gain_evaded.mean, m.gain_evaded.variance);
      eva = GammaSampler(shape, scale);
    }
  }

  // Draw order: detected gain, evaded gain, cost factor, risk proneness.
  inline std::pair<double, double> draw(int change_count, Philox& rng) const {
    const double y_pp = det_degenerate ? det_mean : -det.draw(rng);
    const double y_mp = eva_degenerate ? eva_mean : eva.draw(rng);
    const double alpha = cost_degenerate ? cost_lo : rng.uniform(cost_lo, cost_hi);
    const double rho = rho_degenerate ? rho_lo : rng.uniform(rho_lo, rho_hi);
    const double cost = change_count * alpha;
    return {std::exp(rho * (y_pp - cost)), std::exp(rho * (y_mp - cost))};
  }
};

}  // namespace

std::pair<double, double> sample_adversary_utility(const AdversaryBeliefModel& model,
                                                   int change_count, Philox& rng) {
  if (change_count < 0) throw ValidationError("change count must be >= 0");
  return UtilitySamplers(model).draw(change_count, rng);
}

double beta_variance_bound(double r) {
  return std::min(r * r * (1.0 - r) / (1.0 + r), r * (1.0 - r) * (1.0 - r) / (2.0 - r));
}

std::pair<double, double> detection_prob_params(double r, double var_fraction_k) {
  if (!(r > 0.0) || !(r < 1.0)) {
    throw ValidationError("detection_prob_params requires 0 < r < 1");
  }
  if (!(var_fraction_k > 0.0)) {
    throw ValidationError("detection_prob_params requires k > 0");
  }
  const double var = var_fraction_k * beta_variance_bound(r);
  const double delta1 = ((1.0 - r) / var - 1.0 / r) * r * r;
  const double delta2 = delta1 * (1.0 / r - 1.0);
  return {delta1, delta2};
}

namespace {

// Shared core of the Eq-style posterior heuristic: the observation's ones and
// both log joints are already known.
double r_from_destination(const std::vector<int>& ones, double log_plus_joint,
                          double log_minus_joint, const GenerativeModel& model,
                          AttackBudget budget) {
  std::vector<double> plus_terms;
  plus_terms.reserve(ones.size() + 2);
  detail::for_each_index_subset(
      ones, budget.max_insertions, [&](const std::vector<int>& removed) {
        double log_q = log_plus_joint;
        for (int index : removed) log_q -= model.flip_delta(index, Label::positive);
        plus_terms.push_back(log_q);
      });
  const double shift = std::max(logsumexp(plus_terms), log_minus_joint);
  if (shift == -kInf) return model.prior_plus();  // all mass underflowed
  double num = 0.0;
  for (double t : plus_terms) num += std::exp(t - shift);
  const double den = num + std::exp(log_minus_joint - shift);
  if (den == 0.0) return model.prior_plus();
  return num / den;
}

}  // namespace

double compute_r(const BinaryInstance& attacked, const GenerativeModel& model,
                 AttackBudget budget) {
  std::vector<int> ones;
  for (int i = 0; i < attacked.dimension(); ++i) {
    if (attacked.bits[i]) ones.push_back(i);
  }
  return r_from_destination(ones, model.log_joint(attacked, Label::positive),
                            model.log_joint(attacked, Label::negative), model, budget);
}

int AttackTally::find(const Attack& attack) const {
  for (size_t i = 0; i < attacks.size(); ++i) {
    if (attacks[i] == attack) return static_cast<int>(i);
  }
  return -1;
}

double AttackTally::raw_prob(int index) const {
  if (index < 0 || index >= static_cast<int>(counts.size())) return 0.0;
  return samples == 0 ? 0.0 : static_cast<double>(counts[index]) / samples;
}

double AttackTally::smoothed_prob(int index) const {
  if (index < 0 || index >= static_cast<int>(counts.size())) return 0.0;
  return (static_cast<double>(counts[index]) + 1.0) /
         (static_cast<double>(samples) + static_cast<double>(attacks.size()));
}

AttackTally simulate_attack_choices(const BinaryInstance& origin,
                                    const GenerativeModel& model,
                                    const AdversaryBeliefModel& beliefs,
                                    AttackBudget budget, uint32_t samples,
                                    const StreamFamily& rng) {
  if (samples == 0) throw ValidationError("sample count must be >= 1");
  beliefs.validate();

  AttackTally tally;
  tally.attacks = attack_set(origin, budget);
  tally.counts.assign(tally.attacks.size(), 0);
  tally.samples = samples;
  const size_t n_attacks = tally.attacks.size();

  // Per-attack preparation: destination posterior r and its beta parameters.
  const double base_plus = model.log_joint(origin, Label::positive);
  const double base_minus = model.log_joint(origin, Label::negative);
  std::vector<int> origin_ones;
  for (int i = 0; i < origin.dimension(); ++i) {
    if (origin.bits[i]) origin_ones.push_back(i);
  }

  std::vector<int> change_count(n_attacks);
  std::vector<uint8_t> point_belief(n_attacks);
  std::vector<double> r_value(n_attacks);
  std::vector<GammaSampler> beta_first(n_attacks), beta_second(n_attacks);

  std::vector<int> dest_ones;
  for (size_t a = 0; a < n_attacks; ++a) {
    const Attack& attack = tally.attacks[a];
    change_count[a] = attack.change_count();
    double dest_plus = base_plus, dest_minus = base_minus;
    for (int index : attack.insert_indices) {
      dest_plus += model.flip_delta(index, Label::positive);
      dest_minus += model.flip_delta(index, Label::negative);
    }
    dest_ones.assign(origin_ones.begin(), origin_ones.end());
    dest_ones.insert(dest_ones.end(), attack.insert_indices.begin(),
                     attack.insert_indices.end());
    std::sort(dest_ones.begin(), dest_ones.end());
    const double r = r_from_destination(dest_ones, dest_plus, dest_minus, model, budget);
    r_value[a] = r;
    if (beliefs.var_fraction_k <= 0.0 || r <= kDegenerateR || r >= 1.0 - kDegenerateR) {
      point_belief[a] = 1;
    } else {
      point_belief[a] = 0;
      auto [d1, d2] = detection_prob_params(r, beliefs.var_fraction_k);
      beta_first[a] = GammaSampler(d1, 1.0);
      beta_second[a] = GammaSampler(d2, 1.0);
    }
  }

  const UtilitySamplers utility(beliefs);
  const uint64_t origin_salt = instance_hash(origin);

  // A fully degenerate model makes every sample identical.
  const bool deterministic = beliefs.fully_degenerate();
  const uint32_t loop_samples = deterministic ? 1 : samples;

  for (uint32_t k = 0; k < loop_samples; ++k) {
    Philox sample_rng = rng.stream(origin_salt, k);
    double best = -kInf;
    size_t best_index = 0;
    for (size_t a = 0; a < n_attacks; ++a) {
      const auto [u_plus, u_minus] = utility.draw(change_count[a], sample_rng);
      double p;
      if (point_belief[a]) {
        p = r_value[a];
      } else {
        const double x = beta_first[a].draw(sample_rng);
        const double y = beta_second[a].draw(sample_rng);
        p = x / (x + y);
      }
      const double score = (u_plus - u_minus) * p + u_minus;
      if (score > best) {
        best = score;
        best_index = a;
      }
    }
    tally.counts[best_index] += deterministic ? samples : 1;
  }
  return tally;
}

namespace {

// The attack that maps origin to observed, or nullopt if not reachable
// within budget.
std::optional<Attack> attack_between(const BinaryInstance& origin,
                                     const BinaryInstance& observed, AttackBudget budget) {
  if (origin.dimension() != observed.dimension()) return std::nullopt;
  Attack attack;
  for (int i = 0; i < origin.dimension(); ++i) {
    if (origin.bits[i] == observed.bits[i]) continue;
    if (origin.bits[i] > observed.bits[i]) return std::nullopt;  // deletion needed
    attack.insert_indices.push_back(i);
  }
  if (attack.change_count() > budget.max_insertions) return std::nullopt;
  return attack;
}

}  // namespace

double estimate_attack_prob(const BinaryInstance& origin, const BinaryInstance& observed,
                            const GenerativeModel& model,
                            const AdversaryBeliefModel& beliefs, AttackBudget budget,
                            uint32_t samples, const StreamFamily& rng) {
  const auto attack = attack_between(origin, observed, budget);
  if (!attack) {
    throw ValidationError("origin is not in the observation's origin set");
  }
  const AttackTally tally =
      simulate_attack_choices(origin, model, beliefs, budget, samples, rng);
  return tally.raw_prob(tally.find(*attack));
}

double log_decision_threshold(const BinaryInstance& observed,
                              const GenerativeModel& model, const UtilityMatrix& utility) {
  if (!utility.valid()) {
    throw ValidationError("utility matrix must strictly prefer correct decisions");
  }
  const double gain_spread = utility(Label::positive, Label::positive) -
                             utility(Label::negative, Label::positive);
  const double loss_spread = utility(Label::negative, Label::negative) -
                             utility(Label::positive, Label::negative);
  return std::log(loss_spread) + model.log_joint(observed, Label::negative) -
         std::log(gain_spread) - model.log_prior(Label::positive);
}

Label argmax_rule(double log_attack_mass, const BinaryInstance& observed,
                  const GenerativeModel& model, const UtilityMatrix& utility) {
  const double log_plus = model.log_prior(Label::positive) + log_attack_mass;
  const double log_minus = model.log_joint(observed, Label::negative);
  const double shift = std::max(log_plus, log_minus);
  if (shift == -kInf) return Label::negative;
  const double w_plus = std::exp(log_plus - shift);
  const double w_minus = std::exp(log_minus - shift);
  const double eu_plus = utility(Label::positive, Label::positive) * w_plus +
                         utility(Label::positive, Label::negative) * w_minus;
  const double eu_minus = utility(Label::negative, Label::positive) * w_plus +
                          utility(Label::negative, Label::negative) * w_minus;
  return eu_plus > eu_minus ? Label::positive : Label::negative;
}

Label threshold_rule(double log_attack_mass, const BinaryInstance& observed,
                     const GenerativeModel& model, const UtilityMatrix& utility) {
  return log_attack_mass > log_decision_threshold(observed, model, utility)
             ? Label::positive
             : Label::negative;
}

Label acra_classify(const BinaryInstance& observed, const GenerativeModel& model,
                    const AdversaryBeliefModel& beliefs, const UtilityMatrix& utility,
                    AttackBudget budget, uint32_t samples, const StreamFamily& rng,
                    AcraDecision* decision) {
  const StreamFamily tally_rng = rng.derive(stream_tag::kAttackChoice);
  const std::vector<BinaryInstance> origins = origin_set(observed, budget);

  std::vector<double> terms;
  terms.reserve(origins.size());
  for (const auto& origin : origins) {
    const auto attack = attack_between(origin, observed, budget);
    const AttackTally tally =
        simulate_attack_choices(origin, model, beliefs, budget, samples, tally_rng);
    const double p_hat = tally.raw_prob(tally.find(*attack));
    if (p_hat > 0.0) {
      terms.push_back(std::log(p_hat) + model.log_likelihood(origin, Label::positive));
    }
  }
  const double log_attack_mass = logsumexp(terms);
  const Label label = argmax_rule(log_attack_mass, observed, model, utility);
  if (decision) {
    decision->label = label;
    decision->log_attack_mass = log_attack_mass;
    decision->log_threshold = log_decision_threshold(observed, model, utility);
    decision->origin_count = static_cast<int>(origins.size());
  }
  return label;
}

}  // namespace acra
