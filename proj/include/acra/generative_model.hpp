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

#ifndef ACRA_GENERATIVE_MODEL_HPP_
#define ACRA_GENERATIVE_MODEL_HPP_

#include <string>
#include <vector>

#include "acra/corpus.hpp"

namespace acra {

// Classifier utility u(decision, truth). Correct decisions must be strictly
// preferred on both rows; that keeps the decision threshold well-defined.
struct UtilityMatrix {
  double values[2][2] = {{1, 0}, {0, 1}};  // [decision][truth], 0 = negative

  double operator()(Label decision, Label truth) const {
    return values[static_cast<int>(decision)][static_cast<int>(truth)];
  }
  double& at(Label decision, Label truth) {
    return values[static_cast<int>(decision)][static_cast<int>(truth)];
  }

  bool valid() const;

  static UtilityMatrix zero_one();
  // Correct decisions worth 1, missed positives -1, false alarms
  // false_positive_utility (e.g. -2, -5, -10).
  static UtilityMatrix penalized(double false_positive_utility);
  // Accepts "zero-one", "penalty-2", "penalty-5", "penalty-10".
  static UtilityMatrix from_id(const std::string& id);
};

// Bernoulli Naive Bayes over binary features: class prior plus per-class,
// per-feature presence rates, Laplace-smoothed so every rate is strictly
// inside (0,1).
class GenerativeModel {
 public:
  static GenerativeModel fit(const Dataset& train, double smoothing = 1.0);

  int dimension() const { return n_; }
  double smoothing() const { return smoothing_; }
  double prior_plus() const { return prior_plus_; }
  double prior(Label y) const { return y == Label::positive ? prior_plus_ : 1.0 - prior_plus_; }
  double log_prior(Label y) const;
  double theta(int feature, Label y) const;

  // Sum over features of log[theta^bit (1-theta)^(1-bit)].
  double log_likelihood(const BinaryInstance& x, Label y) const;
  // log_likelihood + log prior.
  double log_joint(const BinaryInstance& x, Label y) const;
  // Log-likelihood change when feature flips 0 -> 1.
  double flip_delta(int feature, Label y) const;

  void save(const std::string& path) const;
  static GenerativeModel load(const std::string& path);

 private:
  GenerativeModel() = default;

  int n_ = 0;
  double smoothing_ = 1.0;
  double prior_plus_ = 0.5;
  // [label][feature]
  std::vector<double> theta_[2];
  std::vector<double> log_theta_[2];
  std::vector<double> log_one_minus_theta_[2];

  void rebuild_logs();
};

// Expected-utility classification: argmax over decisions of
// sum_y u(decision, y) p(y) p(x|y). Ties go to the negative class.
Label nb_classify(const GenerativeModel& model, const UtilityMatrix& utility,
                  const BinaryInstance& x);

}  // namespace acra

#endif  // ACRA_GENERATIVE_MODEL_HPP_
