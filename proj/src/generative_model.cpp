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

#include "acra/generative_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "acra/errors.hpp"

namespace acra {

bool UtilityMatrix::valid() const {
  return (*this)(Label::positive, Label::positive) > (*this)(Label::negative, Label::positive) &&
         (*this)(Label::negative, Label::negative) > (*this)(Label::positive, Label::negative);
}

UtilityMatrix UtilityMatrix::zero_one() {
  UtilityMatrix u;
  u.at(Label::positive, Label::positive) = 1;
  u.at(Label::negative, Label::positive) = 0;
  u.at(Label::positive, Label::negative) = 0;
  u.at(Label::negative, Label::negative) = 1;
  return u;
}

UtilityMatrix UtilityMatrix::penalized(double false_positive_utility) {
  UtilityMatrix u;
  u.at(Label::positive, Label::positive) = 1;
  u.at(Label::negative, Label::positive) = -1;
  u.at(Label::positive, Label::negative) = false_positive_utility;
  u.at(Label::negative, Label::negative) = 1;
  return u;
}

UtilityMatrix UtilityMatrix::from_id(const std::string& id) {
  if (id == "zero-one") return zero_one();
  if (id == "penalty-2") return penalized(-2);
  if (id == "penalty-5") return penalized(-5);
  if (id == "penalty-10") return penalized(-10);
  throw ValidationError("unknown utility id '" + id +
                        "' (expected zero-one|penalty-2|penalty-5|penalty-10)");
}

GenerativeModel GenerativeModel::fit(const Dataset& train, double smoothing) {
  if (!(smoothing > 0.0)) throw ValidationError("smoothing must be positive");
  const size_t n_pos = train.count(Label::positive);
  const size_t n_neg = train.count(Label::negative);
  if (n_pos == 0 || n_neg == 0) {
    throw ValidationError("training set must contain both classes (got " +
                          std::to_string(n_pos) + " positive, " + std::to_string(n_neg) +
                          " negative)");
  }

  GenerativeModel model;
  model.n_ = train.n;
  model.smoothing_ = smoothing;
  model.prior_plus_ =
      (static_cast<double>(n_pos) + smoothing) /
      (static_cast<double>(n_pos + n_neg) + 2.0 * smoothing);

  const size_t class_count[2] = {n_neg, n_pos};
  std::vector<double> ones[2];
  ones[0].assign(train.n, 0.0);
  ones[1].assign(train.n, 0.0);
  for (const auto& inst : train.instances) {
    if (!inst.label) continue;
    if (inst.dimension() != train.n) {
      throw ValidationError("instance dimension mismatch in training set");
    }
    auto& acc = ones[static_cast<int>(*inst.label)];
    for (int i = 0; i < train.n; ++i) acc[i] += inst.bits[i];
  }
  for (int y = 0; y < 2; ++y) {
    model.theta_[y].resize(train.n);
    for (int i = 0; i < train.n; ++i) {
      model.theta_[y][i] = (ones[y][i] + smoothing) /
                           (static_cast<double>(class_count[y]) + 2.0 * smoothing);
    }
  }
  model.rebuild_logs();
  return model;
}

void GenerativeModel::rebuild_logs() {
  for (int y = 0; y < 2; ++y) {
    log_theta_[y].resize(n_);
    log_one_minus_theta_[y].resize(n_);
    for (int i = 0; i < n_; ++i) {
      log_theta_[y][i] = std::log(theta_[y][i]);
      log_one_minus_theta_[y][i] = std::log1p(-theta_[y][i]);
    }
  }
}

double GenerativeModel::log_prior(Label y) const {
  return std::log(prior(y));
}

double GenerativeModel::theta(int feature, Label y) const {
  return theta_[static_cast<int>(y)][feature];
}

double GenerativeModel::log_likelihood(const BinaryInstance& x, Label y) const {
  if (x.dimension() != n_) {
    throw ValidationError("instance dimension " + std::to_string(x.dimension()) +
                          " != model dimension " + std::to_string(n_));
  }
  const auto& lt = log_theta_[static_cast<int>(y)];
  const auto& lo = log_one_minus_theta_[static_cast<int>(y)];
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) {
    sum += x.bits[i] ? lt[i] : lo[i];
  }
  return sum;
}

double GenerativeModel::log_joint(const BinaryInstance& x, Label y) const {
  return log_likelihood(x, y) + log_prior(y);
}

double GenerativeModel::flip_delta(int feature, Label y) const {
  const int yi = static_cast<int>(y);
  return log_theta_[yi][feature] - log_one_minus_theta_[yi][feature];
}

void GenerativeModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << std::setprecision(17);
  out << n_ << ' ' << smoothing_ << '\n';
  out << prior_plus_ << '\n';
  for (int i = 0; i < n_; ++i) {
    out << i << ' ' << theta_[1][i] << ' ' << theta_[0][i] << '\n';
  }
  if (!out) throw IoError("write failed: '" + path + "'");
}

GenerativeModel GenerativeModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  GenerativeModel model;
  if (!(in >> model.n_ >> model.smoothing_ >> model.prior_plus_)) {
    throw ValidationError("malformed model file: '" + path + "'");
  }
  model.theta_[0].resize(model.n_);
  model.theta_[1].resize(model.n_);
  for (int i = 0; i < model.n_; ++i) {
    int index;
    double tp, tm;
    if (!(in >> index >> tp >> tm) || index != i) {
      throw ValidationError("malformed model file at feature " + std::to_string(i));
    }
    model.theta_[1][i] = tp;
    model.theta_[0][i] = tm;
  }
  model.rebuild_logs();
  return model;
}

Label nb_classify(const GenerativeModel& model, const UtilityMatrix& utility,
                  const BinaryInstance& x) {
  const double log_plus = model.log_joint(x, Label::positive);
  const double log_minus = model.log_joint(x, Label::negative);
  // Exponentiate shifted logs; the common factor cancels in the argmax.
  const double shift = std::max(log_plus, log_minus);
  const double w_plus = std::exp(log_plus - shift);
  const double w_minus = std::exp(log_minus - shift);
  const double eu_plus = utility(Label::positive, Label::positive) * w_plus +
                         utility(Label::positive, Label::negative) * w_minus;
  const double eu_minus = utility(Label::negative, Label::positive) * w_plus +
                          utility(Label::negative, Label::negative) * w_minus;
  return eu_plus > eu_minus ? Label::positive : Label::negative;
}

}  // namespace acra
