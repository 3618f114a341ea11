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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "acra/adversary_sim.hpp"
#include "acra/ara_engine.hpp"
#include "acra/errors.hpp"
#include "acra/synthetic.hpp"

using namespace acra;

namespace {

BinaryInstance make_instance(std::vector<uint8_t> bits,
                             std::optional<Label> label = std::nullopt) {
  return {std::move(bits), label};
}

GenerativeModel model_with(double prior_plus, const std::vector<double>& theta_plus,
                           const std::vector<double>& theta_minus) {
  const std::string path = "./sim_test_fixture.txt";
  std::FILE* f = std::fopen(path.c_str(), "w");
  std::fprintf(f, "%zu 1\n%.17g\n", theta_plus.size(), prior_plus);
  for (size_t i = 0; i < theta_plus.size(); ++i) {
    std::fprintf(f, "%zu %.17g %.17g\n", i, theta_plus[i], theta_minus[i]);
  }
  std::fclose(f);
  GenerativeModel model = GenerativeModel::load(path);
  std::remove(path.c_str());
  return model;
}

}  // namespace

TEST_CASE("attacker params validation lists inconsistencies") {
  AttackerParams params;
  params.validate();  // defaults are fine

  params.k_attacker = 0.3;  // set without a perturbation mode
  try {
    params.validate();
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("k_attacker") != std::string::npos);
  }
  params.perturbation = PerturbMode::beta;
  params.validate();

  AttackerParams inverted;
  inverted.gain_detected = 5.0;
  inverted.gain_evaded = -5.0;
  CHECK_THROWS_AS(inverted.validate(), ValidationError);
}

TEST_CASE("solve_attack on a fully-on instance returns the identity") {
  AttackerParams params;
  Philox rng(1, 1);
  const Attack attack = solve_attack(
      make_instance({1, 1, 1}), params, [](const BinaryInstance&) { return 0.5; }, {2},
      rng);
  CHECK(attack.is_identity());
}

TEST_CASE("solve_attack hand expected-utility example") {
  // Candidates: identity with detection 0.9, one insertion with detection 0.2.
  // EU(id) = e^{-2.5} 0.9 + e^{2.5} 0.1 ~ 1.292
  // EU(a1) = e^{-2.75} 0.2 + e^{2.25} 0.8 ~ 7.603 -> insert.
  AttackerParams params;  // gains +-5, cost 0.5, rho 0.5
  const DetectionOracle oracle = [](const BinaryInstance& x) {
    return x.bits[0] ? 0.2 : 0.9;
  };
  Philox rng(2, 2);
  const Attack attack = solve_attack(make_instance({0}), params, oracle, {1}, rng);
  CHECK(attack.insert_indices == std::vector<int>{0});
}

TEST_CASE("constant detection makes cost decide: identity wins") {
  AttackerParams params;
  for (double p : {0.0, 0.31, 1.0}) {
    const DetectionOracle oracle = [p](const BinaryInstance&) { return p; };
    Philox rng(3, 3);
    const Attack attack =
        solve_attack(make_instance({0, 0, 0}), params, oracle, {2}, rng);
    CHECK(attack.is_identity());
  }
}

TEST_CASE("solve_attack matches a brute-force expected-utility oracle") {
  Philox gen(4, 0);
  AttackerParams params;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(gen.next_double() * 7);
    std::vector<double> tp(n), tm(n);
    for (int i = 0; i < n; ++i) {
      tp[i] = 0.05 + 0.9 * gen.next_double();
      tm[i] = 0.05 + 0.9 * gen.next_double();
    }
    const GenerativeModel model = model_with(0.4, tp, tm);
    const UtilityMatrix utility = UtilityMatrix::zero_one();
    const DetectionOracle oracle = worst_case_oracle(
        [&](const BinaryInstance& x) { return nb_classify(model, utility, x); });

    BinaryInstance x;
    x.bits.resize(n);
    for (int i = 0; i < n; ++i) x.bits[i] = gen.next_double() < 0.5;
    const int budget = 1 + static_cast<int>(gen.next_double() * 2);

    // Independent argmax: first maximizer in enumeration order.
    double best = -1e300;
    Attack expected;
    for (const Attack& a : attack_set(x, {budget})) {
      const double p = oracle(apply_attack(a, x));
      const double cost = params.cost_per_change * a.change_count();
      const double eu =
          std::exp(params.risk_proneness * (params.gain_detected - cost)) * p +
          std::exp(params.risk_proneness * (params.gain_evaded - cost)) * (1.0 - p);
      if (eu > best) {
        best = eu;
        expected = a;
      }
    }

    Philox rng(5, trial);
    CHECK(solve_attack(x, params, oracle, {budget}, rng) == expected);
  }
}

TEST_CASE("perturb modes") {
  Philox rng(6, 6);
  CHECK(perturb(0.42, PerturbMode::none, 0.7, rng) == 0.42);

  // Beta with vanishing variance collapses onto p.
  for (int i = 0; i < 200; ++i) {
    const double draw = perturb(0.42, PerturbMode::beta, 1e-7, rng);
    CHECK(std::abs(draw - 0.42) < 0.01);
  }
  // Degenerate shortcut at the endpoints and k = 0.
  CHECK(perturb(0.0, PerturbMode::beta, 0.5, rng) == 0.0);
  CHECK(perturb(1.0, PerturbMode::beta, 0.5, rng) == 1.0);
  CHECK(perturb(0.42, PerturbMode::beta, 0.0, rng) == 0.42);

  // Beta keeps the mean and a kD variance.
  const double k = 0.4, p = 0.3;
  const int n = 100000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    const double draw = perturb(p, PerturbMode::beta, k, rng);
    CHECK(draw > 0.0);
    CHECK(draw < 1.0);
    sum += draw;
    sum_sq += draw * draw;
  }
  const double target_var = k * beta_variance_bound(p);
  CHECK(std::abs(sum / n - p) < 3.0 * std::sqrt(target_var / n));
  CHECK(sum_sq / n - (sum / n) * (sum / n) == doctest::Approx(target_var).epsilon(0.05));
}

TEST_CASE("uniform perturbation clamps and shifts the mean accordingly") {
  Philox rng(7, 7);
  const int n = 200000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const double draw = perturb(0.95, PerturbMode::uniform, 0.1, rng);
    CHECK(draw >= 0.85);
    CHECK(draw <= 1.0);
    sum += draw;
  }
  // E[clamp(0.95 + U(-0.1, 0.1), 0, 1)]: the overflow band [1, 1.05] piles up
  // at 1, so the mean is 0.95 - 0.025/4 = 0.94375.
  CHECK(sum / n == doctest::Approx(0.94375).epsilon(0.001));
}

TEST_CASE("taint leaves innocents alone and keeps labels") {
  const Dataset corpus = synthesize_spam_corpus(400, 160, 31);
  auto [train, test] = split(corpus, 0.5, 3);
  const GenerativeModel model = GenerativeModel::fit(train, 1.0);
  const UtilityMatrix utility = UtilityMatrix::zero_one();
  const DetectionOracle oracle = worst_case_oracle(
      [&](const BinaryInstance& x) { return nb_classify(model, utility, x); });

  AttackerParams params;
  std::vector<TaintRecord> audit;
  const Dataset tainted =
      taint_test_set(test, params, oracle, {1}, StreamFamily(11), &audit);
  REQUIRE(tainted.size() == test.size());
  for (size_t i = 0; i < test.size(); ++i) {
    const auto& before = test.instances[i];
    const auto& after = tainted.instances[i];
    CHECK(before.label == after.label);
    if (*before.label == Label::negative) {
      CHECK(before.bits == after.bits);
    } else {
      // Within budget and insertion-only.
      int flips = 0;
      for (int f = 0; f < test.n; ++f) {
        if (before.bits[f] != after.bits[f]) {
          CHECK(before.bits[f] == 0);
          ++flips;
        }
      }
      CHECK(flips <= 1);
    }
  }
  CHECK(!audit.empty());
  for (const auto& record : audit) {
    const auto& before = test.instances[record.instance_index];
    const auto& after = tainted.instances[record.instance_index];
    CHECK(apply_attack(record.attack, before).bits == after.bits);
  }
}

TEST_CASE("taint demands labels and passes through all-innocent sets") {
  Dataset unlabeled;
  unlabeled.n = 2;
  unlabeled.instances = {make_instance({0, 1})};
  AttackerParams params;
  const DetectionOracle oracle = [](const BinaryInstance&) { return 1.0; };
  CHECK_THROWS_AS(taint_test_set(unlabeled, params, oracle, {1}, StreamFamily(1)),
                  ValidationError);

  Dataset innocents;
  innocents.n = 2;
  innocents.instances = {make_instance({0, 1}, Label::negative),
                         make_instance({1, 1}, Label::negative)};
  const Dataset tainted = taint_test_set(innocents, params, oracle, {1}, StreamFamily(1));
  CHECK(tainted.instances == innocents.instances);
}

TEST_CASE("a constant-negative target makes every attack the identity") {
  Dataset spammy;
  spammy.n = 3;
  spammy.instances = {make_instance({0, 1, 0}, Label::positive),
                      make_instance({0, 0, 0}, Label::positive)};
  AttackerParams params;
  const DetectionOracle oracle =
      worst_case_oracle([](const BinaryInstance&) { return Label::negative; });
  std::vector<TaintRecord> audit;
  const Dataset tainted =
      taint_test_set(spammy, params, oracle, {1}, StreamFamily(2), &audit);
  CHECK(tainted.instances == spammy.instances);
  CHECK(audit.empty());
}

TEST_CASE("uniform perturbation with zero width equals no perturbation") {
  const Dataset corpus = synthesize_spam_corpus(300, 120, 32);
  auto [train, test] = split(corpus, 0.5, 4);
  const GenerativeModel model = GenerativeModel::fit(train, 1.0);
  const UtilityMatrix utility = UtilityMatrix::zero_one();
  const DetectionOracle oracle = worst_case_oracle(
      [&](const BinaryInstance& x) { return nb_classify(model, utility, x); });

  AttackerParams plain;
  AttackerParams zero_width;
  zero_width.perturbation = PerturbMode::uniform;
  zero_width.k_attacker = 0.0;
  const Dataset tainted_plain =
      taint_test_set(test, plain, oracle, {1}, StreamFamily(21));
  const Dataset tainted_zero =
      taint_test_set(test, zero_width, oracle, {1}, StreamFamily(21));
  CHECK(tainted_plain.instances == tainted_zero.instances);
}

TEST_CASE("taint audit sidecar lists instance and inserted indices") {
  std::vector<TaintRecord> audit = {{3, Attack{{7}}}, {11, Attack{{2, 9}}}};
  const std::string path = "./sim_audit.txt";
  write_taint_audit(audit, path);
  std::ifstream in(path);
  std::string line1, line2;
  std::getline(in, line1);
  std::getline(in, line2);
  CHECK(line1 == "3 7");
  CHECK(line2 == "11 2 9");
  std::remove(path.c_str());
}
