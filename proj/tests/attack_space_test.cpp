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

#include <algorithm>
#include <set>

#include "acra/attack_space.hpp"
#include "acra/errors.hpp"
#include "acra/rng.hpp"

using namespace acra;

namespace {

BinaryInstance make_instance(std::vector<uint8_t> bits) {
  return {std::move(bits), std::nullopt};
}

// Independent oracle: sum of binomial coefficients C(z, j), j = 0..min(k, z).
uint64_t binomial_sum(int z, int k) {
  uint64_t total = 0;
  for (int j = 0; j <= std::min(k, z); ++j) {
    uint64_t c = 1;
    for (int i = 0; i < j; ++i) c = c * (z - i) / (i + 1);
    total += c;
  }
  return total;
}

BinaryInstance random_instance(int n, Philox& rng, double density = 0.5) {
  BinaryInstance x;
  x.bits.resize(n);
  for (int i = 0; i < n; ++i) x.bits[i] = rng.next_double() < density;
  return x;
}

}  // namespace

TEST_CASE("attack_set basics") {
  const auto two_zeros = attack_set(make_instance({0, 0}), {1});
  REQUIRE(two_zeros.size() == 3);
  CHECK(two_zeros[0].is_identity());
  CHECK(two_zeros[1].insert_indices == std::vector<int>{0});
  CHECK(two_zeros[2].insert_indices == std::vector<int>{1});

  const auto no_zeros = attack_set(make_instance({1, 1}), {5});
  REQUIRE(no_zeros.size() == 1);
  CHECK(no_zeros[0].is_identity());

  // 5 zeros at budget 2: 1 + 5 + 10.
  const auto five = attack_set(make_instance({0, 0, 0, 0, 0}), {2});
  CHECK(five.size() == 16);
}

TEST_CASE("attack_set counts match the binomial oracle") {
  Philox rng(5, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_double() * 16);
    const int k = static_cast<int>(rng.next_double() * 4);
    const BinaryInstance x = random_instance(n, rng);
    const int zeros = n - x.ones_count();
    CHECK(attack_set(x, {k}).size() == binomial_sum(zeros, k));
  }
}

TEST_CASE("attack enumeration is lexicographic with identity first") {
  const BinaryInstance x = make_instance({0, 1, 0, 0});
  const auto attacks = attack_set(x, {2});
  // zeros at 0, 2, 3
  const std::vector<std::vector<int>> expected = {{},     {0},    {0, 2}, {0, 3},
                                                  {2},    {2, 3}, {3}};
  REQUIRE(attacks.size() == expected.size());
  for (size_t i = 0; i < attacks.size(); ++i) {
    CHECK(attacks[i].insert_indices == expected[i]);
  }
}

TEST_CASE("apply_attack") {
  const BinaryInstance x = make_instance({1, 0});
  CHECK(apply_attack(Attack{}, x) == x);
  CHECK(apply_attack(Attack{{1}}, x).bits == std::vector<uint8_t>{1, 1});
  CHECK_THROWS_AS(apply_attack(Attack{{0}}, x), ValidationError);
  CHECK_THROWS_AS(apply_attack(Attack{{7}}, x), ValidationError);
}

TEST_CASE("apply_attack flips exactly the attacked zeros") {
  Philox rng(6, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const BinaryInstance x = random_instance(10, rng);
    for (const Attack& a : attack_set(x, {2})) {
      const BinaryInstance y = apply_attack(a, x);
      int diff = 0;
      for (int i = 0; i < 10; ++i) {
        if (x.bits[i] != y.bits[i]) {
          ++diff;
          CHECK(x.bits[i] == 0);
          CHECK(y.bits[i] == 1);
        }
      }
      CHECK(diff == a.change_count());
    }
  }
}

TEST_CASE("origin_set basics") {
  const auto one_one = origin_set(make_instance({1, 0}), {1});
  REQUIRE(one_one.size() == 2);
  CHECK(one_one[0].bits == std::vector<uint8_t>{1, 0});
  CHECK(one_one[1].bits == std::vector<uint8_t>{0, 0});

  const auto zeros = origin_set(make_instance({0, 0, 0}), {2});
  REQUIRE(zeros.size() == 1);
}

TEST_CASE("duality between attack_set and origin_set, exhaustive") {
  for (int n : {4, 7, 10}) {
    for (int k : {1, 2}) {
      for (int mask = 0; mask < (1 << n); ++mask) {
        BinaryInstance x;
        x.bits.resize(n);
        for (int i = 0; i < n; ++i) x.bits[i] = (mask >> i) & 1;

        // Forward: every attack's destination must list x as an origin.
        for (const Attack& a : attack_set(x, {k})) {
          const BinaryInstance dest = apply_attack(a, x);
          const auto origins = origin_set(dest, {k});
          CHECK(std::find(origins.begin(), origins.end(), x) != origins.end());
        }

        // Backward: every origin reaches x by an attack within budget.
        for (const BinaryInstance& origin : origin_set(x, {k})) {
          Attack a;
          for (int i = 0; i < n; ++i) {
            if (origin.bits[i] != x.bits[i]) a.insert_indices.push_back(i);
          }
          CHECK(a.change_count() <= k);
          const auto attacks = attack_set(origin, {k});
          CHECK(std::find(attacks.begin(), attacks.end(), a) != attacks.end());
          CHECK(apply_attack(a, origin) == BinaryInstance{x.bits, origin.label});
        }
      }
    }
  }
}

TEST_CASE("origin_set counts match the binomial oracle") {
  Philox rng(7, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_double() * 14);
    const int k = 1 + static_cast<int>(rng.next_double() * 2);
    const BinaryInstance x = random_instance(n, rng);
    CHECK(origin_set(x, {k}).size() == binomial_sum(x.ones_count(), k));
  }
}
