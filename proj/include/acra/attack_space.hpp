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

#ifndef ACRA_ATTACK_SPACE_HPP_
#define ACRA_ATTACK_SPACE_HPP_

#include <functional>
#include <vector>

#include "acra/corpus.hpp"

namespace acra {

// A good-word-insertion attack: the sorted set of zero positions to flip to
// one. The empty set is the identity attack.
struct Attack {
  std::vector<int> insert_indices;

  int change_count() const { return static_cast<int>(insert_indices.size()); }
  bool is_identity() const { return insert_indices.empty(); }
  bool operator==(const Attack& other) const = default;
};

struct AttackBudget {
  int max_insertions = 1;
};

// All insertion attacks available on x: every subset of x's zero positions of
// size <= budget, enumerated in lexicographic index order with the identity
// first. This order fixes downstream argmax tie-breaking.
std::vector<Attack> attack_set(const BinaryInstance& x, AttackBudget budget);

// Deterministic transformation; every index must point at a zero of x.
BinaryInstance apply_attack(const Attack& attack, const BinaryInstance& x);

// All instances that could have produced the observation within budget:
// the observation itself plus every way of clearing <= budget of its ones.
std::vector<BinaryInstance> origin_set(const BinaryInstance& observed,
                                       AttackBudget budget);

namespace detail {
// Visits subsets of `indices` with size <= max_size in lexicographic order,
// starting with the empty subset. The callback receives the chosen indices.
void for_each_index_subset(const std::vector<int>& indices, int max_size,
                           const std::function<void(const std::vector<int>&)>& visit);
}  // namespace detail

}  // namespace acra

#endif  // ACRA_ATTACK_SPACE_HPP_
