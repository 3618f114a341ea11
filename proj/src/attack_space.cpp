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

#include "acra/attack_space.hpp"

#include <string>

#include "acra/errors.hpp"

namespace acra {

namespace detail {

namespace {
void visit_subsets(const std::vector<int>& indices, int max_size, size_t next,
                   std::vector<int>& chosen,
                   const std::function<void(const std::vector<int>&)>& visit) {
  visit(chosen);
  if (static_cast<int>(chosen.size()) == max_size) return;
  for (size_t i = next; i < indices.size(); ++i) {
    chosen.push_back(indices[i]);
    visit_subsets(indices, max_size, i + 1, chosen, visit);
    chosen.pop_back();
  }
}
}  // namespace

void for_each_index_subset(const std::vector<int>& indices, int max_size,
                           const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> chosen;
  chosen.reserve(max_size > 0 ? max_size : 0);
  visit_subsets(indices, max_size, 0, chosen, visit);
}

}  // namespace detail

std::vector<Attack> attack_set(const BinaryInstance& x, AttackBudget budget) {
  std::vector<int> zeros;
  for (int i = 0; i < x.dimension(); ++i) {
    if (!x.bits[i]) zeros.push_back(i);
  }
  std::vector<Attack> attacks;
  detail::for_each_index_subset(zeros, budget.max_insertions,
                                [&](const std::vector<int>& chosen) {
                                  attacks.push_back(Attack{chosen});
                                });
  return attacks;
}

BinaryInstance apply_attack(const Attack& attack, const BinaryInstance& x) {
  BinaryInstance result = x;
  for (int index : attack.insert_indices) {
    if (index < 0 || index >= x.dimension()) {
      throw ValidationError("attack index " + std::to_string(index) + " out of range");
    }
    if (x.bits[index]) {
      throw ValidationError("invalid attack: feature " + std::to_string(index) +
                            " is already 1");
    }
    result.bits[index] = 1;
  }
  return result;
}

std::vector<BinaryInstance> origin_set(const BinaryInstance& observed,
                                       AttackBudget budget) {
  std::vector<int> ones;
  for (int i = 0; i < observed.dimension(); ++i) {
    if (observed.bits[i]) ones.push_back(i);
  }
  std::vector<BinaryInstance> origins;
  detail::for_each_index_subset(ones, budget.max_insertions,
                                [&](const std::vector<int>& removed) {
                                  BinaryInstance origin = observed;
                                  for (int index : removed) origin.bits[index] = 0;
                                  origins.push_back(std::move(origin));
                                });
  return origins;
}

}  // namespace acra
