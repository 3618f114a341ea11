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

#ifndef ACRA_SYNTHETIC_HPP_
#define ACRA_SYNTHETIC_HPP_

#include <cstdint>
#include <string>

#include "acra/corpus.hpp"

namespace acra {

// Seeded spam-like benchmark corpus with 54 binary word features. Spam draws
// from one Bernoulli profile; ham is a two-subtype mixture (work-internal
// mail rich in a handful of telltale words, and generic mail that shares the
// common vocabulary). A few words are strong ham indicators that spam almost
// never contains, which is what makes good-word insertion worthwhile for the
// attacker.
Dataset synthesize_spam_corpus(int instance_count, int positive_count, uint64_t seed);

// Writes the corpus in the word-frequency CSV layout this project ingests:
// 54 word columns, three filler statistics columns, and a trailing 0/1 label.
void write_synthetic_csv(const Dataset& corpus, const std::string& path);

}  // namespace acra

#endif  // ACRA_SYNTHETIC_HPP_
