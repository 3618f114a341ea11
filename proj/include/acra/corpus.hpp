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

#ifndef ACRA_CORPUS_HPP_
#define ACRA_CORPUS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace acra {

enum class Label : int { negative = 0, positive = 1 };

char label_symbol(Label label);
Label label_from_symbol(char symbol);

// One bag-of-words instance: a fixed-length bit vector of word-presence
// features, optionally labelled.
struct BinaryInstance {
  std::vector<uint8_t> bits;
  std::optional<Label> label;

  int dimension() const { return static_cast<int>(bits.size()); }
  int ones_count() const;
  bool operator==(const BinaryInstance& other) const = default;
};

// Content hash over the feature bits (label excluded). Identifies identical
// feature vectors for substream derivation.
uint64_t instance_hash(const BinaryInstance& instance);

struct Dataset {
  int n = 0;
  std::vector<BinaryInstance> instances;
  std::vector<std::string> feature_names;

  size_t size() const { return instances.size(); }
  size_t count(Label label) const;
};

struct CsvOptions {
  int n_word_features = 54;
  double binarize_threshold = 0.0;
  bool has_header = false;
};

// Reads a comma-separated bag-of-words file. Each row carries at least
// n_word_features numeric columns followed (last column) by a 0/1 label.
// Word columns binarize as value > threshold; any extra columns between the
// word features and the label are dropped.
Dataset load_csv(const std::string& path, const CsvOptions& options);

// Canonical binary dump: one line per instance, n space-separated bits, then
// the label symbol (+, - or ? when unlabelled).
Dataset read_instances(const std::string& path);
void write_instances(const Dataset& dataset, const std::string& path);

// Disjoint uniform-random partition with |train| = round(fraction * size).
// Identical (dataset, fraction, seed) triples give bit-identical splits.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  uint64_t seed);

// Same, but partitions each class separately (|train_c| = round(fraction * n_c)).
std::pair<Dataset, Dataset> split_stratified(const Dataset& dataset,
                                             double train_fraction, uint64_t seed);

}  // namespace acra

#endif  // ACRA_CORPUS_HPP_
