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

#include "acra/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "acra/errors.hpp"
#include "acra/rng.hpp"

namespace acra {

char label_symbol(Label label) { return label == Label::positive ? '+' : '-'; }

Label label_from_symbol(char symbol) {
  if (symbol == '+') return Label::positive;
  if (symbol == '-') return Label::negative;
  throw ValidationError(std::string("unknown label symbol '") + symbol + "'");
}

int BinaryInstance::ones_count() const {
  int count = 0;
  for (uint8_t b : bits) count += b;
  return count;
}

uint64_t instance_hash(const BinaryInstance& instance) {
  uint64_t h = 0xcbf29ce484222325ULL;
  uint64_t word = 0;
  int filled = 0;
  for (uint8_t b : instance.bits) {
    word = (word << 1) | b;
    if (++filled == 64) {
      h = mix64(h, word);
      word = 0;
      filled = 0;
    }
  }
  if (filled > 0) h = mix64(h, word | (1ULL << filled));
  return mix64(h, static_cast<uint64_t>(instance.bits.size()));
}

size_t Dataset::count(Label label) const {
  size_t total = 0;
  for (const auto& inst : instances) {
    if (inst.label && *inst.label == label) ++total;
  }
  return total;
}

namespace {

double parse_number(const char* first, const char* last, size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError("parse error at line " + std::to_string(line_no) +
                          ": not a number: '" + std::string(first, last) + "'");
  }
  return value;
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  if (options.n_word_features <= 0) {
    throw ValidationError("n_word_features must be positive");
  }

  Dataset dataset;
  dataset.n = options.n_word_features;

  std::string line;
  size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (options.has_header && line_no == 1) continue;
    if (line.empty()) continue;

    row.clear();
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      const char* field_end = comma;
      while (p < field_end && (*p == ' ' || *p == '\t')) ++p;
      while (field_end > p &&
             (field_end[-1] == ' ' || field_end[-1] == '\t' || field_end[-1] == '\r')) {
        --field_end;
      }
      row.push_back(parse_number(p, field_end, line_no));
      if (comma == end) break;
      p = comma + 1;
    }

    if (static_cast<int>(row.size()) < options.n_word_features + 1) {
      throw ValidationError("parse error at line " + std::to_string(line_no) + ": got " +
                            std::to_string(row.size()) + " columns, need at least " +
                            std::to_string(options.n_word_features + 1));
    }

    BinaryInstance inst;
    inst.bits.resize(options.n_word_features);
    for (int i = 0; i < options.n_word_features; ++i) {
      inst.bits[i] = row[i] > options.binarize_threshold ? 1 : 0;
    }
    const double raw_label = row.back();
    if (raw_label == 1.0) {
      inst.label = Label::positive;
    } else if (raw_label == 0.0) {
      inst.label = Label::negative;
    } else {
      throw ValidationError("parse error at line " + std::to_string(line_no) +
                            ": label column must be 0 or 1");
    }
    dataset.instances.push_back(std::move(inst));
  }

  if (dataset.instances.empty()) throw ValidationError("empty dataset: '" + path + "'");
  return dataset;
}

Dataset read_instances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  Dataset dataset;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream tokens(line);
    std::vector<std::string> fields;
    std::string tok;
    while (tokens >> tok) fields.push_back(tok);
    if (fields.size() < 2) {
      throw ValidationError("parse error at line " + std::to_string(line_no) +
                            ": need bits and a label symbol");
    }
    BinaryInstance inst;
    inst.bits.reserve(fields.size() - 1);
    for (size_t i = 0; i + 1 < fields.size(); ++i) {
      if (fields[i] == "1") {
        inst.bits.push_back(1);
      } else if (fields[i] == "0") {
        inst.bits.push_back(0);
      } else {
        throw ValidationError("parse error at line " + std::to_string(line_no) +
                              ": bit must be 0 or 1, got '" + fields[i] + "'");
      }
    }
    const std::string& sym = fields.back();
    if (sym == "?") {
      inst.label = std::nullopt;
    } else if (sym.size() == 1) {
      inst.label = label_from_symbol(sym[0]);
    } else {
      throw ValidationError("parse error at line " + std::to_string(line_no) +
                            ": bad label '" + sym + "'");
    }
    if (dataset.n == 0) {
      dataset.n = inst.dimension();
    } else if (inst.dimension() != dataset.n) {
      throw ValidationError("parse error at line " + std::to_string(line_no) +
                            ": dimension " + std::to_string(inst.dimension()) +
                            " != " + std::to_string(dataset.n));
    }
    dataset.instances.push_back(std::move(inst));
  }
  if (dataset.instances.empty()) throw ValidationError("empty dataset: '" + path + "'");
  return dataset;
}

void write_instances(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (const auto& inst : dataset.instances) {
    for (int i = 0; i < inst.dimension(); ++i) {
      out << static_cast<int>(inst.bits[i]) << ' ';
    }
    out << (inst.label ? label_symbol(*inst.label) : '?') << '\n';
  }
  if (!out) throw IoError("write failed: '" + path + "'");
}

namespace {

std::pair<Dataset, Dataset> take_indices(const Dataset& dataset,
                                         const std::vector<size_t>& order,
                                         size_t train_count) {
  Dataset train, test;
  train.n = test.n = dataset.n;
  train.feature_names = test.feature_names = dataset.feature_names;
  train.instances.reserve(train_count);
  test.instances.reserve(order.size() - train_count);
  for (size_t i = 0; i < order.size(); ++i) {
    (i < train_count ? train : test).instances.push_back(dataset.instances[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

void shuffle_indices(std::vector<size_t>& indices, Philox& rng) {
  for (size_t i = indices.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.next_double() * static_cast<double>(i));
    std::swap(indices[i - 1], indices[j < i ? j : i - 1]);
  }
}

void check_fraction(double fraction) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0,1), got " +
                          std::to_string(fraction));
  }
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  uint64_t seed) {
  check_fraction(train_fraction);
  if (dataset.instances.empty()) throw ValidationError("cannot split an empty dataset");

  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Philox rng = StreamFamily(seed).stream(stream_tag::kSplit);
  shuffle_indices(order, rng);

  const auto train_count = static_cast<size_t>(
      std::lround(train_fraction * static_cast<double>(dataset.size())));
  return take_indices(dataset, order, train_count);
}

std::pair<Dataset, Dataset> split_stratified(const Dataset& dataset,
                                             double train_fraction, uint64_t seed) {
  check_fraction(train_fraction);
  if (dataset.instances.empty()) throw ValidationError("cannot split an empty dataset");

  std::vector<size_t> order;
  size_t train_count = 0;
  Philox rng = StreamFamily(seed).stream(stream_tag::kSplit, 1);
  std::vector<size_t> pos_first;  // train indices first per class, then the rest
  std::vector<size_t> rest;
  for (Label label : {Label::positive, Label::negative}) {
    std::vector<size_t> pool;
    for (size_t i = 0; i < dataset.size(); ++i) {
      const auto& inst = dataset.instances[i];
      if (inst.label && *inst.label == label) pool.push_back(i);
    }
    shuffle_indices(pool, rng);
    const auto take = static_cast<size_t>(
        std::lround(train_fraction * static_cast<double>(pool.size())));
    pos_first.insert(pos_first.end(), pool.begin(), pool.begin() + take);
    rest.insert(rest.end(), pool.begin() + take, pool.end());
  }
  for (size_t i = 0; i < dataset.size(); ++i) {
    const auto& inst = dataset.instances[i];
    if (!inst.label) rest.push_back(i);  // unlabelled rows always go to test
  }
  train_count = pos_first.size();
  order = std::move(pos_first);
  order.insert(order.end(), rest.begin(), rest.end());
  return take_indices(dataset, order, train_count);
}

}  // namespace acra
