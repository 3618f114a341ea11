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

#include "acra/synthetic.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "acra/errors.hpp"
#include "acra/rng.hpp"

namespace acra {

namespace {

constexpr int kFeatureCount = 54;
constexpr double kInternalHamFraction = 0.45;

struct FeatureRates {
  const char* name;
  double spam;
  double ham_internal;
  double ham_generic;
};

// Word-presence rates per class. Ham mixes an "internal" subtype (rich in the
// strong indicator words) with a "generic" subtype; the marginal ham rates
// are what a fitted model sees.
constexpr std::array<FeatureRates, kFeatureCount> kRates = {{
    // Spam indicator words.
    {"free", 0.33, 0.0225, 0.0324},
    {"remove", 0.3, 0.025, 0.036},
    {"money", 0.26, 0.025, 0.036},
    {"credit", 0.19, 0.0325, 0.0468},
    {"order", 0.17, 0.035, 0.0504},
    {"offer", 0.155, 0.0375, 0.054},
    {"000", 0.14, 0.035, 0.0504},
    {"business", 0.125, 0.035, 0.0504},
    {"internet", 0.115, 0.0325, 0.0468},
    {"mail", 0.105, 0.03, 0.0432},
    {"receive", 0.1, 0.03, 0.0432},
    {"addresses", 0.095, 0.03, 0.0432},
    // Strong ham indicator words (descending internal prevalence, so the
    // attacker's first-index tie break lands on the strongest word).
    {"george", 0.012, 0.685, 0.028},
    {"hp", 0.012, 0.65, 0.028},
    {"hpl", 0.012, 0.615, 0.028},
    {"lab", 0.012, 0.575, 0.028},
    {"telnet", 0.012, 0.535, 0.028},
    {"857", 0.012, 0.5, 0.028},
    // Medium ham words shared across ham subtypes.
    {"meeting", 0.12, 0.42, 0.38},
    {"project", 0.13, 0.4, 0.37},
    {"conference", 0.14, 0.38, 0.36},
    // Common vocabulary, ham-leaning but present in spam too.
    {"re", 0.17, 0.165, 0.3564},
    {"edu", 0.18, 0.2325, 0.5022},
    {"will", 0.19, 0.1875, 0.405},
    {"you", 0.2, 0.255, 0.5508},
    {"your", 0.17, 0.21, 0.4536},
    {"people", 0.18, 0.165, 0.3564},
    {"data", 0.19, 0.2325, 0.5022},
    {"original", 0.2, 0.1875, 0.405},
    {"report", 0.17, 0.255, 0.5508},
    {"table", 0.18, 0.21, 0.4536},
    // Neutral filler vocabulary, slight spam lean on alternate words.
    {"make", 0.08818181818, 0.07936363636, 0.08818181818},
    {"address", 0.1516090909, 0.1251818182, 0.1390909091},
    {"all", 0.05, 0.045, 0.05},
    {"3d", 0.1099909091, 0.09081818182, 0.1009090909},
    {"our", 0.1518181818, 0.1366363636, 0.1518181818},
    {"over", 0.06837272727, 0.05645454545, 0.06272727273},
    {"email", 0.1136363636, 0.1022727273, 0.1136363636},
    {"font", 0.1793545455, 0.1480909091, 0.1645454545},
    {"labs", 0.07545454545, 0.06790909091, 0.07545454545},
    {"650", 0.1377363636, 0.1137272727, 0.1263636364},
    {"415", 0.1772727273, 0.1595454545, 0.1772727273},
    {"85", 0.09611818182, 0.07936363636, 0.08818181818},
    {"technology", 0.1390909091, 0.1251818182, 0.1390909091},
    {"1999", 0.0545, 0.045, 0.05},
    {"parts", 0.1009090909, 0.09081818182, 0.1009090909},
    {"pm", 0.1654818182, 0.1366363636, 0.1518181818},
    {"direct", 0.06272727273, 0.05645454545, 0.06272727273},
    {"cs", 0.1238636364, 0.1022727273, 0.1136363636},
    {"semicolon", 0.1645454545, 0.1480909091, 0.1645454545},
    {"paren", 0.08224545455, 0.06790909091, 0.07545454545},
    {"bracket", 0.1263636364, 0.1137272727, 0.1263636364},
    {"bang", 0.1932272727, 0.1595454545, 0.1772727273},
    {"dollar", 0.08818181818, 0.07936363636, 0.08818181818},
}};

}  // namespace

Dataset synthesize_spam_corpus(int instance_count, int positive_count, uint64_t seed) {
  if (instance_count <= 0 || positive_count <= 0 || positive_count >= instance_count) {
    throw ValidationError("need 0 < positive_count < instance_count");
  }

  Dataset corpus;
  corpus.n = kFeatureCount;
  corpus.feature_names.reserve(kFeatureCount);
  for (const auto& rates : kRates) corpus.feature_names.push_back(rates.name);
  corpus.instances.resize(instance_count);

  const StreamFamily family(seed);
  Philox label_rng = family.stream(stream_tag::kSynth, 0);

  // Exact class counts, order shuffled.
  std::vector<Label> labels(instance_count, Label::negative);
  for (int i = 0; i < positive_count; ++i) labels[i] = Label::positive;
  for (int i = instance_count; i > 1; --i) {
    const int j = static_cast<int>(label_rng.next_double() * i);
    std::swap(labels[i - 1], labels[j < i ? j : i - 1]);
  }

  for (int i = 0; i < instance_count; ++i) {
    Philox rng = family.stream(stream_tag::kSynth, static_cast<uint64_t>(i) + 1);
    BinaryInstance& inst = corpus.instances[i];
    inst.label = labels[i];
    inst.bits.resize(kFeatureCount);
    const bool internal_ham = labels[i] == Label::negative &&
                              rng.next_double() < kInternalHamFraction;
    for (int f = 0; f < kFeatureCount; ++f) {
      const auto& rates = kRates[f];
      const double rate = labels[i] == Label::positive
                              ? rates.spam
                              : (internal_ham ? rates.ham_internal : rates.ham_generic);
      inst.bits[f] = rng.next_double() < rate ? 1 : 0;
    }
  }
  return corpus;
}

void write_synthetic_csv(const Dataset& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (size_t i = 0; i < corpus.instances.size(); ++i) {
    const auto& inst = corpus.instances[i];
    for (int f = 0; f < inst.dimension(); ++f) {
      // Present words get a plausible positive frequency; binarization only
      // cares about the sign.
      if (inst.bits[f]) {
        out << 0.1 + 0.01 * ((i + f) % 40) << ',';
      } else {
        out << "0,";
      }
    }
    // Filler statistics columns (dropped on load).
    out << 1 + (i % 7) << ',' << 10 + (i % 90) << ',' << 100 + (i % 900) << ',';
    out << (inst.label == Label::positive ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("write failed: '" + path + "'");
}

}  // namespace acra
