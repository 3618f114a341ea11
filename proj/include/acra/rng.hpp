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

#ifndef ACRA_RNG_HPP_
#define ACRA_RNG_HPP_

#include <array>
#include <cstdint>

namespace acra {

// Avalanche mix of two 64-bit values (splitmix64 finalizer chain). Used to
// derive substream identifiers from seeds, tags and content hashes.
uint64_t mix64(uint64_t a, uint64_t b);

// Counter-based generator (Philox4x32-10, Salmon et al. 2011). A stream is
// addressed by (key, stream id); draws within a stream consume consecutive
// counter blocks. Two streams with different ids are statistically
// independent, which makes per-sample substreams free: any worker can
// reproduce any stream from scratch, independent of scheduling order.
class Philox {
 public:
  Philox(uint64_t key, uint64_t stream);

  uint32_t next_u32();
  uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_double();
  double uniform(double lo, double hi);

  // Standard normal via the ziggurat method.
  double normal();

  // Marsaglia-Tsang for shape >= 1; shape < 1 uses the boost relation
  // Ga(a) = Ga(a+1) * U^(1/a).
  double gamma(double shape, double scale);

  // Ratio of gammas.
  double beta(double a, double b);

 private:
  void refill();

  uint32_t key0_, key1_;
  uint32_t stream_lo_, stream_hi_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buf_{};
  int buf_pos_ = 4;
};

// Gamma sampler with the Marsaglia-Tsang constants precomputed; used in hot
// loops where the same (shape, scale) is drawn from many times.
class GammaSampler {
 public:
  GammaSampler() = default;
  GammaSampler(double shape, double scale);
  double draw(Philox& rng) const;
  double shape() const { return shape_; }
  double scale() const { return scale_; }

 private:
  double shape_ = 1.0, scale_ = 1.0;
  double d_ = 0.0, c_ = 0.0;       // MT constants for max(shape, 1)
  double inv_shape_ = 1.0;          // boost exponent when shape < 1
};

// Hands out named substreams derived from one master key. derive() returns a
// child family; stream() returns a leaf generator. All derivations are pure
// functions of the key and the salts, so any evaluation order produces
// identical draws.
class StreamFamily {
 public:
  explicit StreamFamily(uint64_t master_key) : key_(master_key) {}

  StreamFamily derive(uint64_t salt) const { return StreamFamily(mix64(key_, salt)); }
  Philox stream(uint64_t salt_a, uint64_t salt_b = 0) const {
    return Philox(key_, mix64(salt_a, salt_b));
  }
  uint64_t key() const { return key_; }

 private:
  uint64_t key_;
};

// Substream tags. Arbitrary distinct constants.
namespace stream_tag {
inline constexpr uint64_t kSplit = 0x5eedb0a7c0ffee01ULL;
inline constexpr uint64_t kTaint = 0x7a17000000000002ULL;
inline constexpr uint64_t kAttackChoice = 0x00c4a2d96b3f0003ULL;
inline constexpr uint64_t kOriginDraw = 0x0a9e77aabb000004ULL;
inline constexpr uint64_t kSynth = 0x51c29d4e00000005ULL;
}  // namespace stream_tag

}  // namespace acra

#endif  // ACRA_RNG_HPP_
