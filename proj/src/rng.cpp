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

#include "acra/rng.hpp"

#include <cmath>

#include "acra/errors.hpp"

namespace acra {

namespace {

inline uint64_t splitmix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(uint32_t c[4], uint32_t k0, uint32_t k1) {
  const uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * c[0];
  const uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * c[2];
  const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
  const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
  c[0] = hi1 ^ c[1] ^ k0;
  c[1] = lo1;
  c[2] = hi0 ^ c[3] ^ k1;
  c[3] = lo0;
}

// Ziggurat tables for the standard normal (Marsaglia & Tsang 2000),
// built once at startup.
struct ZigguratTables {
  uint32_t kn[128];
  double wn[128];
  double fn[128];
  ZigguratTables() {
    const double m1 = 2147483648.0;
    double dn = 3.442619855899, tn = dn;
    const double vn = 9.91256303526217e-3;
    double q = vn / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<uint32_t>((dn / q) * m1);
    kn[1] = 0;
    wn[0] = q / m1;
    wn[127] = dn / m1;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<uint32_t>((dn / tn) * m1);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / m1;
    }
  }
};

const ZigguratTables& ziggurat() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace

uint64_t mix64(uint64_t a, uint64_t b) { return splitmix(splitmix(a) ^ b); }

Philox::Philox(uint64_t key, uint64_t stream)
    : key0_(static_cast<uint32_t>(key)),
      key1_(static_cast<uint32_t>(key >> 32)),
      stream_lo_(static_cast<uint32_t>(stream)),
      stream_hi_(static_cast<uint32_t>(stream >> 32)) {}

void Philox::refill() {
  uint32_t c[4] = {static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
                   stream_lo_, stream_hi_};
  uint32_t k0 = key0_, k1 = key1_;
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  buf_ = {c[0], c[1], c[2], c[3]};
  buf_pos_ = 0;
  ++block_;
}

uint32_t Philox::next_u32() {
  if (buf_pos_ >= 4) refill();
  return buf_[buf_pos_++];
}

uint64_t Philox::next_u64() {
  if (buf_pos_ <= 2) {
    const uint64_t lo = buf_[buf_pos_];
    const uint64_t hi = buf_[buf_pos_ + 1];
    buf_pos_ += 2;
    return (hi << 32) | lo;
  }
  const uint64_t lo = next_u32();
  const uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Philox::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

double Philox::normal() {
  const ZigguratTables& z = ziggurat();
  for (;;) {
    const int32_t hz = static_cast<int32_t>(next_u32());
    const uint32_t iz = static_cast<uint32_t>(hz) & 127u;
    if (static_cast<uint32_t>(hz < 0 ? -static_cast<int64_t>(hz) : hz) < z.kn[iz]) {
      return hz * z.wn[iz];
    }
    // Slow path: tail or wedge.
    const double r = 3.442619855899;
    double x = hz * z.wn[iz];
    if (iz == 0) {
      double y;
      do {
        x = -std::log(1.0 - next_double()) / r;
        y = -std::log(1.0 - next_double());
      } while (y + y < x * x);
      return hz > 0 ? r + x : -(r + x);
    }
    if (z.fn[iz] + next_double() * (z.fn[iz - 1] - z.fn[iz]) < std::exp(-0.5 * x * x)) {
      return x;
    }
    // retry with fresh bits
  }
}

GammaSampler::GammaSampler(double shape, double scale) : shape_(shape), scale_(scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw NumericError("gamma sampler requires positive shape and scale");
  }
  const double d_shape = shape >= 1.0 ? shape : shape + 1.0;
  d_ = d_shape - 1.0 / 3.0;
  c_ = 1.0 / std::sqrt(9.0 * d_);
  inv_shape_ = 1.0 / shape;
}

double GammaSampler::draw(Philox& rng) const {
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c_ * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_double();
    const double x2 = x * x;
    double g = 0.0;
    if (u < 1.0 - 0.0331 * x2 * x2) {
      g = d_ * v;
    } else if (std::log(u) < 0.5 * x2 + d_ * (1.0 - v + std::log(v))) {
      g = d_ * v;
    } else {
      continue;
    }
    if (shape_ < 1.0) {
      double w;
      do {
        w = rng.next_double();
      } while (w <= 0.0);
      g *= std::pow(w, inv_shape_);
    }
    return g * scale_;
  }
}

double Philox::gamma(double shape, double scale) {
  return GammaSampler(shape, scale).draw(*this);
}

double Philox::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

}  // namespace acra
