// Copyright 2026 The Smoothmart Authors
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

#include "smoothmart/rng.h"

namespace smoothmart {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline PhiloxCounter Round(const PhiloxCounter& ctr, const PhiloxKey& key) {
  std::uint32_t hi0, lo0, hi1, lo1;
  MulHiLo(kPhiloxM0, ctr[0], hi0, lo0);
  MulHiLo(kPhiloxM1, ctr[2], hi1, lo1);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

PhiloxCounter Philox4x32(PhiloxCounter counter, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    counter = Round(counter, key);
  }
  return counter;
}

CounterRng::CounterRng(const RngSpec& spec, Substream substream)
    : spec_(spec), tag_(static_cast<std::uint32_t>(substream) << 24) {}

std::uint64_t CounterRng::Bits(std::uint32_t step, std::uint32_t lane) const {
  const PhiloxKey key = {static_cast<std::uint32_t>(spec_.seed),
                         static_cast<std::uint32_t>(spec_.seed >> 32)};
  const PhiloxCounter ctr = {spec_.experiment, spec_.trial, step,
                             tag_ | (lane & 0xFFFFFFu)};
  const PhiloxCounter out = Philox4x32(ctr, key);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double CounterRng::Uniform(std::uint32_t step, std::uint32_t lane) const {
  return static_cast<double>(Bits(step, lane) >> 11) * 0x1.0p-53;
}

int CounterRng::Sign(std::uint32_t step, std::uint32_t lane) const {
  return (Bits(step, lane) >> 63) ? -1 : 1;
}

PhiloxEngine::result_type PhiloxEngine::operator()() {
  const std::uint64_t k = index_++;
  return rng_.Bits(static_cast<std::uint32_t>(k >> 24),
                   static_cast<std::uint32_t>(k & 0xFFFFFF));
}

double PhiloxEngine::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace smoothmart
