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

// Counter-based random streams.
//
// Every draw is a pure function of (seed, experiment, trial, substream,
// step, lane) evaluated through Philox4x32-10, so results never depend on
// the order in which trials or steps are visited, nor on the worker count.

#ifndef SMOOTHMART_RNG_H_
#define SMOOTHMART_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace smoothmart {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter Philox4x32(PhiloxCounter counter, PhiloxKey key);

// Hierarchical stream identifier. The step index is supplied per draw.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint32_t experiment = 0;
  std::uint32_t trial = 0;

  RngSpec WithTrial(std::uint32_t t) const { return {seed, experiment, t}; }
  RngSpec WithExperiment(std::uint32_t e) const { return {seed, e, trial}; }
  bool operator==(const RngSpec&) const = default;
};

// Independent sub-streams of one RngSpec.
enum class Substream : std::uint8_t {
  kBaseSigns = 0,
  kMagnitudes = 1,
  kEnlargement = 2,
  kGeometry = 3,
};

class CounterRng {
 public:
  CounterRng(const RngSpec& spec, Substream substream);

  // 64 random bits addressed by (step, lane). lane < 2^24.
  std::uint64_t Bits(std::uint32_t step, std::uint32_t lane) const;
  // Uniform on [0, 1) with 53 bits.
  double Uniform(std::uint32_t step, std::uint32_t lane) const;
  // Rademacher: +1 or -1 with probability 1/2 each.
  int Sign(std::uint32_t step, std::uint32_t lane) const;

 private:
  RngSpec spec_;
  std::uint32_t tag_;
};

// Sequential view over a CounterRng for bulk sampling. Draw k is
// CounterRng::Bits(k >> 24, k & 0xFFFFFF), so the sequence is a fixed
// function of the spec and a prefix of it never changes.
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;

  PhiloxEngine(const RngSpec& spec, Substream substream,
               std::uint64_t offset = 0)
      : rng_(spec, substream), index_(offset) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();
  double Uniform();  // [0, 1)

 private:
  CounterRng rng_;
  std::uint64_t index_;
};

}  // namespace smoothmart

#endif  // SMOOTHMART_RNG_H_
