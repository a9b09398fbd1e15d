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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

namespace smoothmart {
namespace {

// Known-answer vectors published with the Random123 distribution.
TEST(PhiloxTest, KnownAnswerZero) {
  const PhiloxCounter out = Philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c,
                                0x9b00dbd8}));
}

TEST(PhiloxTest, KnownAnswerOnes) {
  const PhiloxCounter out =
      Philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                 {0xffffffff, 0xffffffff});
  EXPECT_EQ(out, (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6,
                                0x6d5451fd}));
}

TEST(PhiloxTest, KnownAnswerPi) {
  const PhiloxCounter out =
      Philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                 {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out, (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420,
                                0x24126ea1}));
}

TEST(CounterRngTest, PureFunctionOfAddress) {
  const RngSpec spec{42, 3, 9};
  const CounterRng a(spec, Substream::kBaseSigns);
  const CounterRng b(spec, Substream::kBaseSigns);
  for (std::uint32_t step = 0; step < 100; ++step) {
    EXPECT_EQ(a.Bits(step, 0), b.Bits(step, 0));
  }
  // Visiting order is irrelevant.
  const std::uint64_t late = a.Bits(77, 5);
  (void)a.Bits(3, 1);
  EXPECT_EQ(a.Bits(77, 5), late);
}

TEST(CounterRngTest, AddressComponentsSeparateStreams) {
  const RngSpec base{42, 3, 9};
  std::set<std::uint64_t> seen;
  seen.insert(CounterRng(base, Substream::kBaseSigns).Bits(1, 0));
  seen.insert(CounterRng(base, Substream::kMagnitudes).Bits(1, 0));
  seen.insert(CounterRng(base, Substream::kEnlargement).Bits(1, 0));
  seen.insert(CounterRng(base.WithTrial(10), Substream::kBaseSigns).Bits(1, 0));
  seen.insert(
      CounterRng(base.WithExperiment(4), Substream::kBaseSigns).Bits(1, 0));
  seen.insert(CounterRng(RngSpec{43, 3, 9}, Substream::kBaseSigns).Bits(1, 0));
  seen.insert(CounterRng(base, Substream::kBaseSigns).Bits(2, 0));
  seen.insert(CounterRng(base, Substream::kBaseSigns).Bits(1, 1));
  EXPECT_EQ(seen.size(), 8u);
}

TEST(CounterRngTest, UniformAndSignRanges) {
  const CounterRng rng(RngSpec{1, 0, 0}, Substream::kGeometry);
  double sum = 0.0;
  long signs = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.Uniform(k, 0);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    const int s = rng.Sign(k, 1);
    ASSERT_TRUE(s == 1 || s == -1);
    signs += s;
  }
  // Six standard deviations.
  EXPECT_NEAR(sum / n, 0.5, 6.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_LE(std::abs(static_cast<double>(signs)), 6.0 * std::sqrt(n));
}

TEST(PhiloxEngineTest, OffsetIsASuffix) {
  const RngSpec spec{5, 1, 2};
  PhiloxEngine from_zero(spec, Substream::kGeometry);
  for (int k = 0; k < 10; ++k) from_zero();
  PhiloxEngine from_ten(spec, Substream::kGeometry, 10);
  for (int k = 0; k < 50; ++k) EXPECT_EQ(from_zero(), from_ten());
}

TEST(PhiloxEngineTest, MatchesCounterAddressing) {
  const RngSpec spec{5, 1, 2};
  const CounterRng rng(spec, Substream::kGeometry);
  PhiloxEngine eng(spec, Substream::kGeometry, (std::uint64_t{3} << 24) + 7);
  EXPECT_EQ(eng(), rng.Bits(3, 7));
}

}  // namespace
}  // namespace smoothmart
