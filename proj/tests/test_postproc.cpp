// Copyright 2026 The qisep authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qisep/postproc.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "qisep/rng.hpp"
#include "testing/oracles.hpp"

namespace qisep {
namespace {

std::vector<double> sine(double hz, std::size_t n, double sr,
                         double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    x[t] = amp * std::sin(2.0 * M_PI * hz * static_cast<double>(t) / sr);
  }
  return x;
}

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  RngStream rng = RngStream::keyed(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-0.8, 0.8);
  return x;
}

TEST(BandpassTest, FullBandIsIdentity) {
  const double sr = 8000.0;
  BandpassConfig band;
  band.low_hz = 0.0;
  band.high_hz = sr / 2.0;
  const std::vector<double> x = random_signal(3000, 41);
  const std::vector<double> y = bandpass(x, band, sr);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(y[i], x[i], 1e-10);
  }
}

TEST(BandpassTest, RemovesOutOfBandTone) {
  const double sr = 8000.0;
  BandpassConfig band;
  band.low_hz = 200.0;
  band.high_hz = 4000.0;
  // 100 Hz over a whole second: integer cycles, energy confined to its bin.
  const std::vector<double> x = sine(100.0, 8000, sr);
  const std::vector<double> y = bandpass(x, band, sr);
  EXPECT_LT(testing::energy(y) / testing::energy(x), 0.01);
}

TEST(BandpassTest, ZeroSignalStaysZero) {
  BandpassConfig band;
  band.low_hz = 100.0;
  band.high_hz = 1000.0;
  for (double v : bandpass(std::vector<double>(500, 0.0), band, 8000.0)) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(BandpassTest, ProjectionIdempotency) {
  const double sr = 8000.0;
  BandpassConfig band;
  band.low_hz = 300.0;
  band.high_hz = 2500.0;
  for (std::uint64_t seed = 60; seed < 66; ++seed) {
    // Odd length exercises the Bluestein path.
    const std::vector<double> x = random_signal(4001, seed);
    const std::vector<double> once = bandpass(x, band, sr);
    const std::vector<double> twice = bandpass(once, band, sr);
    std::vector<double> err(once.size());
    for (std::size_t i = 0; i < once.size(); ++i) err[i] = twice[i] - once[i];
    EXPECT_LT(std::sqrt(testing::energy(err) / testing::energy(once)), 1e-9);
  }
}

TEST(BandpassTest, InvalidBandThrows) {
  BandpassConfig band;
  band.low_hz = 2000.0;
  band.high_hz = 1000.0;
  EXPECT_THROW(bandpass(std::vector<double>(100, 0.1), band, 8000.0),
               std::invalid_argument);
  band.low_hz = 100.0;
  band.high_hz = 9000.0;  // above Nyquist
  EXPECT_THROW(bandpass(std::vector<double>(100, 0.1), band, 8000.0),
               std::invalid_argument);
}

TEST(BandpassTest, AutoHighResolvesTo45Percent) {
  BandpassConfig band;
  EXPECT_EQ(band.resolved_high(8000.0), 3600.0);
  EXPECT_NO_THROW(band.validate(8000.0));
}

TEST(CompressTest, PaperArithmetic) {
  CompressorConfig c;
  c.threshold = 0.5;
  c.ratio = 4.0;
  const std::vector<double> y = compress({0.9, 0.3, -0.9}, c);
  EXPECT_NEAR(y[0], 0.6, 1e-12);   // 0.5 + (0.9 - 0.5) / 4
  EXPECT_NEAR(y[1], 0.3, 1e-12);   // below threshold
  EXPECT_NEAR(y[2], -0.6, 1e-12);  // sign preserved
}

TEST(CompressTest, UnitRatioIsIdentity) {
  CompressorConfig c;
  c.threshold = 0.3;
  c.ratio = 1.0;
  const std::vector<double> x = random_signal(1000, 43);
  const std::vector<double> y = compress(x, c);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], x[i], 1e-12);
}

TEST(CompressTest, CurveMonotoneAndNonExpansive) {
  CompressorConfig c;
  c.threshold = 0.4;
  c.ratio = 3.0;
  double prev = -2.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / 400.0;
    const double y = compress({x}, c)[0];
    EXPECT_LE(std::abs(y), std::abs(x) + 1e-15);
    EXPECT_GE(y, prev - 1e-15);  // static curve is monotone
    prev = y;
  }
}

TEST(CompressTest, IdempotentWhenOutputFitsUnderThreshold) {
  // With ratio >= 1 the compressed output of values <= 1 stays below
  // threshold + (1 - threshold) / ratio; when that bound is under the
  // threshold the second pass is the identity.
  CompressorConfig c;
  c.threshold = 0.9;
  c.ratio = 20.0;
  const std::vector<double> x = random_signal(500, 44);
  const std::vector<double> once = compress(x, c);
  const std::vector<double> twice = compress(once, c);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(twice[i], once[i], 1e-12);
  }
  EXPECT_THROW(compress(x, CompressorConfig{0.0, 4.0}), std::invalid_argument);
  EXPECT_THROW(compress(x, CompressorConfig{0.5, 0.5}), std::invalid_argument);
}

TEST(DeclipTest, NoClippedSamplesUnchanged) {
  const std::vector<double> x = random_signal(300, 45);
  const DeclipResult r = declip(x, 0.999);
  EXPECT_FALSE(r.all_clipped);
  EXPECT_EQ(r.samples, x);
}

TEST(DeclipTest, SingleSampleBoundedByMonotoneStencil) {
  // Monotone stencil around one clipped sample: the Hermite value stays
  // within the stencil range.
  const std::vector<double> x = {0.1, 0.2, 1.0, 0.8, 0.9};
  const DeclipResult r = declip(x, 0.95);
  EXPECT_FALSE(r.all_clipped);
  EXPECT_EQ(r.samples[0], 0.1);
  EXPECT_EQ(r.samples[1], 0.2);
  EXPECT_EQ(r.samples[3], 0.8);
  EXPECT_GE(r.samples[2], 0.1);
  EXPECT_LE(r.samples[2], 0.9);
  EXPECT_NE(r.samples[2], 1.0);
}

TEST(DeclipTest, ClippedSineRestorationBeatsClippedInput) {
  const double sr = 8000.0;
  const std::vector<double> original = sine(50.0, 2000, sr, 1.0);
  const double clip = 0.8;
  std::vector<double> clipped = original;
  for (double& v : clipped) v = std::clamp(v, -clip, clip);

  const DeclipResult restored = declip(clipped, clip - 1e-9);
  double err_clipped = 0.0, err_restored = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    err_clipped = std::max(err_clipped, std::abs(clipped[i] - original[i]));
    err_restored =
        std::max(err_restored, std::abs(restored.samples[i] - original[i]));
  }
  EXPECT_LT(err_restored, err_clipped);
}

TEST(DeclipTest, OnlyClippedRunsChange) {
  std::vector<double> x = random_signal(500, 46);
  x[100] = 1.0;
  x[101] = 1.0;
  x[250] = -1.0;
  const DeclipResult r = declip(x, 0.999);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == 100 || i == 101 || i == 250) {
      EXPECT_LT(std::abs(r.samples[i]), 1.0);
    } else {
      EXPECT_EQ(r.samples[i], x[i]);
    }
  }
}

TEST(DeclipTest, BoundaryRunsHoldNeighborValue) {
  const std::vector<double> x = {1.0, 1.0, 0.3, 0.2, -1.0};
  const DeclipResult r = declip(x, 0.999);
  EXPECT_EQ(r.samples[0], 0.3);
  EXPECT_EQ(r.samples[1], 0.3);
  EXPECT_EQ(r.samples[4], 0.2);
}

TEST(DeclipTest, FullyClippedSignalFlagsAndReturnsUnchanged) {
  const std::vector<double> x(64, 1.0);
  const DeclipResult r = declip(x, 0.999);
  EXPECT_TRUE(r.all_clipped);
  EXPECT_EQ(r.samples, x);
  EXPECT_THROW(declip(x, 0.0), std::invalid_argument);
}

TEST(PostprocessTest, ChainRunsInOrderAndRespectsToggles) {
  const double sr = 8000.0;
  PostprocConfig config;
  config.bandpass.low_hz = 100.0;
  config.bandpass.high_hz = 3000.0;
  config.compressor.threshold = 0.5;
  config.compressor.ratio = 4.0;

  const std::vector<double> x = sine(440.0, 4000, sr, 0.9);
  PostprocFlags flags;
  const std::vector<double> y = postprocess(x, config, sr, &flags);
  EXPECT_EQ(y.size(), x.size());
  EXPECT_FALSE(flags.declip_all_clipped);
  // Compression bends the 0.9 peak to 0.6.
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  EXPECT_NEAR(peak, 0.6, 0.01);

  PostprocConfig disabled;
  disabled.enabled = false;
  EXPECT_EQ(postprocess(x, disabled, sr), x);
}

}  // namespace
}  // namespace qisep
