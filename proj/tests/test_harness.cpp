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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "qisep/config.hpp"
#include "qisep/manifest.hpp"
#include "qisep/mixture.hpp"
#include "qisep/recipes.hpp"
#include "qisep/report.hpp"
#include "qisep/rng.hpp"
#include "qisep/wav.hpp"
#include "testing/oracles.hpp"

namespace qisep {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() /
           ("qisep_test_" + std::to_string(
                                RngStream::keyed(
                                    static_cast<std::uint64_t>(
                                        ::testing::UnitTest::GetInstance()
                                            ->random_seed()) +
                                    reinterpret_cast<std::uintptr_t>(this))
                                    .next_u64()));
    fs::create_directories(dir_);
  }
  ~TempDir() { fs::remove_all(dir_); }
  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

 private:
  fs::path dir_;
};

TEST(WavTest, PcmRoundTripWithinOneLsb) {
  TempDir tmp;
  std::vector<double> ramp(2000);
  for (std::size_t i = 0; i < ramp.size(); ++i) {
    ramp[i] = -1.0 + 2.0 * static_cast<double>(i) /
                         static_cast<double>(ramp.size() - 1);
  }
  const std::string path = tmp.path("ramp.wav");
  write_wav(path, ramp, 8000);
  const WavData back = read_wav(path);
  EXPECT_EQ(back.sample_rate, 8000u);
  ASSERT_EQ(back.samples.size(), ramp.size());
  for (std::size_t i = 0; i < ramp.size(); ++i) {
    EXPECT_LE(std::abs(back.samples[i] - ramp[i]), std::pow(2.0, -15.0));
  }
}

TEST(WavTest, StereoDownmixesByAveraging) {
  TempDir tmp;
  const std::string path = tmp.path("stereo.wav");
  // Hand-rolled stereo PCM16 file: L = 0.5, R = -0.25.
  std::vector<unsigned char> bytes;
  auto u16 = [&](std::uint16_t v) {
    bytes.push_back(v & 0xFF);
    bytes.push_back((v >> 8) & 0xFF);
  };
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xFF);
  };
  const std::uint32_t frames = 100;
  bytes.insert(bytes.end(), {'R', 'I', 'F', 'F'});
  u32(36 + frames * 4);
  bytes.insert(bytes.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  u32(16);
  u16(1);
  u16(2);
  u32(8000);
  u32(8000 * 4);
  u16(4);
  u16(16);
  bytes.insert(bytes.end(), {'d', 'a', 't', 'a'});
  u32(frames * 4);
  const std::int16_t left = static_cast<std::int16_t>(0.5 * 32767);
  const std::int16_t right = static_cast<std::int16_t>(-0.25 * 32767);
  for (std::uint32_t i = 0; i < frames; ++i) {
    u16(static_cast<std::uint16_t>(left));
    u16(static_cast<std::uint16_t>(right));
  }
  std::ofstream(path, std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));

  const WavData data = read_wav(path);
  ASSERT_EQ(data.samples.size(), frames);
  EXPECT_NEAR(data.samples[0], 0.125, 1e-4);
}

TEST(WavTest, Float32Read) {
  TempDir tmp;
  const std::string path = tmp.path("float.wav");
  std::vector<unsigned char> bytes;
  auto u16 = [&](std::uint16_t v) {
    bytes.push_back(v & 0xFF);
    bytes.push_back((v >> 8) & 0xFF);
  };
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xFF);
  };
  const float values[] = {0.25f, -0.5f, 1.5f};  // last one clamps
  bytes.insert(bytes.end(), {'R', 'I', 'F', 'F'});
  u32(36 + 12);
  bytes.insert(bytes.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  u32(16);
  u16(3);  // IEEE float
  u16(1);
  u32(16000);
  u32(16000 * 4);
  u16(4);
  u16(32);
  bytes.insert(bytes.end(), {'d', 'a', 't', 'a'});
  u32(12);
  for (float v : values) {
    std::uint32_t raw;
    std::memcpy(&raw, &v, 4);
    u32(raw);
  }
  std::ofstream(path, std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));

  const WavData data = read_wav(path);
  ASSERT_EQ(data.samples.size(), 3u);
  EXPECT_FLOAT_EQ(data.samples[0], 0.25);
  EXPECT_FLOAT_EQ(data.samples[1], -0.5);
  EXPECT_EQ(data.samples[2], 1.0);
  EXPECT_EQ(data.sample_rate, 16000u);
}

TEST(WavTest, TruncatedHeaderNamesMissingChunk) {
  TempDir tmp;
  const std::string path = tmp.path("broken.wav");
  std::ofstream(path, std::ios::binary) << "RIFFxxxxWAVE";
  try {
    read_wav(path);
    FAIL() << "expected error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("fmt"), std::string::npos) << e.what();
  }

  const std::string not_riff = tmp.path("not_riff.wav");
  std::ofstream(not_riff, std::ios::binary) << "JUNKJUNKJUNK";
  try {
    read_wav(not_riff);
    FAIL() << "expected error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("RIFF"), std::string::npos);
  }
}

TEST(MixtureTest, IdentityAndZeroFilters) {
  MixtureSpec spec;
  spec.sample_rate = 8000.0;
  std::vector<double> s1(100);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    s1[i] = std::sin(0.05 * static_cast<double>(i));
  }
  spec.sources = {s1};
  spec.filters = {{1.0}};
  const MixtureResult one = synthesize_mixture(spec, 1);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    EXPECT_NEAR(one.mixture[i], s1[i] * one.gain, 1e-12);
  }

  spec.sources = {s1, s1};
  spec.filters = {{1.0}, {0.0}};
  const MixtureResult two = synthesize_mixture(spec, 1);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    EXPECT_NEAR(two.mixture[i], s1[i] * two.gain, 1e-12);
  }
}

TEST(MixtureTest, TargetSnrIsRealizedExactly) {
  MixtureSpec spec;
  spec.sample_rate = 8000.0;
  std::vector<double> s(4000);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = std::sin(0.23 * static_cast<double>(i));
  }
  spec.sources = {s};
  spec.filters = {{1.0}};
  spec.target_snr_db = 3.0;
  const MixtureResult m = synthesize_mixture(spec, 7);
  const double clean = testing::energy(m.references[0]);
  const double noise = testing::energy(m.noise);
  EXPECT_NEAR(clean / noise / std::pow(10.0, 0.3), 1.0, 1e-6);
}

TEST(MixtureTest, MixingIdentityAndPeakNormalization) {
  MixtureSpec spec;
  spec.sample_rate = 8000.0;
  RngStream rng = RngStream::keyed(81);
  std::vector<double> s1(500), s2(400);
  for (auto& v : s1) v = rng.uniform(-1.0, 1.0);
  for (auto& v : s2) v = rng.uniform(-1.0, 1.0);
  spec.sources = {s1, s2};
  spec.filters = {{0.8, 0.3}, {1.0, 0.0, -0.2}};
  spec.target_snr_db = 10.0;
  const MixtureResult m = synthesize_mixture(spec, 9);

  // mixture = sum of references + noise, sample for sample.
  ASSERT_EQ(m.references[0].size(), m.mixture.size());
  ASSERT_EQ(m.references[1].size(), m.mixture.size());
  for (std::size_t t = 0; t < m.mixture.size(); ++t) {
    EXPECT_NEAR(m.mixture[t],
                m.references[0][t] + m.references[1][t] + m.noise[t], 1e-9);
  }

  double peak = 0.0;
  for (double v : m.mixture) peak = std::max(peak, std::abs(v));
  for (const auto& r : m.references) {
    for (double v : r) peak = std::max(peak, std::abs(v));
  }
  for (double v : m.noise) peak = std::max(peak, std::abs(v));
  EXPECT_NEAR(peak, 0.9, 1e-9);
}

TEST(MixtureTest, Validation) {
  MixtureSpec spec;
  EXPECT_THROW(synthesize_mixture(spec, 0), std::invalid_argument);
  spec.sources = {{0.1, 0.2}};
  spec.filters = {};
  EXPECT_THROW(synthesize_mixture(spec, 0), std::invalid_argument);
  spec.filters = {{1.0}};
  spec.noise = {0.1};
  spec.target_snr_db = 5.0;
  EXPECT_THROW(synthesize_mixture(spec, 0), std::invalid_argument);
}

TEST(RecipeTest, AllRecipesProduceValidSpecs) {
  for (const char* name : {"tones", "ambands", "moving"}) {
    RecipeConfig config;
    config.name = name;
    config.duration_s = 0.5;
    const MixtureSpec spec = make_recipe(config, 5);
    EXPECT_EQ(spec.sources.size(), 2u);
    EXPECT_EQ(spec.sources[0].size(), 4000u);
    const MixtureResult m = synthesize_mixture(spec, 5);
    EXPECT_GT(testing::energy(m.mixture), 0.0);
    EXPECT_GT(testing::energy(m.noise), 0.0);
  }
  RecipeConfig bad;
  bad.name = "unknown";
  EXPECT_THROW(make_recipe(bad, 1), std::invalid_argument);
}

TEST(RecipeTest, DeterministicPerSeed) {
  RecipeConfig config;
  config.name = "ambands";
  config.duration_s = 0.25;
  const MixtureSpec a = make_recipe(config, 11);
  const MixtureSpec b = make_recipe(config, 11);
  const MixtureSpec c = make_recipe(config, 12);
  EXPECT_EQ(a.sources[0], b.sources[0]);
  EXPECT_NE(a.sources[0], c.sources[0]);
}

TEST(ManifestTest, RoundTripAndSplitHeader) {
  TempDir tmp;
  DatasetManifest manifest;
  manifest.train_fraction = 0.6;
  manifest.val_fraction = 0.2;
  manifest.test_fraction = 0.2;
  manifest.entries.push_back(
      {"mix1.wav", {"a.wav", "b.wav"}, "noise1.wav", "street"});
  manifest.entries.push_back({"mix2.wav", {"c.wav"}, std::nullopt,
                              std::nullopt});
  const std::string path = tmp.path("data.tsv");
  write_manifest(manifest, path);

  const DatasetManifest back = read_manifest(path);
  EXPECT_EQ(back.train_fraction, 0.6);
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.entries[0].mixture, "mix1.wav");
  EXPECT_EQ(back.entries[0].references,
            (std::vector<std::string>{"a.wav", "b.wav"}));
  EXPECT_EQ(back.entries[0].noise, "noise1.wav");
  EXPECT_EQ(back.entries[0].label, "street");
  EXPECT_FALSE(back.entries[1].noise.has_value());
}

TEST(ManifestTest, RejectsDuplicatesAndBadSplits) {
  DatasetManifest manifest;
  manifest.entries.push_back({"m.wav", {"m.wav"}, std::nullopt, std::nullopt});
  EXPECT_THROW(manifest.validate(), std::invalid_argument);

  DatasetManifest bad_split;
  bad_split.train_fraction = 0.5;
  bad_split.val_fraction = 0.1;
  bad_split.test_fraction = 0.1;
  EXPECT_THROW(bad_split.validate(), std::invalid_argument);
}

TEST(ConfigTest, DefaultsCarryTableValues) {
  const RunConfig c;
  EXPECT_EQ(c.qiga.population_size, 50u);
  EXPECT_EQ(c.qiga.max_generations, 100u);
  EXPECT_EQ(c.qiga.crossover_prob, 0.8);
  EXPECT_EQ(c.qiga.mutation_prob, 0.1);
  EXPECT_EQ(c.weights.w_sdr, 0.5);
  EXPECT_EQ(c.weights.w_sir, 0.3);
  EXPECT_EQ(c.weights.w_sar, 0.2);
  EXPECT_EQ(c.weights.w_corr, 1.0);
  EXPECT_EQ(c.n_bands, 16u);
  EXPECT_NO_THROW(c.validate());
}

TEST(ConfigTest, FileRoundTripPreservesEverything) {
  TempDir tmp;
  RunConfig c;
  c.qiga.population_size = 24;
  c.qiga.seed = 1234;
  c.weights.w_corr = 0.5;
  c.postproc.compressor.ratio = 2.5;
  c.sample_rate = 16000.0;
  c.out_dir = "results";
  const std::string path = tmp.path("run.cfg");
  write_config_file(c, path);
  const RunConfig back = load_config_file(path);
  EXPECT_EQ(back.to_map(), c.to_map());
}

TEST(ConfigTest, OverridesAndErrors) {
  const RunConfig base;
  const RunConfig patched =
      apply_overrides(base, {{"qiga.population_size", "10"},
                             {"metrics.w_sdr", "0.9"}});
  EXPECT_EQ(patched.qiga.population_size, 10u);
  EXPECT_EQ(patched.weights.w_sdr, 0.9);

  EXPECT_THROW(apply_overrides(base, {{"qiga.bogus", "1"}}), ConfigError);
  EXPECT_THROW(apply_overrides(base, {{"qiga.population_size", "abc"}}),
               ConfigError);
  EXPECT_THROW(parse_config_text("not a key value line"), ConfigError);
}

TEST(ConfigTest, ParseTextHandlesCommentsAndBlanks) {
  const auto kv = parse_config_text(
      "# comment\n\nqiga.seed = 9   # trailing\n  masks.n_bands=8\n");
  EXPECT_EQ(kv.at("qiga.seed"), "9");
  EXPECT_EQ(kv.at("masks.n_bands"), "8");
}

TEST(ReportTest, JsonRoundTripAndValidation) {
  SeparationReport report;
  report.entry = "mix_000";
  report.mode = "supervised";
  report.per_source = {{10.0, 12.0, 14.0}, {9.0, 11.0, 13.0}};
  report.best_fitness = 7.5;
  report.generations = 101;
  report.trace_csv = "trace_mix_000.csv";
  report.config_snapshot = RunConfig{}.to_map();
  report.config_snapshot.erase("io.out_dir");
  report.clamps.sir_denominator = true;
  report.timing_s["total"] = 1.25;

  const nlohmann::json j = report.to_json();
  EXPECT_NO_THROW(validate_report_json(j));
  const SeparationReport back = SeparationReport::from_json(j);
  EXPECT_EQ(back.entry, report.entry);
  EXPECT_EQ(back.per_source.size(), 2u);
  EXPECT_EQ(back.per_source[1].sar, 13.0);
  EXPECT_TRUE(back.clamps.sir_denominator);
  EXPECT_FALSE(back.clamps.sdr_capped);
  EXPECT_EQ(back.to_json(), j);

  nlohmann::json broken = j;
  broken.erase("flags");
  EXPECT_THROW(validate_report_json(broken), std::runtime_error);
  broken = j;
  broken["per_source"] = nlohmann::json::array();
  EXPECT_THROW(validate_report_json(broken), std::runtime_error);
}

TEST(ReportTest, CsvFormats) {
  const std::string trace = trace_to_csv({1.0, 2.0}, {0.5, 1.5});
  EXPECT_EQ(trace, "generation,best,mean\n0,1,0.5\n1,2,1.5\n");
  const std::string curve = curve_to_csv({0.0, 0.1});
  EXPECT_EQ(curve, "t,p_opt\n0,0\n1,0.10000000000000001\n");
}

}  // namespace
}  // namespace qisep
