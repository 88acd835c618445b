// Copyright 2026 The TraitForge Authors
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


#include <gtest/gtest.h>

#include <bit>
#include <cstdio>
#include <filesystem>
#include <string>

#include "traitforge/bundle.hpp"
#include "traitforge/random.hpp"
#include "traitforge/synth.hpp"

namespace traitforge {
namespace {

Dataset synthetic(std::size_t documents) {
  SynthConfig c = default_synth_config();
  c.documents = documents;
  return generate_synthetic(c, 17).train;
}

TrainerSpec fast_spec() {
  TrainerSpec s;
  s.svr.epochs = 5;
  return s;
}

const TraitModelBundle& trained() {
  static const TraitModelBundle b = train_bundle(synthetic(120), fast_spec());
  return b;
}

std::string random_text(Rng& rng, const SynthConfig& c) {
  std::string t;
  const std::size_t n = 3 + rng.below(30);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& lex = c.train_lexicons[rng.below(kNumTraits)];
    const bool signal = rng.bernoulli(0.3);
    const auto& pool = signal ? (rng.bernoulli(0.5) ? lex.positive : lex.negative) : c.filler;
    if (i) t += ' ';
    t += pool[rng.below(pool.size())];
  }
  return t;
}

TEST(Bundle, TrainsEveryTraitPresent) {
  const TraitModelBundle& b = trained();
  EXPECT_FALSE(b.partial());
  for (TraitId t : kAllTraits) EXPECT_TRUE(b.has(t));
  EXPECT_EQ(b.metadata.training_config["model"], "svr");
}

TEST(Bundle, RoundTripGivesBitIdenticalPredictions) {
  const TraitModelBundle& b = trained();
  const TraitModelBundle back = deserialize_bundle(serialize_bundle(b));
  EXPECT_TRUE(back.featurizer == b.featurizer);
  Rng rng(99);
  const SynthConfig c = default_synth_config();
  for (int i = 0; i < 100; ++i) {
    const std::string text = random_text(rng, c);
    for (TraitId t : kAllTraits) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(b.predict_text(t, text)),
                std::bit_cast<std::uint64_t>(back.predict_text(t, text)));
    }
  }
}

TEST(Bundle, SerializationIsStable) {
  const std::string a = serialize_bundle(trained());
  EXPECT_EQ(a, serialize_bundle(deserialize_bundle(a)));
}

TEST(Bundle, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "traitforge_bundle_test.tfb";
  save_bundle(trained(), path.string());
  const TraitModelBundle back = load_bundle(path.string());
  EXPECT_EQ(serialize_bundle(back), serialize_bundle(trained()));
  std::filesystem::remove(path);
  EXPECT_THROW(load_bundle(path.string()), DataError);
}

TEST(Bundle, TruncatedFileIsChecksumError) {
  const std::string bytes = serialize_bundle(trained());
  for (std::size_t keep : {bytes.size() - 1, bytes.size() / 2, std::size_t{30}, std::size_t{5}}) {
    try {
      deserialize_bundle(std::string_view(bytes).substr(0, keep));
      FAIL() << "accepted a bundle cut to " << keep << " bytes";
    } catch (const BundleError& e) {
      EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos) << e.what();
    }
  }
}

TEST(Bundle, CorruptedByteDetected) {
  std::string bytes = serialize_bundle(trained());
  bytes[bytes.size() - 3] ^= 0x40;
  EXPECT_THROW(deserialize_bundle(bytes), BundleError);
}

TEST(Bundle, UnknownVersionRejected) {
  std::string bytes = serialize_bundle(trained());
  const std::string magic = std::string(kBundleMagic) + " 1\n";
  ASSERT_EQ(bytes.rfind(magic, 0), 0u);
  bytes.replace(0, magic.size(), std::string(kBundleMagic) + " 99\n");
  try {
    deserialize_bundle(bytes);
    FAIL();
  } catch (const BundleError& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
}

TEST(Bundle, NotABundle) { EXPECT_THROW(deserialize_bundle("hello\nworld\n"), BundleError); }

TEST(Bundle, PartialBundleRefusesMissingTrait) {
  Dataset ds = synthetic(40);
  std::erase_if(ds.examples, [](const LabeledExample& e) { return e.trait != TraitId::kOpenness; });
  const TraitModelBundle b = deserialize_bundle(serialize_bundle(train_bundle(ds, fast_spec())));
  EXPECT_TRUE(b.partial());
  EXPECT_TRUE(b.has(TraitId::kOpenness));
  EXPECT_FALSE(b.has(TraitId::kStability));
  EXPECT_THROW(b.predict_text(TraitId::kStability, "x"), DataError);
  EXPECT_NO_THROW(b.predict_text(TraitId::kOpenness, "x"));
}

TEST(Bundle, DummyBundlePredictsTrainingMean) {
  const Dataset ds = synthetic(40);
  const TraitModelBundle b = deserialize_bundle(serialize_bundle(train_bundle(ds, fast_spec(), true)));
  for (TraitId t : kAllTraits) {
    double mean = 0;
    const auto ex = ds.for_trait(t);
    for (const auto& e : ex) mean += e.label;
    mean /= static_cast<double>(ex.size());
    EXPECT_DOUBLE_EQ(b.predict_text(t, "anything at all"), mean);
  }
  EXPECT_EQ(b.metadata.training_config["model"], "dummy");
}

TEST(Bundle, PredictDatasetCoversEveryExample) {
  const Dataset ds = synthetic(20);
  const ExternalPredictions p = predict_dataset(trained(), ds);
  EXPECT_EQ(p.size(), ds.examples.size());
  for (const auto& e : ds.examples) {
    EXPECT_EQ(*p.find(e.sample_id, e.trait), trained().predict_text(e.trait, e.text));
  }
}

}  // namespace
}  // namespace traitforge
