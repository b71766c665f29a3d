// Copyright 2026 The adaptfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "adaptfuse/error.hpp"
#include "adaptfuse/registry.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace adaptfuse {
namespace {

using C = IlluminationCategory;

CohortStats Abc() {
  return CohortStats({{"A", 90, 0.92, 0.02}, {"B", 80, 0.90, 0.03}, {"C", 70, 0.85, 0.05}});
}

// Min-max composite written out longhand.
double OracleComposite(const std::vector<CohortMember>& m, size_t i) {
  double mu_lo = m[0].mean, mu_hi = m[0].mean, sd_lo = m[0].std, sd_hi = m[0].std;
  for (const auto& x : m) {
    mu_lo = std::min(mu_lo, x.mean);
    mu_hi = std::max(mu_hi, x.mean);
    sd_lo = std::min(sd_lo, x.std);
    sd_hi = std::max(sd_hi, x.std);
  }
  const double a = mu_hi > mu_lo ? (m[i].mean - mu_lo) / (mu_hi - mu_lo) : 0.0;
  const double b = sd_hi > sd_lo ? (m[i].std - sd_lo) / (sd_hi - sd_lo) : 0.0;
  return a - b;
}

std::vector<CohortMember> RandomCohort(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> mean(0.3, 0.95);
  std::uniform_real_distribution<double> sd(0.0, 0.2);
  std::vector<CohortMember> out;
  for (size_t i = 0; i < n; ++i) {
    out.push_back({"m" + std::to_string(i), static_cast<int>(i % 11) * 10, mean(rng), sd(rng)});
  }
  return out;
}

TEST(RegistryTest, DefaultHoldsThirtyThreeFineTunedModelsAndTwoBaselines) {
  const Registry r = Registry::Default();
  EXPECT_EQ(r.records().size(), 35u);
  EXPECT_EQ(r.FineTunedCount(), 33u);
  EXPECT_TRUE(r.IsComplete());
  size_t baselines = 0;
  for (const auto& m : r.records()) baselines += m.is_baseline();
  EXPECT_EQ(baselines, 2u);
  const ModelRecord& dim90 = r.Get("dim_f90");
  EXPECT_EQ(dim90.fusion_level.rgb_percent(), 90);
  EXPECT_EQ(dim90.category, C::kDimLight);
  EXPECT_EQ(FineTunedModelId(C::kNoLight, FusionLevel(40)), "no_f40");
}

TEST(RegistryTest, TrainingMetadataCarriesTheSharedHyperparameters) {
  const auto meta = Registry::Default().Get("full_f80").training_meta;
  EXPECT_EQ(meta.at("optimizer"), "AdamW");
  EXPECT_EQ(meta.at("learning_rate"), "0.002");
  EXPECT_EQ(meta.at("momentum"), "0.9");
  EXPECT_EQ(meta.at("weight_decay"), "0.0005");
  EXPECT_EQ(meta.at("image_size"), "960");
  EXPECT_EQ(meta.at("batch_size"), "16");
  EXPECT_EQ(meta.at("max_epochs"), "30");
  EXPECT_EQ(meta.at("early_stopping_patience"), "5");
}

TEST(RegistryTest, JsonRoundTrip) {
  testing::TempDir dir;
  const Registry r = Registry::Default();
  r.SaveJson(dir / "registry.json");
  const Registry back = Registry::LoadJson(dir / "registry.json");
  EXPECT_EQ(back.ToJson(), r.ToJson());
  EXPECT_TRUE(back.Get("yolov11n_coco").is_baseline());
}

TEST(RegistryTest, RejectsDuplicates) {
  Registry r;
  r.Add({"x", FusionLevel(50), C::kDimLight, "", {}});
  EXPECT_THROW(r.Add({"x", FusionLevel(60), C::kDimLight, "", {}}), Error);
  EXPECT_THROW(r.Add({"y", FusionLevel(50), C::kDimLight, "", {}}), Error);
  EXPECT_NO_THROW(r.Add({"z", FusionLevel(50), C::kNoLight, "", {}}));
  EXPECT_FALSE(r.IsComplete());
  EXPECT_THROW(Registry::ParseJson("{\"models\": 3}", "inline"), Error);
}

TEST(CompositeScoreTest, ThreeModelExample) {
  const CohortStats cohort = Abc();
  EXPECT_EQ(CompositeScore("A", cohort), 1.0);
  EXPECT_EQ(CompositeScore("C", cohort), -1.0);
  EXPECT_NEAR(CompositeScore("B", cohort), 0.05 / 0.07 - 0.01 / 0.03, 1e-12);
  EXPECT_NEAR(CompositeScore("B", cohort), 0.38095, 1e-5);
}

TEST(CompositeScoreTest, NonMemberIsAMembershipError) {
  try {
    CompositeScore("D", Abc());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMembership);
  }
}

TEST(CompositeScoreTest, TiedCohortScoresZero) {
  const CohortStats tied({{"p", 10, 0.5, 0.1}, {"q", 20, 0.5, 0.1}});
  EXPECT_EQ(CompositeScore("p", tied), 0.0);
  const CohortStats single({{"solo", 10, 0.7, 0.02}});
  EXPECT_EQ(CompositeScore("solo", single), 0.0);
}

TEST(CompositeScoreTest, MatchesOracleAndStaysInRange) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto members = RandomCohort(rng, 2 + t % 10);
    const CohortStats cohort(members);
    for (size_t i = 0; i < members.size(); ++i) {
      const double s = CompositeScore(members[i].model_id, cohort);
      ASSERT_NEAR(s, OracleComposite(members, i), 1e-12);
      ASSERT_GE(s, -1.0);
      ASSERT_LE(s, 1.0);
    }
  }
}

TEST(CompositeScoreTest, ExtremesAreExact) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    auto members = RandomCohort(rng, 5);
    members[0].mean = 0.99;
    members[0].std = 0.0;
    members[1].mean = 0.01;
    members[1].std = 0.5;
    const CohortStats cohort(members);
    ASSERT_EQ(CompositeScore("m0", cohort), 1.0);
    ASSERT_EQ(CompositeScore("m1", cohort), -1.0);
  }
}

TEST(CompositeScoreTest, InvariantUnderIncreasingAffineMaps) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto members = RandomCohort(rng, 11);
    auto mapped = members;
    auto scaled_sd = members;
    // Means are confidences, so the map must keep the cohort inside [0, 1].
    double lo = 1.0, hi = 0.0;
    for (const auto& m : members) {
      lo = std::min(lo, m.mean);
      hi = std::max(hi, m.mean);
    }
    const double a = 0.05 + unit(rng) * (1.0 / (hi - lo) - 0.05);
    const double b = -a * lo + unit(rng) * (1.0 - a * (hi - lo));
    const double k = 0.1 + 2.9 * unit(rng);
    for (size_t i = 0; i < members.size(); ++i) {
      mapped[i].mean = a * members[i].mean + b;
      scaled_sd[i].std = k * members[i].std;
    }
    std::vector<std::string> base, after_mean, after_sd;
    for (const auto& r : Rank(CohortStats(members))) base.push_back(r.model_id);
    for (const auto& r : Rank(CohortStats(mapped))) after_mean.push_back(r.model_id);
    for (const auto& r : Rank(CohortStats(scaled_sd))) after_sd.push_back(r.model_id);
    ASSERT_EQ(base, after_mean);
    ASSERT_EQ(base, after_sd);
  }
}

TEST(RankTest, OrdersByScoreWithDocumentedTieBreaks) {
  const auto ranked = Rank(Abc());
  ASSERT_EQ(ranked.size(), 3u);
  EXPECT_EQ(ranked[0].model_id, "A");
  EXPECT_EQ(ranked[0].rank, 1);
  EXPECT_EQ(ranked[2].model_id, "C");

  const auto tie = Rank(CohortStats({{"lo", 30, 0.8, 0.05}, {"hi", 60, 0.8, 0.05}}));
  EXPECT_EQ(tie[0].model_id, "hi");
  EXPECT_EQ(tie[0].composite, tie[1].composite);
  EXPECT_THROW(Rank(CohortStats({})), Error);
}

TEST(RankTest, IsAPermutationWithNonIncreasingScores) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const auto members = RandomCohort(rng, 1 + t % 11);
    const auto ranked = Rank(CohortStats(members));
    ASSERT_EQ(ranked.size(), members.size());
    std::set<std::string> ids;
    for (size_t i = 0; i < ranked.size(); ++i) {
      ids.insert(ranked[i].model_id);
      EXPECT_EQ(ranked[i].rank, static_cast<int>(i) + 1);
      if (i > 0) {
        EXPECT_LE(ranked[i].composite, ranked[i - 1].composite);
      }
    }
    EXPECT_EQ(ids.size(), members.size());
  }
}

TEST(RankTest, NoLightFortySixtyOutranksFiftyFifty) {
  std::vector<CohortMember> members;
  for (int p = 0; p <= 100; p += 10) {
    members.push_back({"no_f" + std::to_string(p), p, 0.45 + p * 0.001, 0.15});
  }
  members[4] = {"no_f40", 40, 0.7103, 0.0950};
  members[5] = {"no_f50", 50, 0.7227, 0.2545};
  const auto ranked = Rank(CohortStats(members));
  auto pos = [&](const std::string& id) {
    return std::find_if(ranked.begin(), ranked.end(),
                        [&](const RankedModel& r) { return r.model_id == id; }) -
           ranked.begin();
  };
  EXPECT_LT(pos("no_f40"), pos("no_f50"));
}

TEST(SelectActiveTest, ShippedDefaultsResolveToTheTopModels) {
  const Registry r = Registry::Default();
  const Rankings rankings = RankingsFromActiveMap(
      {{C::kFullLight, "full_f80"}, {C::kDimLight, "dim_f90"}, {C::kNoLight, "no_f40"}}, r);
  EXPECT_EQ(SelectActive(C::kFullLight, r, rankings).fusion_level.rgb_percent(), 80);
  EXPECT_EQ(SelectActive(C::kDimLight, r, rankings).fusion_level.rgb_percent(), 90);
  EXPECT_EQ(SelectActive(C::kNoLight, r, rankings).fusion_level.rgb_percent(), 40);
}

TEST(SelectActiveTest, MissingRankingIsAConfigError) {
  const Registry r = Registry::Default();
  const Rankings partial = RankingsFromActiveMap({{C::kDimLight, "dim_f90"}}, r);
  try {
    SelectActive(C::kNoLight, r, partial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(RankingsCsvTest, RoundTrip) {
  testing::TempDir dir;
  Rankings rankings{{C::kDimLight, Rank(Abc())}};
  WriteRankingsCsv(rankings, dir / "rankings.csv");
  const Rankings back = ReadRankingsCsv(dir / "rankings.csv");
  ASSERT_EQ(back.at(C::kDimLight).size(), 3u);
  EXPECT_EQ(back.at(C::kDimLight)[1].model_id, "B");
  EXPECT_EQ(back.at(C::kDimLight)[1].composite, rankings.at(C::kDimLight)[1].composite);
  EXPECT_EQ(RankingsCsvString(back), RankingsCsvString(rankings));
}

}  // namespace
}  // namespace adaptfuse
