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

#ifndef ADAPTFUSE_REGISTRY_HPP_
#define ADAPTFUSE_REGISTRY_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adaptfuse/fusion.hpp"
#include "adaptfuse/illumination.hpp"

namespace adaptfuse {

inline constexpr const char* kBaselineCategory = "baseline-any";

struct ModelRecord {
  std::string model_id;
  FusionLevel fusion_level{100};
  // Unset for the generic baselines, which are evaluated under every category.
  std::optional<IlluminationCategory> category;
  std::string weights_uri;
  std::map<std::string, std::string> training_meta;

  bool is_baseline() const { return !category.has_value(); }
};

// "<full|dim|no>_f<percent>", e.g. dim_f90.
std::string FineTunedModelId(IlluminationCategory category, FusionLevel level);

// Shared fine-tuning hyperparameters, stored as metadata only.
std::map<std::string, std::string> DefaultTrainingMeta();

class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<ModelRecord> records);

  // 11 levels x 3 categories plus the two COCO-pretrained baselines.
  static Registry Default();
  static Registry LoadJson(const std::filesystem::path& path);
  static Registry ParseJson(const std::string& text, const std::string& source);
  std::string ToJson() const;
  void SaveJson(const std::filesystem::path& path) const;

  // Throws kConfig on duplicate ids or duplicate (level, category) pairs.
  void Add(ModelRecord record);

  const std::vector<ModelRecord>& records() const { return records_; }
  const ModelRecord* Find(const std::string& model_id) const;
  const ModelRecord& Get(const std::string& model_id) const;
  const ModelRecord* FindFineTuned(IlluminationCategory category,
                                   FusionLevel level) const;
  size_t FineTunedCount() const;
  // True when every (level, category) cell has exactly one fine-tuned model.
  bool IsComplete() const;

 private:
  std::vector<ModelRecord> records_;
};

struct CohortMember {
  std::string model_id;
  int rgb_percent = 100;
  double mean = 0.0;  // mean detection confidence in [0, 1]
  double std = 0.0;   // spread of confidence across colors/trials, >= 0
};

// Members of one ranking cohort plus their extrema.
class CohortStats {
 public:
  explicit CohortStats(std::vector<CohortMember> members);

  const std::vector<CohortMember>& members() const { return members_; }
  const CohortMember* Find(const std::string& model_id) const;
  double mean_min() const { return mean_min_; }
  double mean_max() const { return mean_max_; }
  double std_min() const { return std_min_; }
  double std_max() const { return std_max_; }

 private:
  std::vector<CohortMember> members_;
  double mean_min_ = 0, mean_max_ = 0, std_min_ = 0, std_max_ = 0;
};

// Min-max normalized mean minus min-max normalized spread, in [-1, 1]. A term
// whose range is zero contributes 0. Throws kMembership for unknown ids.
double CompositeScore(const std::string& model_id, const CohortStats& cohort);

struct RankedModel {
  int rank = 0;  // 1-based
  std::string model_id;
  int rgb_percent = 100;
  double mean = 0.0;
  double std = 0.0;
  double composite = 0.0;
};

// Descending composite; ties by higher mean, higher rgb_percent, then
// lexical model id. Throws kInvalidArgument for an empty cohort.
std::vector<RankedModel> Rank(const CohortStats& cohort);

using Rankings = std::map<IlluminationCategory, std::vector<RankedModel>>;

// Rank-1 entry for the category resolved against the registry. Throws
// kConfig when no ranking exists or the model is not registered.
const ModelRecord& SelectActive(IlluminationCategory category,
                                const Registry& registry,
                                const Rankings& rankings);

// Single-entry rankings from a category -> model id map (config defaults).
Rankings RankingsFromActiveMap(
    const std::map<IlluminationCategory, std::string>& active,
    const Registry& registry);

// CSV columns category,rank,model_id,fusion_rgb_percent,mean,std,composite.
void WriteRankingsCsv(const Rankings& rankings,
                      const std::filesystem::path& path);
std::string RankingsCsvString(const Rankings& rankings);
Rankings ReadRankingsCsv(const std::filesystem::path& path);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_REGISTRY_HPP_
