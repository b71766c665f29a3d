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

#include "adaptfuse/registry.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"

namespace adaptfuse {

namespace {

const char* ShortCategory(IlluminationCategory c) {
  switch (c) {
    case IlluminationCategory::kFullLight: return "full";
    case IlluminationCategory::kDimLight: return "dim";
    case IlluminationCategory::kNoLight: return "no";
  }
  return "?";
}

}  // namespace

std::string FineTunedModelId(IlluminationCategory category, FusionLevel level) {
  return std::string(ShortCategory(category)) + "_f" +
         std::to_string(level.rgb_percent());
}

std::map<std::string, std::string> DefaultTrainingMeta() {
  return {
      {"optimizer", "AdamW"},
      {"learning_rate", "0.002"},
      {"momentum", "0.9"},
      {"weight_decay", "0.0005"},
      {"image_size", "960"},
      {"batch_size", "16"},
      {"max_epochs", "30"},
      {"early_stopping_patience", "5"},
  };
}

Registry::Registry(std::vector<ModelRecord> records) {
  for (auto& r : records) Add(std::move(r));
}

Registry Registry::Default() {
  Registry registry;
  for (auto category : AllCategories()) {
    for (auto level : AllFusionLevels()) {
      ModelRecord r;
      r.model_id = FineTunedModelId(category, level);
      r.fusion_level = level;
      r.category = category;
      r.weights_uri = "models/" + r.model_id + ".pt";
      r.training_meta = DefaultTrainingMeta();
      registry.Add(std::move(r));
    }
  }
  for (const char* id : {"yolov11n_coco", "yolov5n_coco"}) {
    ModelRecord r;
    r.model_id = id;
    r.fusion_level = FusionLevel(100);
    r.weights_uri = std::string("models/") + id + ".pt";
    registry.Add(std::move(r));
  }
  return registry;
}

void Registry::Add(ModelRecord record) {
  if (record.model_id.empty()) {
    Fail(ErrorCode::kConfig, "model record has an empty model_id");
  }
  if (Find(record.model_id)) {
    Fail(ErrorCode::kConfig, "duplicate model_id '" + record.model_id + "'");
  }
  if (!record.is_baseline() &&
      FindFineTuned(*record.category, record.fusion_level)) {
    Fail(ErrorCode::kConfig,
         "duplicate fine-tuned model for level " + record.fusion_level.Label() +
             " in " + CategoryName(*record.category));
  }
  records_.push_back(std::move(record));
}

const ModelRecord* Registry::Find(const std::string& model_id) const {
  for (const auto& r : records_) {
    if (r.model_id == model_id) return &r;
  }
  return nullptr;
}

const ModelRecord& Registry::Get(const std::string& model_id) const {
  const ModelRecord* r = Find(model_id);
  if (!r) Fail(ErrorCode::kConfig, "model '" + model_id + "' is not registered");
  return *r;
}

const ModelRecord* Registry::FindFineTuned(IlluminationCategory category,
                                           FusionLevel level) const {
  for (const auto& r : records_) {
    if (r.category == category && r.fusion_level == level) return &r;
  }
  return nullptr;
}

size_t Registry::FineTunedCount() const {
  return static_cast<size_t>(std::count_if(
      records_.begin(), records_.end(),
      [](const ModelRecord& r) { return !r.is_baseline(); }));
}

bool Registry::IsComplete() const {
  if (FineTunedCount() != 33) return false;
  for (auto c : AllCategories()) {
    for (auto l : AllFusionLevels()) {
      if (!FindFineTuned(c, l)) return false;
    }
  }
  return true;
}

Registry Registry::ParseJson(const std::string& text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, source + ": " + e.what());
  }
  if (!doc.is_array()) Fail(ErrorCode::kParse, source + ": expected a JSON array");
  Registry registry;
  size_t index = 0;
  for (const auto& item : doc) {
    const std::string where = source + "[" + std::to_string(index++) + "]";
    try {
      ModelRecord r;
      r.model_id = item.at("model_id").get<std::string>();
      r.fusion_level = FusionLevel(item.at("fusion_rgb_percent").get<int>());
      const auto category = item.at("category").get<std::string>();
      if (category != kBaselineCategory) r.category = ParseCategory(category);
      r.weights_uri = item.value("weights_uri", "");
      if (item.contains("training_meta")) {
        for (const auto& [k, v] : item.at("training_meta").items()) {
          r.training_meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
      }
      registry.Add(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kParse, where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
  }
  return registry;
}

Registry Registry::LoadJson(const std::filesystem::path& path) {
  return ParseJson(ReadTextFile(path), path.string());
}

std::string Registry::ToJson() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : records_) {
    nlohmann::json item;
    item["model_id"] = r.model_id;
    item["fusion_rgb_percent"] = r.fusion_level.rgb_percent();
    item["category"] = r.is_baseline() ? kBaselineCategory : CategoryName(*r.category);
    item["weights_uri"] = r.weights_uri;
    item["training_meta"] = r.training_meta;
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

void Registry::SaveJson(const std::filesystem::path& path) const {
  WriteTextFile(path, ToJson());
}

CohortStats::CohortStats(std::vector<CohortMember> members)
    : members_(std::move(members)) {
  for (size_t i = 0; i < members_.size(); ++i) {
    const auto& m = members_[i];
    if (!(m.mean >= 0.0 && m.mean <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "cohort member '" + m.model_id + "' has mean outside [0, 1]");
    }
    if (!(m.std >= 0.0) || !std::isfinite(m.std)) {
      Fail(ErrorCode::kInvalidArgument,
           "cohort member '" + m.model_id + "' has negative std");
    }
    for (size_t j = 0; j < i; ++j) {
      if (members_[j].model_id == m.model_id) {
        Fail(ErrorCode::kInvalidArgument,
             "duplicate cohort member '" + m.model_id + "'");
      }
    }
    if (i == 0) {
      mean_min_ = mean_max_ = m.mean;
      std_min_ = std_max_ = m.std;
    } else {
      mean_min_ = std::min(mean_min_, m.mean);
      mean_max_ = std::max(mean_max_, m.mean);
      std_min_ = std::min(std_min_, m.std);
      std_max_ = std::max(std_max_, m.std);
    }
  }
}

const CohortMember* CohortStats::Find(const std::string& model_id) const {
  for (const auto& m : members_) {
    if (m.model_id == model_id) return &m;
  }
  return nullptr;
}

namespace {

double Normalized(double value, double lo, double hi) {
  const double range = hi - lo;
  if (range == 0.0) return 0.0;
  return (value - lo) / range;
}

}  // namespace

double CompositeScore(const std::string& model_id, const CohortStats& cohort) {
  const CohortMember* m = cohort.Find(model_id);
  if (!m) {
    Fail(ErrorCode::kMembership, "model '" + model_id + "' is not in the cohort");
  }
  return Normalized(m->mean, cohort.mean_min(), cohort.mean_max()) -
         Normalized(m->std, cohort.std_min(), cohort.std_max());
}

std::vector<RankedModel> Rank(const CohortStats& cohort) {
  if (cohort.members().empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot rank an empty cohort");
  }
  std::vector<RankedModel> ranked;
  ranked.reserve(cohort.members().size());
  for (const auto& m : cohort.members()) {
    ranked.push_back({0, m.model_id, m.rgb_percent, m.mean, m.std,
                      CompositeScore(m.model_id, cohort)});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedModel& a, const RankedModel& b) {
              if (a.composite != b.composite) return a.composite > b.composite;
              if (a.mean != b.mean) return a.mean > b.mean;
              if (a.rgb_percent != b.rgb_percent) return a.rgb_percent > b.rgb_percent;
              return a.model_id < b.model_id;
            });
  for (size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = static_cast<int>(i + 1);
  return ranked;
}

const ModelRecord& SelectActive(IlluminationCategory category,
                                const Registry& registry,
                                const Rankings& rankings) {
  auto it = rankings.find(category);
  if (it == rankings.end() || it->second.empty()) {
    Fail(ErrorCode::kConfig,
         std::string("no ranking available for ") + CategoryName(category));
  }
  const ModelRecord* record = registry.Find(it->second.front().model_id);
  if (!record) {
    Fail(ErrorCode::kConfig, "ranked model '" + it->second.front().model_id +
                                 "' is not in the registry");
  }
  return *record;
}

Rankings RankingsFromActiveMap(
    const std::map<IlluminationCategory, std::string>& active,
    const Registry& registry) {
  Rankings rankings;
  for (const auto& [category, model_id] : active) {
    const ModelRecord& r = registry.Get(model_id);
    if (r.category != category) {
      Fail(ErrorCode::kConfig, "active model '" + model_id + "' for " +
                                   CategoryName(category) +
                                   " belongs to a different category");
    }
    rankings[category] = {{1, r.model_id, r.fusion_level.rgb_percent(), 0.0, 0.0, 0.0}};
  }
  return rankings;
}

std::string RankingsCsvString(const Rankings& rankings) {
  CsvTable table({"category", "rank", "model_id", "fusion_rgb_percent", "mean",
                  "std", "composite"});
  for (const auto& [category, list] : rankings) {
    for (const auto& r : list) {
      table.AddRow({CategoryName(category), std::to_string(r.rank), r.model_id,
                    std::to_string(r.rgb_percent), FormatDouble(r.mean),
                    FormatDouble(r.std), FormatDouble(r.composite)});
    }
  }
  return table.ToString();
}

void WriteRankingsCsv(const Rankings& rankings,
                      const std::filesystem::path& path) {
  WriteTextFile(path, RankingsCsvString(rankings));
}

Rankings ReadRankingsCsv(const std::filesystem::path& path) {
  const auto table =
      CsvTable::Read(path, {"category", "rank", "model_id", "fusion_rgb_percent",
                            "mean", "std", "composite"});
  Rankings rankings;
  for (size_t i = 0; i < table.size(); ++i) {
    RankedModel r;
    r.rank = static_cast<int>(table.Integer(i, "rank"));
    r.model_id = table.At(i, "model_id");
    r.rgb_percent = static_cast<int>(table.Integer(i, "fusion_rgb_percent"));
    r.mean = table.Number(i, "mean");
    r.std = table.Number(i, "std");
    r.composite = table.Number(i, "composite");
    rankings[ParseCategory(table.At(i, "category"))].push_back(r);
  }
  for (auto& [category, list] : rankings) {
    std::sort(list.begin(), list.end(),
              [](const RankedModel& a, const RankedModel& b) { return a.rank < b.rank; });
  }
  return rankings;
}

}  // namespace adaptfuse
