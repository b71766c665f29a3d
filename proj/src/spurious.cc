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

#include "adaptfuse/csv.hpp"
#include "adaptfuse/detection.hpp"

namespace adaptfuse {

const char* ExclusionRuleName(ExclusionRule rule) {
  switch (rule) {
    case ExclusionRule::kConfidenceFloor: return "confidence_floor";
    case ExclusionRule::kJump: return "jump";
  }
  return "?";
}

std::optional<std::pair<ExclusionRule, std::string>> SpuriousFilter::Check(
    const DetectionResult& result) {
  const auto best = result.Best();
  if (!best) return std::nullopt;
  if (best->confidence < policy_.confidence_floor) {
    return std::make_pair(ExclusionRule::kConfidenceFloor,
                          "confidence " + FormatDouble(best->confidence) +
                              " < " + FormatDouble(policy_.confidence_floor));
  }
  if (last_retained_) {
    const double jump = CenterDistance(best->bbox, *last_retained_);
    const double iou = IoU(best->bbox, *last_retained_);
    if (jump > policy_.max_jump && iou < policy_.iou_floor) {
      return std::make_pair(ExclusionRule::kJump,
                            "center jump " + FormatDouble(jump) + " with IoU " +
                                FormatDouble(iou));
    }
  }
  last_retained_ = best->bbox;
  return std::nullopt;
}

FilterOutcome FilterSpurious(const std::vector<DetectionResult>& results,
                             const SpuriousPolicy& policy) {
  SpuriousFilter filter(policy);
  FilterOutcome out;
  for (size_t i = 0; i < results.size(); ++i) {
    if (auto hit = filter.Check(results[i])) {
      out.exclusions.push_back({i, results[i].frame_id, hit->first, hit->second});
    } else {
      out.retained.push_back(results[i]);
    }
  }
  return out;
}

}  // namespace adaptfuse
