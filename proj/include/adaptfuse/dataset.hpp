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

#ifndef ADAPTFUSE_DATASET_HPP_
#define ADAPTFUSE_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "adaptfuse/detection.hpp"
#include "adaptfuse/fusion.hpp"

namespace adaptfuse {

// One labeled box; label files hold one "class_id cx cy w h" line per box.
struct Annotation {
  int class_id = kMugClassId;
  BBox bbox;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

// Throws kParse naming the file and line for any malformed entry.
std::vector<Annotation> ParseAnnotations(std::string_view text,
                                         const std::string& source);
std::vector<Annotation> ReadAnnotations(const std::filesystem::path& path);
std::string FormatAnnotations(const std::vector<Annotation>& annotations);
void WriteAnnotations(const std::vector<Annotation>& annotations,
                      const std::filesystem::path& path);

struct PairedSample {
  std::string sample_id;  // "<recording_id>/<frame>"
  std::string recording_id;
  std::string frame;
  std::filesystem::path rgb_path;
  std::filesystem::path lwir_path;
  std::filesystem::path label_path;  // empty when the source has no labels
  int64_t timestamp_ms = 0;
  double lux = 0.0;
  std::string color_label;
  std::vector<Annotation> annotations;
};

using Manifest = std::vector<PairedSample>;

struct IngestReport {
  Manifest manifest;
  std::vector<std::string> errors;  // one entry per rejected sample or file
};

// Walks root/<recording_id>/{rgb,lwir,labels}/ plus meta.csv
// (frame,timestamp_ms,lux,color_label). Invalid samples are reported in
// `errors` and left out of the manifest.
IngestReport Ingest(const std::filesystem::path& root);

// Pairs <stem>.png files across two flat directories. Labels are optional.
IngestReport IngestPairs(const std::filesystem::path& rgb_dir,
                         const std::filesystem::path& lwir_dir,
                         const std::filesystem::path& labels_dir = {});

// Paths are written relative to the manifest's directory and resolved the
// same way on read. Annotations are reloaded from label_path.
void WriteManifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest ReadManifest(const std::filesystem::path& path);

enum class Stratify { kNone, kColor, kCategory };

struct SplitOptions {
  double train_fraction = 0.75;
  uint64_t seed = 0;
  // Keep all frames of a recording on one side of the split.
  bool group_by_recording = false;
  Stratify stratify = Stratify::kNone;
};

struct SplitResult {
  Manifest train;
  Manifest val;
};

// Orders split units (samples, or recordings when grouped) by a stable hash of
// (seed, unit key) and assigns the first round(fraction * N) of every stratum
// to train. Input order is preserved within each side.
SplitResult Split(const Manifest& manifest, const SplitOptions& options);

struct BatchFuseOptions {
  std::vector<FusionLevel> levels = AllFusionLevels();
  Homography homography = Homography::Identity();
  int jobs = 1;
};

struct FusedSample {
  std::string sample_id;
  int rgb_percent = 0;
  std::filesystem::path image_path;
  std::filesystem::path label_path;
  int64_t timestamp_ms = 0;
  double lux = 0.0;
  std::string color_label;
  std::vector<Annotation> annotations;
};

struct BatchFuseReport {
  std::vector<FusedSample> fused;
  size_t images_written = 0;
  size_t label_files_written = 0;
  std::vector<std::string> errors;
};

// Writes <out>/<recording_id>/fused/<frame>_f<percent>.png and the matching
// labels/<frame>_f<percent>.txt for every sample and level, plus
// <out>/fused_manifest.csv. Failing samples are logged and skipped.
BatchFuseReport BatchFuse(const Manifest& manifest,
                          const BatchFuseOptions& options,
                          const std::filesystem::path& out_dir);

// Reads <out>/fused_manifest.csv back, reloading every annotation file.
std::vector<FusedSample> IngestFused(const std::filesystem::path& out_dir);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_DATASET_HPP_
