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

#include "adaptfuse/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"
#include "adaptfuse/illumination.hpp"
#include "adaptfuse/image_io.hpp"

namespace fs = std::filesystem;

namespace adaptfuse {

std::vector<Annotation> ParseAnnotations(std::string_view text,
                                         const std::string& source) {
  std::vector<Annotation> out;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    std::istringstream fields(trimmed);
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) tokens.push_back(token);
    if (tokens.size() != 5) {
      Fail(ErrorCode::kParse, where + ": malformed annotation, expected "
                                      "'class_id cx cy w h'");
    }
    Annotation a;
    a.class_id = static_cast<int>(ParseInteger(tokens[0], where));
    if (a.class_id < 0) Fail(ErrorCode::kParse, where + ": malformed annotation, negative class_id");
    a.bbox = {ParseDouble(tokens[1], where), ParseDouble(tokens[2], where),
              ParseDouble(tokens[3], where), ParseDouble(tokens[4], where)};
    ValidateBBox(a.bbox, ErrorCode::kParse, where + ": malformed annotation");
    out.push_back(a);
  }
  return out;
}

std::vector<Annotation> ReadAnnotations(const fs::path& path) {
  return ParseAnnotations(ReadTextFile(path), path.string());
}

std::string FormatAnnotations(const std::vector<Annotation>& annotations) {
  std::string out;
  for (const auto& a : annotations) {
    out += std::to_string(a.class_id) + " " + FormatDouble(a.bbox.cx) + " " +
           FormatDouble(a.bbox.cy) + " " + FormatDouble(a.bbox.w) + " " +
           FormatDouble(a.bbox.h) + "\n";
  }
  return out;
}

void WriteAnnotations(const std::vector<Annotation>& annotations,
                      const fs::path& path) {
  WriteTextFile(path, FormatAnnotations(annotations));
}

namespace {

// Decoding is the only reliable validity check for an image file.
void CheckDecodes(const fs::path& path) {
  (void)ReadPng(path, Modality::kRgb);
}

std::vector<std::string> SortedPngStems(const fs::path& dir) {
  std::vector<std::string> stems;
  if (!fs::is_directory(dir)) return stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      stems.push_back(entry.path().stem().string());
    }
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

}  // namespace

IngestReport Ingest(const fs::path& root) {
  if (!fs::is_directory(root)) {
    Fail(ErrorCode::kIo, "dataset root " + root.string() + " is not a directory");
  }
  std::vector<fs::path> recordings;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) recordings.push_back(entry.path());
  }
  std::sort(recordings.begin(), recordings.end());

  IngestReport report;
  for (const auto& rec_dir : recordings) {
    const std::string recording_id = rec_dir.filename().string();
    const fs::path meta_path = rec_dir / "meta.csv";
    if (!fs::exists(meta_path)) {
      report.errors.push_back(meta_path.string() + ": missing meta.csv");
      continue;
    }
    CsvTable meta;
    try {
      meta = CsvTable::Read(meta_path, {"frame", "timestamp_ms", "lux", "color_label"});
    } catch (const Error& e) {
      report.errors.push_back(e.what());
      continue;
    }
    std::set<std::string> listed;
    for (size_t i = 0; i < meta.size(); ++i) {
      PairedSample s;
      s.recording_id = recording_id;
      s.frame = meta.At(i, "frame");
      s.sample_id = recording_id + "/" + s.frame;
      listed.insert(s.frame);
      s.rgb_path = rec_dir / "rgb" / (s.frame + ".png");
      s.lwir_path = rec_dir / "lwir" / (s.frame + ".png");
      s.label_path = rec_dir / "labels" / (s.frame + ".txt");
      try {
        s.timestamp_ms = meta.Integer(i, "timestamp_ms");
        s.lux = meta.Number(i, "lux");
        if (s.lux < 0.0) {
          Fail(ErrorCode::kParse, meta_path.string() + ":" +
                                      std::to_string(meta.LineOf(i)) + ": negative lux");
        }
        s.color_label = meta.At(i, "color_label");
        if (!fs::exists(s.rgb_path)) Fail(ErrorCode::kIo, s.rgb_path.string() + ": missing RGB image");
        if (!fs::exists(s.lwir_path)) Fail(ErrorCode::kIo, s.lwir_path.string() + ": missing LWIR counterpart");
        if (!fs::exists(s.label_path)) Fail(ErrorCode::kIo, s.label_path.string() + ": missing annotation file");
        CheckDecodes(s.rgb_path);
        CheckDecodes(s.lwir_path);
        s.annotations = ReadAnnotations(s.label_path);
      } catch (const Error& e) {
        report.errors.push_back(e.what());
        continue;
      }
      report.manifest.push_back(std::move(s));
    }
    for (const auto& stem : SortedPngStems(rec_dir / "rgb")) {
      if (!listed.count(stem)) {
        report.errors.push_back((rec_dir / "rgb" / (stem + ".png")).string() +
                                ": image not listed in meta.csv");
      }
    }
  }
  return report;
}

IngestReport IngestPairs(const fs::path& rgb_dir, const fs::path& lwir_dir,
                         const fs::path& labels_dir) {
  if (!fs::is_directory(rgb_dir)) Fail(ErrorCode::kIo, rgb_dir.string() + " is not a directory");
  if (!fs::is_directory(lwir_dir)) Fail(ErrorCode::kIo, lwir_dir.string() + " is not a directory");
  IngestReport report;
  const auto rgb_stems = SortedPngStems(rgb_dir);
  const auto lwir_stems = SortedPngStems(lwir_dir);
  const std::set<std::string> lwir_set(lwir_stems.begin(), lwir_stems.end());
  const std::set<std::string> rgb_set(rgb_stems.begin(), rgb_stems.end());
  for (const auto& stem : rgb_stems) {
    PairedSample s;
    s.sample_id = stem;
    s.frame = stem;
    s.rgb_path = rgb_dir / (stem + ".png");
    s.lwir_path = lwir_dir / (stem + ".png");
    try {
      if (!lwir_set.count(stem)) {
        Fail(ErrorCode::kIo, s.lwir_path.string() + ": missing LWIR counterpart");
      }
      CheckDecodes(s.rgb_path);
      CheckDecodes(s.lwir_path);
      if (!labels_dir.empty()) {
        s.label_path = labels_dir / (stem + ".txt");
        if (!fs::exists(s.label_path)) {
          Fail(ErrorCode::kIo, s.label_path.string() + ": missing annotation file");
        }
        s.annotations = ReadAnnotations(s.label_path);
      }
    } catch (const Error& e) {
      report.errors.push_back(e.what());
      continue;
    }
    report.manifest.push_back(std::move(s));
  }
  for (const auto& stem : lwir_stems) {
    if (!rgb_set.count(stem)) {
      report.errors.push_back((lwir_dir / (stem + ".png")).string() +
                              ": missing RGB counterpart");
    }
  }
  return report;
}

namespace {

std::string RelativeTo(const fs::path& p, const fs::path& base) {
  if (p.empty()) return "";
  const fs::path abs = fs::absolute(p).lexically_normal();
  const fs::path rel = abs.lexically_relative(fs::absolute(base).lexically_normal());
  return (rel.empty() ? abs : rel).generic_string();
}

fs::path Resolve(const std::string& p, const fs::path& base) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

void WriteManifest(const Manifest& manifest, const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  CsvTable table({"sample_id", "recording_id", "frame", "rgb_path", "lwir_path",
                  "label_path", "timestamp_ms", "lux", "color_label"});
  for (const auto& s : manifest) {
    table.AddRow({s.sample_id, s.recording_id, s.frame, RelativeTo(s.rgb_path, base),
                  RelativeTo(s.lwir_path, base), RelativeTo(s.label_path, base),
                  std::to_string(s.timestamp_ms), FormatDouble(s.lux), s.color_label});
  }
  table.Write(path);
}

Manifest ReadManifest(const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const auto table = CsvTable::Read(
      path, {"sample_id", "recording_id", "frame", "rgb_path", "lwir_path",
             "label_path", "timestamp_ms", "lux", "color_label"});
  Manifest manifest;
  std::set<std::string> ids;
  for (size_t i = 0; i < table.size(); ++i) {
    PairedSample s;
    s.sample_id = table.At(i, "sample_id");
    if (!ids.insert(s.sample_id).second) {
      Fail(ErrorCode::kParse, path.string() + ":" + std::to_string(table.LineOf(i)) +
                                  ": duplicate sample_id '" + s.sample_id + "'");
    }
    s.recording_id = table.At(i, "recording_id");
    s.frame = table.At(i, "frame");
    s.rgb_path = Resolve(table.At(i, "rgb_path"), base);
    s.lwir_path = Resolve(table.At(i, "lwir_path"), base);
    s.label_path = Resolve(table.At(i, "label_path"), base);
    s.timestamp_ms = table.Integer(i, "timestamp_ms");
    s.lux = table.Number(i, "lux");
    s.color_label = table.At(i, "color_label");
    if (!s.label_path.empty() && fs::exists(s.label_path)) {
      s.annotations = ReadAnnotations(s.label_path);
    }
    manifest.push_back(std::move(s));
  }
  return manifest;
}

SplitResult Split(const Manifest& manifest, const SplitOptions& options) {
  if (manifest.empty()) Fail(ErrorCode::kInvalidArgument, "cannot split an empty manifest");
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "train fraction must lie in (0, 1)");
  }

  auto unit_key = [&](const PairedSample& s) {
    return options.group_by_recording ? s.recording_id : s.sample_id;
  };
  auto stratum_key = [&](const PairedSample& s) -> std::string {
    switch (options.stratify) {
      case Stratify::kNone: return "";
      case Stratify::kColor: return s.color_label;
      case Stratify::kCategory: return CategoryName(Categorize(s.lux));
    }
    return "";
  };

  // stratum -> distinct units. A grouped recording is assigned to the stratum
  // of its first sample.
  std::map<std::string, std::vector<std::string>> strata;
  std::set<std::string> seen_units;
  for (const auto& s : manifest) {
    const std::string unit = unit_key(s);
    if (seen_units.insert(unit).second) strata[stratum_key(s)].push_back(unit);
  }

  std::set<std::string> train_units;
  for (auto& [stratum, units] : strata) {
    std::vector<std::pair<uint64_t, std::string>> keyed;
    keyed.reserve(units.size());
    for (const auto& u : units) keyed.emplace_back(StableHash64(u, options.seed), u);
    std::sort(keyed.begin(), keyed.end());
    const size_t n_train = static_cast<size_t>(
        std::llround(options.train_fraction * static_cast<double>(keyed.size())));
    for (size_t i = 0; i < n_train; ++i) train_units.insert(keyed[i].second);
  }

  SplitResult result;
  for (const auto& s : manifest) {
    (train_units.count(unit_key(s)) ? result.train : result.val).push_back(s);
  }
  return result;
}

BatchFuseReport BatchFuse(const Manifest& manifest, const BatchFuseOptions& options,
                          const fs::path& out_dir) {
  if (options.levels.empty()) Fail(ErrorCode::kInvalidArgument, "no fusion levels requested");
  fs::create_directories(out_dir);

  struct SampleOutput {
    std::vector<FusedSample> fused;
    std::string error;
  };
  std::vector<SampleOutput> outputs(manifest.size());

  auto process = [&](size_t index) {
    const PairedSample& s = manifest[index];
    SampleOutput& out = outputs[index];
    try {
      const Frame rgb = ReadPng(s.rgb_path, Modality::kRgb, s.timestamp_ms);
      const Frame lwir = ReadPng(s.lwir_path, Modality::kLwir, s.timestamp_ms);
      const Frame registered =
          Register(lwir, options.homography, rgb.width(), rgb.height());
      const fs::path rec_dir = out_dir / (s.recording_id.empty() ? "." : s.recording_id);
      for (const auto& level : options.levels) {
        const std::string name = s.frame + "_f" + std::to_string(level.rgb_percent());
        FusedSample f;
        f.sample_id = s.sample_id;
        f.rgb_percent = level.rgb_percent();
        f.image_path = (rec_dir / "fused" / (name + ".png")).lexically_normal();
        f.label_path = (rec_dir / "labels" / (name + ".txt")).lexically_normal();
        f.timestamp_ms = s.timestamp_ms;
        f.lux = s.lux;
        f.color_label = s.color_label;
        f.annotations = s.annotations;
        WritePng(Blend(rgb, registered, level), f.image_path);
        WriteAnnotations(f.annotations, f.label_path);
        out.fused.push_back(std::move(f));
      }
    } catch (const std::exception& e) {
      out.fused.clear();
      out.error = s.sample_id + ": " + e.what();
    }
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1 || manifest.size() < 2) {
    for (size_t i = 0; i < manifest.size(); ++i) process(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (size_t i = next++; i < manifest.size(); i = next++) process(i);
      });
    }
    for (auto& t : workers) t.join();
  }

  BatchFuseReport report;
  for (auto& out : outputs) {
    if (!out.error.empty()) {
      report.errors.push_back(out.error);
      continue;
    }
    for (auto& f : out.fused) {
      ++report.images_written;
      ++report.label_files_written;
      report.fused.push_back(std::move(f));
    }
  }

  CsvTable table({"sample_id", "fusion_rgb_percent", "image_path", "label_path",
                  "timestamp_ms", "lux", "color_label"});
  for (const auto& f : report.fused) {
    table.AddRow({f.sample_id, std::to_string(f.rgb_percent),
                  RelativeTo(f.image_path, out_dir), RelativeTo(f.label_path, out_dir),
                  std::to_string(f.timestamp_ms), FormatDouble(f.lux), f.color_label});
  }
  table.Write(out_dir / "fused_manifest.csv");
  return report;
}

std::vector<FusedSample> IngestFused(const fs::path& out_dir) {
  const auto table = CsvTable::Read(out_dir / "fused_manifest.csv",
                                    {"sample_id", "fusion_rgb_percent", "image_path",
                                     "label_path", "timestamp_ms", "lux", "color_label"});
  std::vector<FusedSample> out;
  for (size_t i = 0; i < table.size(); ++i) {
    FusedSample f;
    f.sample_id = table.At(i, "sample_id");
    f.rgb_percent = FusionLevel(static_cast<int>(table.Integer(i, "fusion_rgb_percent")))
                        .rgb_percent();
    f.image_path = Resolve(table.At(i, "image_path"), out_dir);
    f.label_path = Resolve(table.At(i, "label_path"), out_dir);
    f.timestamp_ms = table.Integer(i, "timestamp_ms");
    f.lux = table.Number(i, "lux");
    f.color_label = table.At(i, "color_label");
    if (!fs::exists(f.image_path)) {
      Fail(ErrorCode::kIo, f.image_path.string() + ": fused image missing");
    }
    f.annotations = ReadAnnotations(f.label_path);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace adaptfuse
