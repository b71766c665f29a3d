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

// C interface to the adaptfuse core. Every function returns an af_status;
// on failure af_last_error() describes the problem for the calling thread.
// Strings returned through char** are heap-allocated and must be released
// with af_string_free.

#ifndef ADAPTFUSE_ADAPTFUSE_H_
#define ADAPTFUSE_ADAPTFUSE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(AF_BUILDING_LIBRARY)
#define AF_API __attribute__((visibility("default")))
#else
#define AF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum af_status {
  AF_OK = 0,
  AF_ERR_INVALID_ARGUMENT = 1,
  AF_ERR_IO = 2,
  AF_ERR_PARSE = 3,
  AF_ERR_FUSION = 4,
  AF_ERR_REGISTRATION = 5,
  AF_ERR_CONFIG = 6,
  AF_ERR_MEMBERSHIP = 7,
  AF_ERR_FIXTURE = 8,
  AF_ERR_TIMEOUT = 9,
  AF_ERR_TRANSPORT = 10,
  AF_ERR_MALFORMED_RESPONSE = 11,
  AF_ERR_UNKNOWN_MODEL = 12,
  AF_ERR_INTERNAL = 13
} af_status;

typedef enum af_category {
  AF_FULL_LIGHT = 0,
  AF_DIM_LIGHT = 1,
  AF_NO_LIGHT = 2
} af_category;

typedef enum af_modality { AF_RGB = 0, AF_LWIR = 1, AF_FUSED = 2 } af_modality;

typedef struct af_frame af_frame;
typedef struct af_config af_config;
typedef struct af_registry af_registry;

AF_API const char* af_version(void);
AF_API const char* af_last_error(void);
AF_API const char* af_status_name(af_status status);
// Non-zero when the status reflects bad input rather than a runtime failure.
AF_API int af_status_is_validation(af_status status);
AF_API void af_string_free(char* text);

// ---- Illumination -------------------------------------------------------
AF_API af_status af_categorize(double lux, af_category* out);
AF_API const char* af_category_name(af_category category);
// Categories and switch events for a timestamp_ms,lux CSV, as text. The
// hysteresis margin comes from the configuration.
AF_API af_status af_categorize_trace(const af_config* config, const char* lux_csv,
                                     char** report);

// ---- Frames and fusion --------------------------------------------------
AF_API af_status af_frame_create(int width, int height, af_modality modality,
                                 const uint8_t* pixels, size_t length,
                                 int64_t timestamp_ms, af_frame** out);
AF_API af_status af_frame_read_png(const char* path, af_modality modality, af_frame** out);
AF_API af_status af_frame_write_png(const af_frame* frame, const char* path);
AF_API int af_frame_width(const af_frame* frame);
AF_API int af_frame_height(const af_frame* frame);
AF_API const uint8_t* af_frame_pixels(const af_frame* frame, size_t* length);
AF_API void af_frame_free(af_frame* frame);

AF_API af_status af_blend(const af_frame* rgb, const af_frame* lwir, int rgb_percent,
                          af_frame** out);
// `homography` is row-major, mapping target pixels to LWIR pixels.
AF_API af_status af_register(const af_frame* lwir, const double homography[9],
                             int target_width, int target_height, af_frame** out);

// ---- Statistics -----------------------------------------------------------
AF_API af_status af_sem(double std_dev, size_t n, double* out);
// `relative_defined` is 0 when mean_b is 0 and `relative_pct` is untouched.
AF_API af_status af_delta(double mean_a, double mean_b, double* absolute,
                          double* relative_pct, int* relative_defined);
// Composite score of every member of a cohort.
AF_API af_status af_composite_scores(const double* means, const double* stds, size_t n,
                                     double* scores);

// ---- Registry -------------------------------------------------------------
AF_API af_status af_registry_default(af_registry** out);
AF_API af_status af_registry_load(const char* json_path, af_registry** out);
AF_API size_t af_registry_size(const af_registry* registry);
AF_API af_status af_registry_save(const af_registry* registry, const char* json_path);
AF_API void af_registry_free(af_registry* registry);

// ---- Configuration ----------------------------------------------------------
// An INI configuration plus flag overrides. Overrides are "section.key"
// assignments applied on top of the file; relative paths in the file
// resolve against the file's directory, override values are used as given.
AF_API af_status af_config_default(af_config** out);
AF_API af_status af_config_load(const char* path, af_config** out);
AF_API af_status af_config_set(af_config* config, const char* key, const char* value);
// Validates the merged configuration.
AF_API af_status af_config_validate(const af_config* config);
AF_API void af_config_free(af_config* config);

// ---- Operations -------------------------------------------------------------
// Each writes machine-readable output under the given directory and returns
// a human summary. Optional string arguments may be NULL.

// Pairs <stem>.png across rgb_dir and lwir_dir and fuses every level.
// `levels` is "all" or a comma-separated list of RGB percentages.
AF_API af_status af_fuse(const af_config* config, const char* rgb_dir, const char* lwir_dir,
                         const char* labels_dir, const char* levels, const char* out_dir,
                         char** summary);
// Writes train.csv and val.csv.
AF_API af_status af_split(const af_config* config, const char* manifest_csv,
                          const char* out_dir, char** summary);
AF_API af_status af_evaluate(const af_config* config, const char* logs_dir,
                             const char* manifest_csv, const char* out_dir, char** summary);
// Ranks the fine-tuned rows of a fusion_stats-style CSV for one category.
AF_API af_status af_rank(const char* stats_csv, const char* category, const char* out_csv,
                         char** table);
AF_API af_status af_run(const af_config* config, const char* source_dir,
                        const char* recording_id, const char* out_dir, char** summary);
// `violations` receives the number of failed checks.
AF_API af_status af_protocol_check(const char* endpoint, int timeout_ms,
                                   const char* probe_model, size_t* violations,
                                   char** report);
AF_API af_status af_gen_fixtures(const char* out_dir, uint64_t seed, double duration_s,
                                 char** summary);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // ADAPTFUSE_ADAPTFUSE_H_
