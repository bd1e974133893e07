// caster: camera-driven hand gesture channel simulator
// Copyright (C) 2026 The caster authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "caster/config.hpp"
#include "caster/motion_pipeline.hpp"
#include "caster/signal_processing.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace caster
{

inline constexpr const char *kManifestFormat = "caster-manifest/1";

struct CameraTrajectory
{
    Trajectory positions;              // frames x 21, camera coordinates
    std::vector<std::size_t> dropped;  // frames without a usable pose
    double max_residual_rms = 0.0;     // px, over solved frames
};

// Solves PnP frame by frame, warm-starting from the previous pose, and maps
// the hand-world keypoints into camera space. Frames that are undetected or
// fail to converge are filled by linear interpolation between neighbouring
// solved frames. Throws ClipRejected when the dropped fraction exceeds
// `drop_budget`.
CameraTrajectory camera_trajectory(const MotionClip &clip, const CameraIntrinsics &intrinsics,
                                   const PnpOptions &options, double drop_budget);

// Translates the trajectory so its time-averaged keypoint centroid sits at `center`.
void place_trajectory(Trajectory &trajectory, const Point3 &center);

// Narrowband sample per snapshot, before clutter removal.
NarrowbandSeries simulate_series(const SnapshotSequence &snapshots, const RunConfig &config,
                                 const StaticChannel &static_channel);

struct ClipMetadata
{
    std::string clip_id;
    std::string label;
    std::uint64_t seed = 0;
    std::size_t frames = 0;
    std::size_t dropped_frames = 0;
    std::size_t snapshots = 0;
    double snapshot_interval = 0.0;
    std::size_t rays_per_snapshot = 0;
    Point3 hand_center = Point3::Zero();
    double max_pnp_residual = 0.0;
};

struct ClipResult
{
    Spectrogram spectrogram;
    NarrowbandSeries series; // after clutter removal
    ClipMetadata metadata;
};

// PnP -> camera space -> placement -> smooth -> resample -> channel ->
// collapse -> clutter removal -> STFT. Deterministic in (clip, config, clip_id).
ClipResult run_clip(const MotionClip &clip, const RunConfig &config, const std::string &clip_id);

// Writes <id>.png and <id>.cstr; returns the file names.
std::vector<std::string> write_clip_outputs(const ClipResult &result, const std::filesystem::path &dir);

struct ManifestEntry
{
    std::string clip_id;
    std::string label;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::vector<std::string> outputs;
    std::string config_digest;
};

struct DatasetManifest
{
    std::string config_digest;
    std::uint64_t master_seed = 0;
    std::vector<ManifestEntry> entries;

    std::size_t succeeded() const;
    nlohmann::json to_json() const;
    static DatasetManifest from_json(const nlohmann::json &doc);
};

void write_manifest(const DatasetManifest &manifest, const std::filesystem::path &path);
DatasetManifest load_manifest(const std::filesystem::path &path);

// A clip given either by file or in memory.
struct BatchItem
{
    std::string id;
    std::optional<std::filesystem::path> path;
    std::optional<MotionClip> clip;
};

// Runs every item with per-clip isolation, writes outputs and manifest.json
// into config.output_dir and returns the manifest. Only a batch in which every
// clip fails throws (ClipRejected).
DatasetManifest run_batch(const std::vector<BatchItem> &items, const RunConfig &config);

} // namespace caster
