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

#include "caster/camera_geometry.hpp"
#include "caster/channel_generator.hpp"
#include "caster/hand_model.hpp"
#include "caster/motion_pipeline.hpp"
#include "caster/signal_processing.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace caster
{

inline constexpr const char *kScenarioFormat = "caster-scenario/1";

// Where the hand's time-averaged keypoint centroid is placed in camera space.
struct FixedPlacement
{
    Point3 center = Point3(0.0, 0.0, 0.6);
};

// Uniform draw of one coordinate of `base` from [min, max], once per clip.
struct AxisRangePlacement
{
    Point3 base = Point3::Zero();
    int axis = 2;
    double min = 0.4;
    double max = 0.8;
};

using HandCenterPlacement = std::variant<FixedPlacement, AxisRangePlacement>;

Point3 sample_hand_center(const HandCenterPlacement &placement, std::uint64_t seed);

// Scatterers are either listed explicitly or generated from a seed.
struct EnvironmentSpec
{
    std::uint64_t seed = 1;
    int count = 20;
    std::optional<std::vector<Scatterer>> explicit_scatterers;

    std::vector<Scatterer> realize(const Point3 &rx) const;
};

struct RunConfig
{
    Scenario scenario; // scatterers filled from `environment`
    EnvironmentSpec environment;
    SkeletonTopology topology = default_topology();
    double radius_ratio = kDefaultRadiusRatio;
    HandCenterPlacement hand_center = AxisRangePlacement{};
    CameraIntrinsics camera;
    FilterParams filter;
    PnpOptions pnp;
    StftConfig stft;
    double snapshot_rate = 2000.0; // Hz
    ClutterMode clutter_mode = ClutterMode::SubtractStatic;
    double drop_budget = 0.1; // tolerated fraction of frames without a pose
    std::uint64_t master_seed = 0;

    // Run-environment settings; they do not affect outputs and are left out
    // of the digest.
    int workers = 1;
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path output_dir = "caster_out";

    void validate() const;
};

// Defaults with the scatterers realized.
RunConfig default_run_config();

// Parses a "caster-scenario/1" document. Missing keys keep their defaults.
// Throws FormatError / InvalidArgument.
RunConfig run_config_from_json(const nlohmann::json &doc);
RunConfig load_run_config(const std::filesystem::path &path);

// Normalized document; run-environment keys are included only when asked.
nlohmann::json to_json(const RunConfig &config, bool include_run_environment = true);

// 16 hex digits of FNV-1a over the normalized (key-sorted) output-relevant config.
std::string config_digest(const RunConfig &config);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

// Per-clip seed: splitmix64(master_seed ^ fnv1a64(clip_id)).
std::uint64_t derive_clip_seed(std::uint64_t master_seed, std::string_view clip_id);

} // namespace caster
