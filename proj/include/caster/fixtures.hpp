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

#include "caster/motion_pipeline.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace caster
{

// Synthetic gesture clips standing in for extracted video. The hand faces the
// camera; the camera looks along +z.
enum class GestureKind
{
    PushPull,          // rigid hand oscillating along the camera axis
    Beckon,            // fingers curl and uncurl, wrist fixed
    RubFingers,        // thumb and index tips slide against each other
    Plugging,          // quick forward slice, slow return
    Scaling,           // thumb, index and middle spread and close
    Static,            // no motion
    SinglePointRadial, // shrunken rigid hand moving at constant speed along -z
};

std::string_view to_string(GestureKind kind);
GestureKind gesture_kind_from_string(std::string_view name);

// The five gesture categories used for dataset batches.
const std::vector<GestureKind> &dataset_gestures();

struct SynthOptions
{
    std::uint64_t seed = 0;      // perturbs amplitude, period and orientation; 0 keeps nominal values
    double period = 0.0;         // s, 0 = gesture default
    double amplitude = 0.0;      // m (or rad for Beckon), 0 = gesture default
    double radial_speed = 1.0;   // m/s, SinglePointRadial only; positive approaches the camera
    Point3 center = Point3(0.0, 0.0, 0.6); // mean hand position in camera coordinates
    double pixel_noise = 0.0;    // px, i.i.d. Gaussian on the pixel keypoints
    CameraIntrinsics intrinsics;
};

// Nominal hand-world keypoints (m), origin near the palm center.
const Keypoints &hand_template();

// Rigid scale applied to the template by SinglePointRadial (about 2 cm across).
inline constexpr double kPointHandScale = 0.1;

// Camera-space keypoints of `kind` at time t of a clip spanning `span` s
// (first to last frame), before projection.
Keypoints gesture_camera_keypoints(GestureKind kind, double t, double span, const SynthOptions &options);

MotionClip synth_gesture(GestureKind kind, double duration, double fps, const SynthOptions &options = {});

} // namespace caster
