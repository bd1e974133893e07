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
#include "caster/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace caster
{

// One detected video frame.
struct MotionFrame
{
    double timestamp = 0.0; // s
    std::array<PixelPoint, kNumKeypoints> pixels;
    std::array<WorldPoint, kNumKeypoints> world;
    bool detected = true; // false for frames the extractor skipped
};

// Keypoint observations of one gesture clip, as produced by the extractor.
struct MotionClip
{
    std::vector<MotionFrame> frames;
    double frame_interval = 1.0 / 30.0; // s
    std::string label;
    std::optional<CameraIntrinsics> intrinsics;

    // Throws InvalidArgument: >= 2 frames, finite values on detected frames,
    // strictly increasing timestamps spaced by frame_interval (within 1e-6 s).
    void validate() const;
};

struct FilterParams
{
    double min_cutoff = 1.0; // Hz
    double beta = 0.5;       // speed coefficient
    double gamma = 0.3;      // velocity smoothing factor, in (0, 1]

    void validate() const;
};

using Trajectory = std::vector<Keypoints>; // frames x 21 keypoints

// Keypoint positions in camera coordinates on the snapshot grid.
struct SnapshotSequence
{
    double snapshot_interval = 1.0 / 2000.0; // s
    Trajectory positions;
    std::string label;

    std::size_t size() const { return positions.size(); }
};

// One-euro smoothing of a single scalar channel sampled every `interval` s.
// The velocity estimate uses the previous *smoothed* sample.
std::vector<double> one_euro_smooth(std::span<const double> samples, double interval, const FilterParams &params);

// Smoothing factor for a given filtered speed.
double one_euro_alpha(double interval, const FilterParams &params, double speed);

// Applies one_euro_smooth independently to all 63 coordinate channels.
Trajectory smooth(std::span<const Keypoints> trajectory, double frame_interval, const FilterParams &params);

// Interpolating cubic spline with zero second derivative at both ends.
class NaturalCubicSpline
{
public:
    // Knots must be strictly increasing; needs at least 2 knots (2 knots
    // degenerate to a straight line).
    NaturalCubicSpline(std::vector<double> knots, std::vector<double> values);

    double operator()(double x) const;

    const std::vector<double> &second_derivatives() const { return m_; }

private:
    std::vector<double> x_, y_, m_;
};

// Number of grid points t = 0, dt_s, 2 dt_s, ... not exceeding (frames - 1) dt_v.
std::size_t snapshot_count(std::size_t frames, double frame_interval, double snapshot_interval);

// Resamples a frame-rate trajectory onto the snapshot grid. Uses a natural
// cubic spline per channel with >= 4 frames and linear interpolation below
// that. Throws InsufficientFrames for fewer than 2 frames.
SnapshotSequence resample(std::span<const Keypoints> smoothed, double frame_interval, double snapshot_interval);

} // namespace caster
