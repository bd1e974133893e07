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

#include "caster/types.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>

namespace caster
{

using PixelPoint = Eigen::Vector2d; // (u, v) in pixels
using WorldPoint = Eigen::Vector3d; // hand-world coordinates in meters

// Pinhole intrinsics without lens distortion.
struct CameraIntrinsics
{
    double focal = 1000.0; // pixels
    double cx = 640.0;
    double cy = 360.0;

    void validate() const;
    Eigen::Matrix3d matrix() const;
};

// Rigid transform from hand-world to camera coordinates, p_cam = R p + t.
struct Pose
{
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Point3 translation = Point3::Zero();

    bool is_valid(double tol = 1e-9) const;
};

// Camera-space depth below which a point counts as behind the camera.
inline constexpr double kMinDepth = 1e-6;

Point3 to_camera(const WorldPoint &point, const Pose &pose);

// Throws BehindCamera when the camera-space depth is <= kMinDepth.
PixelPoint project(const WorldPoint &point, const Pose &pose, const CameraIntrinsics &intrinsics);

Eigen::Matrix3d rotation_from_axis_angle(const Eigen::Vector3d &omega);
double rotation_angle_between(const Eigen::Matrix3d &a, const Eigen::Matrix3d &b);

struct PnpOptions
{
    int max_iterations = 100;
    double min_step_norm = 1e-10;
    double min_relative_decrease = 1e-12;
    double initial_damping = 1e-3;
    // A solution whose RMS reprojection error stays above this is reported
    // as NonConvergence.
    double max_residual_rms = 10.0;
};

struct PnpResult
{
    Pose pose;
    double residual_rms = 0.0; // pixels
    int iterations = 0;
};

// Sum of squared reprojection errors of `world` under `pose` against `pixels`.
double reprojection_cost(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world,
                         const Pose &pose, const CameraIntrinsics &intrinsics);

// Residual r = observed - projected, stacked (u0, v0, u1, v1, ...), together
// with its Jacobian w.r.t. a left rotation increment (axis-angle) followed by a
// translation increment: p_cam = exp([w]x) R p + t + dt.
void reprojection_residual(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world,
                           const Pose &pose, const CameraIntrinsics &intrinsics,
                           Eigen::VectorXd &residual, Eigen::MatrixXd *jacobian);

// Closed-form pose from >= 6 non-coplanar correspondences. Returns nullopt when
// the configuration is too close to planar for a reliable estimate.
std::optional<Pose> linear_pose_estimate(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world,
                                         const CameraIntrinsics &intrinsics);

// Levenberg-Marquardt refinement of the reprojection error over SO(3) x R^3.
// Without `initial`, the iteration is seeded by linear_pose_estimate (or a
// fronto-parallel guess when that fails). Throws NonConvergence.
PnpResult solve_pnp(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world,
                    const CameraIntrinsics &intrinsics, const std::optional<Pose> &initial = std::nullopt,
                    const PnpOptions &options = {});

} // namespace caster
