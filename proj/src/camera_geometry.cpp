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

#include "caster/camera_geometry.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace caster
{

void CameraIntrinsics::validate() const
{
    if (!(focal > 0.0) || !std::isfinite(focal))
        throw InvalidArgument("camera focal length must be positive");
    if (!std::isfinite(cx) || !std::isfinite(cy))
        throw InvalidArgument("principal point must be finite");
}

Eigen::Matrix3d CameraIntrinsics::matrix() const
{
    Eigen::Matrix3d a;
    a << focal, 0.0, cx, 0.0, focal, cy, 0.0, 0.0, 1.0;
    return a;
}

bool Pose::is_valid(double tol) const
{
    if (!rotation.allFinite() || !translation.allFinite())
        return false;
    const Eigen::Matrix3d err = rotation * rotation.transpose() - Eigen::Matrix3d::Identity();
    return err.cwiseAbs().maxCoeff() <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

Point3 to_camera(const WorldPoint &point, const Pose &pose)
{
    return pose.rotation * point + pose.translation;
}

PixelPoint project(const WorldPoint &point, const Pose &pose, const CameraIntrinsics &intrinsics)
{
    const Point3 cam = to_camera(point, pose);
    if (!(cam.z() > kMinDepth))
        throw BehindCamera("point depth " + std::to_string(cam.z()) + " m is not in front of the camera");
    return {intrinsics.focal * cam.x() / cam.z() + intrinsics.cx, intrinsics.focal * cam.y() / cam.z() + intrinsics.cy};
}

Eigen::Matrix3d rotation_from_axis_angle(const Eigen::Vector3d &omega)
{
    const double angle = omega.norm();
    if (angle == 0.0)
        return Eigen::Matrix3d::Identity();
    return Eigen::AngleAxisd(angle, omega / angle).toRotationMatrix();
}

double rotation_angle_between(const Eigen::Matrix3d &a, const Eigen::Matrix3d &b)
{
    // atan2 form stays accurate for tiny angles where acos((tr-1)/2) does not.
    const Eigen::Matrix3d d = a * b.transpose();
    const Eigen::Vector3d s(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
    return std::atan2(0.5 * s.norm(), 0.5 * (d.trace() - 1.0));
}

static Eigen::Matrix3d skew(const Eigen::Vector3d &v)
{
    Eigen::Matrix3d m;
    m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return m;
}

static Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d &m)
{
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    return svd.matrixU() * d * svd.matrixV().transpose();
}

static void check_sizes(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world)
{
    if (pixels.size() != world.size())
        throw InvalidArgument("pixel and world point counts differ");
    if (pixels.size() < 3)
        throw InvalidArgument("PnP needs at least 3 correspondences");
}

void reprojection_residual(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world,
                           const Pose &pose, const CameraIntrinsics &intrinsics, Eigen::VectorXd &residual,
                           Eigen::MatrixXd *jacobian)
{
    const Eigen::Index n = Eigen::Index(pixels.size());
    residual.resize(2 * n);
    if (jacobian)
        jacobian->resize(2 * n, 6);

    const double f = intrinsics.focal;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const Point3 rotated = pose.rotation * world[i];
        const Point3 cam = rotated + pose.translation;
        const double inv_z = 1.0 / cam.z();
        residual(2 * i) = pixels[i].x() - (f * cam.x() * inv_z + intrinsics.cx);
        residual(2 * i + 1) = pixels[i].y() - (f * cam.y() * inv_z + intrinsics.cy);

        if (jacobian)
        {
            Eigen::Matrix<double, 2, 3> d_proj;
            d_proj << f * inv_z, 0.0, -f * cam.x() * inv_z * inv_z, 0.0, f * inv_z, -f * cam.y() * inv_z * inv_z;
            // d(cam)/d(omega) = -[R p]x for the left increment, d(cam)/d(t) = I.
            jacobian->block<2, 3>(2 * i, 0) = d_proj * skew(rotated);
            jacobian->block<2, 3>(2 * i, 3) = -d_proj;
        }
    }
}

double reprojection_cost(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world, const Pose &pose,
                         const CameraIntrinsics &intrinsics)
{
    check_sizes(pixels, world);
    Eigen::VectorXd r;
    reprojection_residual(pixels, world, pose, intrinsics, r, nullptr);
    return r.squaredNorm();
}

std::optional<Pose> linear_pose_estimate(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world,
                                         const CameraIntrinsics &intrinsics)
{
    check_sizes(pixels, world);
    const Eigen::Index n = Eigen::Index(pixels.size());
    if (n < 6)
        return std::nullopt;

    // Normalize world points for conditioning.
    Point3 mean = Point3::Zero();
    for (const auto &p : world)
        mean += p;
    mean /= double(n);
    double spread = 0.0;
    for (const auto &p : world)
        spread += (p - mean).norm();
    spread /= double(n);
    if (!(spread > 0.0))
        return std::nullopt;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 12);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const Point3 x = (world[i] - mean) / spread;
        const double xn = (pixels[i].x() - intrinsics.cx) / intrinsics.focal;
        const double yn = (pixels[i].y() - intrinsics.cy) / intrinsics.focal;
        Eigen::Matrix<double, 1, 4> xh;
        xh << x.transpose(), 1.0;
        a.block<1, 4>(2 * i, 0) = xh;
        a.block<1, 4>(2 * i, 8) = -xn * xh;
        a.block<1, 4>(2 * i + 1, 4) = xh;
        a.block<1, 4>(2 * i + 1, 8) = -yn * xh;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd &sv = svd.singularValues();
    // A planar configuration leaves a second null direction.
    if (sv(10) < 1e-6 * sv(0))
        return std::nullopt;

    const Eigen::VectorXd h = svd.matrixV().col(11);
    Eigen::Matrix<double, 3, 4> p;
    p << h.segment<4>(0).transpose(), h.segment<4>(4).transpose(), h.segment<4>(8).transpose();
    if (p.leftCols<3>().determinant() < 0.0)
        p = -p;

    Eigen::JacobiSVD<Eigen::Matrix3d> msvd(p.leftCols<3>(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double scale = msvd.singularValues().mean();
    if (!(scale > 0.0))
        return std::nullopt;

    Pose pose;
    pose.rotation = nearest_rotation(p.leftCols<3>());
    // p maps normalized coordinates; undo x' = (x - mean) / spread.
    const Point3 t_normalized = p.col(3) / scale;
    pose.translation = t_normalized * spread - pose.rotation * mean;
    if (!pose.translation.allFinite())
        return std::nullopt;
    return pose;
}

static Pose fronto_parallel_guess(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world,
                                  const CameraIntrinsics &intrinsics)
{
    const double n = double(pixels.size());
    PixelPoint pix_mean = PixelPoint::Zero();
    Point3 world_mean = Point3::Zero();
    for (std::size_t i = 0; i < pixels.size(); ++i)
    {
        pix_mean += pixels[i];
        world_mean += world[i];
    }
    pix_mean /= n;
    world_mean /= n;

    double pix_spread = 0.0, world_spread = 0.0;
    for (std::size_t i = 0; i < pixels.size(); ++i)
    {
        pix_spread += (pixels[i] - pix_mean).norm();
        world_spread += (world[i] - world_mean).head<2>().norm();
    }
    const double depth = (pix_spread > 0.0 && world_spread > 0.0) ? intrinsics.focal * world_spread / pix_spread : 1.0;

    Pose pose;
    const Point3 centroid_cam((pix_mean.x() - intrinsics.cx) / intrinsics.focal * depth,
                              (pix_mean.y() - intrinsics.cy) / intrinsics.focal * depth, depth);
    pose.translation = centroid_cam - world_mean;
    return pose;
}

PnpResult solve_pnp(std::span<const PixelPoint> pixels, std::span<const WorldPoint> world,
                    const CameraIntrinsics &intrinsics, const std::optional<Pose> &initial, const PnpOptions &options)
{
    check_sizes(pixels, world);
    intrinsics.validate();

    Pose pose;
    if (initial)
    {
        if (!initial->rotation.allFinite() || !initial->translation.allFinite())
            throw InvalidArgument("initial pose is not finite");
        pose = *initial;
        pose.rotation = nearest_rotation(pose.rotation);
    }
    else if (auto linear = linear_pose_estimate(pixels, world, intrinsics))
        pose = *linear;
    else
        pose = fronto_parallel_guess(pixels, world, intrinsics);

    Eigen::VectorXd residual, trial_residual;
    Eigen::MatrixXd jacobian;
    reprojection_residual(pixels, world, pose, intrinsics, residual, &jacobian);
    double cost = residual.squaredNorm();
    if (!std::isfinite(cost))
        throw NonConvergence("initial pose yields a non-finite reprojection error");

    double damping = options.initial_damping;
    int iteration = 0;
    while (iteration < options.max_iterations && cost > 0.0)
    {
        ++iteration;
        const Eigen::Matrix<double, 6, 6> jtj = jacobian.transpose() * jacobian;
        const Eigen::Matrix<double, 6, 1> jtr = jacobian.transpose() * residual;

        Eigen::Matrix<double, 6, 6> augmented = jtj;
        for (int k = 0; k < 6; ++k)
            augmented(k, k) += damping * std::max(jtj(k, k), 1e-12);
        // J is the Jacobian of (observed - projected), so the Gauss-Newton
        // step for the parameters is -(J^T J)^-1 J^T r.
        const Eigen::Matrix<double, 6, 1> step = -augmented.ldlt().solve(jtr);
        if (!step.allFinite())
            throw NonConvergence("PnP step is not finite");

        Pose trial;
        trial.rotation = rotation_from_axis_angle(step.head<3>()) * pose.rotation;
        trial.translation = pose.translation + step.tail<3>();
        reprojection_residual(pixels, world, trial, intrinsics, trial_residual, nullptr);
        const double trial_cost = trial_residual.squaredNorm();

        if (std::isfinite(trial_cost) && trial_cost < cost)
        {
            const double decrease = (cost - trial_cost) / cost;
            pose = trial;
            cost = trial_cost;
            damping /= 10.0;
            reprojection_residual(pixels, world, pose, intrinsics, residual, &jacobian);
            if (step.norm() < options.min_step_norm || decrease < options.min_relative_decrease)
                break;
        }
        else
        {
            damping *= 10.0;
            if (step.norm() < options.min_step_norm)
                break;
        }
    }

    PnpResult result;
    result.pose = pose;
    result.iterations = iteration;
    result.residual_rms = std::sqrt(cost / double(pixels.size()));

    if (!result.pose.is_valid())
        throw NonConvergence("PnP produced an invalid rotation");
    if (!std::isfinite(result.residual_rms) || result.residual_rms > options.max_residual_rms)
        throw NonConvergence("PnP residual " + std::to_string(result.residual_rms) + " px exceeds " +
                             std::to_string(options.max_residual_rms) + " px after " + std::to_string(iteration) +
                             " iterations");
    for (const auto &p : world)
        if (!(to_camera(p, pose).z() > kMinDepth))
            throw NonConvergence("PnP solution places keypoints behind the camera");
    return result;
}

} // namespace caster
