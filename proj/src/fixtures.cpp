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

#include "caster/fixtures.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <random>

namespace caster
{

std::string_view to_string(GestureKind kind)
{
    switch (kind)
    {
    case GestureKind::PushPull:
        return "push_pull";
    case GestureKind::Beckon:
        return "beckon";
    case GestureKind::RubFingers:
        return "rub_fingers";
    case GestureKind::Plugging:
        return "plugging";
    case GestureKind::Scaling:
        return "scaling";
    case GestureKind::Static:
        return "static";
    case GestureKind::SinglePointRadial:
        return "single_point_radial";
    }
    return "static";
}

GestureKind gesture_kind_from_string(std::string_view name)
{
    for (auto kind : {GestureKind::PushPull, GestureKind::Beckon, GestureKind::RubFingers, GestureKind::Plugging,
                      GestureKind::Scaling, GestureKind::Static, GestureKind::SinglePointRadial})
        if (to_string(kind) == name)
            return kind;
    throw InvalidArgument("unknown gesture '" + std::string(name) + "'");
}

const std::vector<GestureKind> &dataset_gestures()
{
    static const std::vector<GestureKind> kinds = {GestureKind::PushPull, GestureKind::Beckon,
                                                   GestureKind::RubFingers, GestureKind::Plugging,
                                                   GestureKind::Scaling};
    return kinds;
}

const Keypoints &hand_template()
{
    // x to the pinky side, y from fingertips to wrist, z away from the camera.
    static const Keypoints points = {
        Point3(0.000, 0.070, 0.010),                                                                     // wrist
        Point3(-0.025, 0.055, -0.005), Point3(-0.045, 0.035, -0.012), Point3(-0.060, 0.015, -0.018),  // thumb
        Point3(-0.070, -0.005, -0.024),                                                                 //
        Point3(-0.025, -0.015, 0.000), Point3(-0.028, -0.045, -0.006), Point3(-0.030, -0.065, -0.012), // index
        Point3(-0.031, -0.085, -0.018),                                                                 //
        Point3(-0.005, -0.020, 0.002), Point3(-0.005, -0.053, -0.004), Point3(-0.005, -0.076, -0.010), // middle
        Point3(-0.005, -0.097, -0.016),                                                                 //
        Point3(0.015, -0.015, 0.003), Point3(0.017, -0.045, -0.003), Point3(0.018, -0.067, -0.009),    // ring
        Point3(0.019, -0.087, -0.015),                                                                  //
        Point3(0.033, -0.005, 0.005), Point3(0.037, -0.027, 0.000), Point3(0.040, -0.043, -0.005),     // pinky
        Point3(0.042, -0.058, -0.010),
    };
    return points;
}

namespace
{

struct GestureParams
{
    double period;
    double amplitude;
    Eigen::Matrix3d orientation;
};

GestureParams resolve_params(GestureKind kind, const SynthOptions &o)
{
    double period = 1.0, amplitude = 0.0;
    switch (kind)
    {
    case GestureKind::PushPull:
        period = 1.0, amplitude = 0.08;
        break;
    case GestureKind::Beckon:
        period = 0.8, amplitude = 1.0;
        break;
    case GestureKind::RubFingers:
        period = 0.4, amplitude = 0.01;
        break;
    case GestureKind::Plugging:
        period = 1.2, amplitude = 0.12;
        break;
    case GestureKind::Scaling:
        period = 1.0, amplitude = 0.35;
        break;
    case GestureKind::Static:
    case GestureKind::SinglePointRadial:
        break;
    }
    if (o.period > 0.0)
        period = o.period;
    if (o.amplitude > 0.0)
        amplitude = o.amplitude;

    // Slight tilt so the palm is not exactly fronto-parallel.
    Eigen::Matrix3d orientation = Eigen::AngleAxisd(0.15, Eigen::Vector3d::UnitX()).toRotationMatrix();
    if (o.seed != 0)
    {
        std::mt19937_64 rng(o.seed);
        auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; };
        period *= uniform(0.85, 1.15);
        amplitude *= uniform(0.85, 1.15);
        const double ax = uniform(-0.17, 0.17), ay = uniform(-0.17, 0.17), az = uniform(-0.17, 0.17);
        orientation = Eigen::AngleAxisd(az, Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(ay, Eigen::Vector3d::UnitY()) *
                      Eigen::AngleAxisd(ax, Eigen::Vector3d::UnitX()) * orientation;
    }
    return {period, amplitude, orientation};
}

// 0 -> 1 -> 0 once per period, starting at rest.
double raised_cosine(double t, double period)
{
    return 0.5 * (1.0 - std::cos(2.0 * kPi * t / period));
}

// Hand-world keypoints of `kind` at time t.
Keypoints deformed_hand(GestureKind kind, double t, const GestureParams &p)
{
    Keypoints w = hand_template();
    switch (kind)
    {
    case GestureKind::Beckon:
    {
        const Eigen::Matrix3d curl =
            Eigen::AngleAxisd(p.amplitude * raised_cosine(t, p.period), Eigen::Vector3d::UnitX()).toRotationMatrix();
        for (int mcp : {5, 9, 13, 17})
            for (int joint = mcp + 1; joint <= mcp + 3; ++joint)
                w[joint] = w[mcp] + curl * (w[joint] - w[mcp]);
        break;
    }
    case GestureKind::RubFingers:
    {
        const double shift = p.amplitude * std::sin(2.0 * kPi * t / p.period);
        for (int joint : {3, 4})
            w[joint].x() += shift;
        for (int joint : {7, 8})
            w[joint].x() -= shift;
        break;
    }
    case GestureKind::Scaling:
    {
        const double spread = 1.0 + p.amplitude * raised_cosine(t, p.period);
        for (int joint : {2, 3, 4, 6, 7, 8, 10, 11, 12})
            w[joint] *= spread;
        break;
    }
    case GestureKind::SinglePointRadial:
        for (auto &q : w)
            q *= kPointHandScale;
        break;
    default:
        break;
    }
    return w;
}

Point3 hand_center(GestureKind kind, double t, double duration, const GestureParams &p, const SynthOptions &o)
{
    Point3 c = o.center;
    switch (kind)
    {
    case GestureKind::PushPull:
        c.z() -= p.amplitude * std::cos(2.0 * kPi * t / p.period);
        break;
    case GestureKind::Plugging:
    {
        const double phase = t / p.period - std::floor(t / p.period);
        const double stroke = phase < 0.3 ? 0.5 * (1.0 - std::cos(kPi * phase / 0.3))
                                          : 0.5 * (1.0 + std::cos(kPi * (phase - 0.3) / 0.7));
        c += p.amplitude * stroke * Point3(0.0, 0.3, -1.0).normalized();
        break;
    }
    case GestureKind::SinglePointRadial:
        c.z() -= o.radial_speed * (t - 0.5 * duration);
        break;
    default:
        break;
    }
    return c;
}

std::size_t frame_count(double duration, double fps)
{
    return std::max<std::size_t>(2, std::size_t(std::llround(duration * fps)));
}

} // namespace

Keypoints gesture_camera_keypoints(GestureKind kind, double t, double span, const SynthOptions &options)
{
    const GestureParams p = resolve_params(kind, options);
    const Keypoints w = deformed_hand(kind, t, p);
    const Point3 c = hand_center(kind, t, span, p, options);
    Keypoints cam;
    for (std::size_t i = 0; i < kNumKeypoints; ++i)
        cam[i] = p.orientation * w[i] + c;
    return cam;
}

MotionClip synth_gesture(GestureKind kind, double duration, double fps, const SynthOptions &options)
{
    if (!(duration > 0.0) || !(fps > 0.0))
        throw InvalidArgument("synthetic clips need positive duration and fps");

    const GestureParams p = resolve_params(kind, options);
    const std::size_t frames = frame_count(duration, fps);
    const double span = double(frames - 1) / fps;

    MotionClip clip;
    clip.frame_interval = 1.0 / fps;
    clip.label = std::string(to_string(kind));
    clip.intrinsics = options.intrinsics;
    clip.frames.resize(frames);

    std::mt19937_64 noise_rng(options.seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> noise(0.0, 1.0);

    for (std::size_t k = 0; k < frames; ++k)
    {
        const double t = double(k) / fps;
        MotionFrame &f = clip.frames[k];
        f.timestamp = t;
        f.world = deformed_hand(kind, t, p);
        const Pose pose{p.orientation, hand_center(kind, t, span, p, options)};
        for (std::size_t i = 0; i < kNumKeypoints; ++i)
        {
            f.pixels[i] = project(f.world[i], pose, options.intrinsics);
            if (options.pixel_noise > 0.0)
            {
                const double du = noise(noise_rng), dv = noise(noise_rng);
                f.pixels[i] += options.pixel_noise * PixelPoint(du, dv);
            }
        }
    }
    return clip;
}

} // namespace caster
