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

#include "caster/motion_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace caster
{

void MotionClip::validate() const
{
    if (frames.size() < 2)
        throw InvalidArgument("motion clip needs at least 2 frames");
    if (!(frame_interval > 0.0) || !std::isfinite(frame_interval))
        throw InvalidArgument("frame interval must be positive");
    for (std::size_t k = 0; k < frames.size(); ++k)
    {
        const auto &f = frames[k];
        if (!std::isfinite(f.timestamp))
            throw InvalidArgument("non-finite timestamp in frame " + std::to_string(k));
        for (std::size_t i = 0; i < kNumKeypoints && f.detected; ++i)
            if (!f.pixels[i].allFinite() || !f.world[i].allFinite())
                throw InvalidArgument("non-finite keypoint in frame " + std::to_string(k));
        if (k > 0)
        {
            const double step = f.timestamp - frames[k - 1].timestamp;
            if (!(step > 0.0))
                throw InvalidArgument("timestamps are not strictly increasing at frame " + std::to_string(k));
            if (std::abs(step - frame_interval) > 1e-6)
                throw InvalidArgument("frame " + std::to_string(k) + " is not spaced by the frame interval");
        }
    }
    if (intrinsics)
        intrinsics->validate();
}

void FilterParams::validate() const
{
    if (!(min_cutoff > 0.0))
        throw InvalidArgument("filter min_cutoff must be > 0");
    if (!(beta >= 0.0))
        throw InvalidArgument("filter beta must be >= 0");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw InvalidArgument("filter gamma must lie in (0, 1]");
}

double one_euro_alpha(double interval, const FilterParams &params, double speed)
{
    const double cutoff = params.min_cutoff + params.beta * std::abs(speed);
    return 1.0 / (1.0 + 1.0 / (2.0 * kPi * interval * cutoff));
}

std::vector<double> one_euro_smooth(std::span<const double> samples, double interval, const FilterParams &params)
{
    params.validate();
    if (!(interval > 0.0))
        throw InvalidArgument("sample interval must be positive");

    std::vector<double> out(samples.size());
    if (samples.empty())
        return out;

    out[0] = samples[0];
    double speed = 0.0;
    for (std::size_t k = 1; k < samples.size(); ++k)
    {
        const double raw_speed = (samples[k] - out[k - 1]) / interval;
        speed = params.gamma * raw_speed + (1.0 - params.gamma) * speed;
        const double alpha = one_euro_alpha(interval, params, speed);
        out[k] = alpha * samples[k] + (1.0 - alpha) * out[k - 1];
    }
    return out;
}

Trajectory smooth(std::span<const Keypoints> trajectory, double frame_interval, const FilterParams &params)
{
    if (trajectory.empty())
        throw InvalidArgument("cannot smooth an empty trajectory");

    Trajectory out(trajectory.size());
    std::vector<double> channel(trajectory.size());
    for (std::size_t i = 0; i < kNumKeypoints; ++i)
        for (int axis = 0; axis < 3; ++axis)
        {
            for (std::size_t k = 0; k < trajectory.size(); ++k)
                channel[k] = trajectory[k][i](axis);
            const auto filtered = one_euro_smooth(channel, frame_interval, params);
            for (std::size_t k = 0; k < trajectory.size(); ++k)
                out[k][i](axis) = filtered[k];
        }
    return out;
}

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> knots, std::vector<double> values)
    : x_(std::move(knots)), y_(std::move(values))
{
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw InvalidArgument("spline needs >= 2 knots with matching values");
    for (std::size_t k = 1; k < n; ++k)
        if (!(x_[k] > x_[k - 1]))
            throw InvalidArgument("spline knots must be strictly increasing");

    m_.assign(n, 0.0);
    if (n == 2)
        return;

    // Tridiagonal system for the interior second derivatives (Thomas algorithm).
    const std::size_t m = n - 2;
    std::vector<double> diag(m), upper(m), rhs(m);
    for (std::size_t k = 1; k + 1 < n; ++k)
    {
        const double h0 = x_[k] - x_[k - 1];
        const double h1 = x_[k + 1] - x_[k];
        diag[k - 1] = 2.0 * (h0 + h1);
        upper[k - 1] = h1;
        rhs[k - 1] = 6.0 * ((y_[k + 1] - y_[k]) / h1 - (y_[k] - y_[k - 1]) / h0);
    }
    for (std::size_t k = 1; k < m; ++k)
    {
        const double lower = x_[k + 1] - x_[k];
        const double w = lower / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    m_[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t k = m - 1; k-- > 0;)
        m_[k + 1] = (rhs[k] - upper[k] * m_[k + 2]) / diag[k];
}

double NaturalCubicSpline::operator()(double x) const
{
    const std::size_t n = x_.size();
    std::size_t seg;
    if (x <= x_.front())
        seg = 0;
    else if (x >= x_.back())
        seg = n - 2;
    else
        seg = std::size_t(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;

    const double h = x_[seg + 1] - x_[seg];
    // Snap onto knots so knot values are reproduced bit-exactly.
    const double snap = 1e-12 * h;
    if (std::abs(x - x_[seg]) <= snap)
        return y_[seg];
    if (std::abs(x - x_[seg + 1]) <= snap)
        return y_[seg + 1];

    const double a = (x_[seg + 1] - x) / h;
    const double b = (x - x_[seg]) / h;
    return a * y_[seg] + b * y_[seg + 1] +
           ((a * a * a - a) * m_[seg] + (b * b * b - b) * m_[seg + 1]) * h * h / 6.0;
}

std::size_t snapshot_count(std::size_t frames, double frame_interval, double snapshot_interval)
{
    if (frames < 1)
        return 0;
    const double span = double(frames - 1) * frame_interval;
    // Tolerance keeps an exact multiple (e.g. 1 s at 2000 Hz) on the grid.
    return std::size_t(std::floor(span / snapshot_interval * (1.0 + 1e-12))) + 1;
}

SnapshotSequence resample(std::span<const Keypoints> smoothed, double frame_interval, double snapshot_interval)
{
    if (smoothed.size() < 2)
        throw InsufficientFrames("resampling needs at least 2 frames, got " + std::to_string(smoothed.size()));
    if (!(frame_interval > 0.0) || !(snapshot_interval > 0.0))
        throw InvalidArgument("frame and snapshot intervals must be positive");
    if (snapshot_interval > frame_interval)
        throw InvalidArgument("snapshot interval must not exceed the frame interval");

    const std::size_t frames = smoothed.size();
    const std::size_t count = snapshot_count(frames, frame_interval, snapshot_interval);
    const double end = double(frames - 1) * frame_interval;

    std::vector<double> knots(frames);
    for (std::size_t k = 0; k < frames; ++k)
        knots[k] = double(k) * frame_interval;
    std::vector<double> grid(count);
    for (std::size_t s = 0; s < count; ++s)
        grid[s] = std::min(double(s) * snapshot_interval, end);

    SnapshotSequence out;
    out.snapshot_interval = snapshot_interval;
    out.positions.resize(count);

    std::vector<double> values(frames);
    for (std::size_t i = 0; i < kNumKeypoints; ++i)
        for (int axis = 0; axis < 3; ++axis)
        {
            for (std::size_t k = 0; k < frames; ++k)
                values[k] = smoothed[k][i](axis);

            if (frames >= 4)
            {
                const NaturalCubicSpline spline(knots, values);
                for (std::size_t s = 0; s < count; ++s)
                    out.positions[s][i](axis) = spline(grid[s]);
            }
            else
            {
                for (std::size_t s = 0; s < count; ++s)
                {
                    const double u = grid[s] / frame_interval;
                    const std::size_t k = std::min(std::size_t(u), frames - 2);
                    const double w = u - double(k);
                    out.positions[s][i](axis) = w == 0.0 ? values[k] : (1.0 - w) * values[k] + w * values[k + 1];
                }
            }
        }
    return out;
}

} // namespace caster
