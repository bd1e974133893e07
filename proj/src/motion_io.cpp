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

#include "caster/motion_io.hpp"

#include <cmath>
#include <fstream>

namespace caster
{

using nlohmann::json;

MotionClip motion_clip_from_json(const json &doc)
{
    MotionClip clip;
    try
    {
        if (!doc.is_object() || doc.value("format", std::string()) != kMotionFormat)
            throw FormatError(std::string("motion document is not ") + kMotionFormat);

        const double fps = doc.at("fps").get<double>();
        if (!(fps > 0.0) || !std::isfinite(fps))
            throw FormatError("fps must be positive");
        clip.frame_interval = 1.0 / fps;
        clip.label = doc.value("label", std::string());

        if (doc.contains("intrinsics") && !doc.at("intrinsics").is_null())
        {
            const json &in = doc.at("intrinsics");
            CameraIntrinsics intr;
            intr.focal = in.at("focal").get<double>();
            const auto pp = in.at("principal_point").get<std::vector<double>>();
            if (pp.size() != 2)
                throw FormatError("principal_point must have 2 entries");
            intr.cx = pp[0];
            intr.cy = pp[1];
            clip.intrinsics = intr;
        }

        const json &frames = doc.at("frames");
        if (!frames.is_array())
            throw FormatError("frames must be an array");
        for (const auto &f : frames)
        {
            MotionFrame frame;
            frame.timestamp = f.at("t").get<double>();
            const json &pix = f.at("pixel");
            const json &world = f.at("world");
            if (pix.size() != kNumKeypoints || world.size() != kNumKeypoints)
                throw FormatError("each frame needs exactly 21 pixel and 21 world keypoints");
            for (std::size_t i = 0; i < kNumKeypoints; ++i)
            {
                if (pix[i].size() != 2 || world[i].size() != 3)
                    throw FormatError("pixel keypoints need 2 and world keypoints 3 coordinates");
                frame.pixels[i] = {pix[i][0].get<double>(), pix[i][1].get<double>()};
                frame.world[i] = {world[i][0].get<double>(), world[i][1].get<double>(), world[i][2].get<double>()};
            }

            if (!clip.frames.empty())
            {
                const double gap = (frame.timestamp - clip.frames.back().timestamp) / clip.frame_interval;
                const double whole = std::round(gap);
                if (whole >= 2.0 && std::abs(gap - whole) * clip.frame_interval <= 1e-6)
                {
                    const double t0 = clip.frames.back().timestamp;
                    for (int k = 1; k < int(whole); ++k)
                    {
                        MotionFrame missing;
                        missing.timestamp = t0 + k * clip.frame_interval;
                        missing.detected = false;
                        missing.pixels.fill(PixelPoint::Zero());
                        missing.world.fill(WorldPoint::Zero());
                        clip.frames.push_back(missing);
                    }
                }
            }
            clip.frames.push_back(frame);
        }
    }
    catch (const json::exception &e)
    {
        throw FormatError(std::string("malformed motion document: ") + e.what());
    }

    try
    {
        clip.validate();
    }
    catch (const InvalidArgument &e)
    {
        throw FormatError(std::string("invalid motion clip: ") + e.what());
    }
    return clip;
}

MotionClip load_motion_clip(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoFailure("cannot open motion clip '" + path.string() + "'");
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::exception &e)
    {
        throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return motion_clip_from_json(doc);
}

json to_json(const MotionClip &clip)
{
    json doc = {{"format", kMotionFormat}, {"fps", 1.0 / clip.frame_interval}, {"label", clip.label}};
    if (clip.intrinsics)
        doc["intrinsics"] = {{"focal", clip.intrinsics->focal},
                             {"principal_point", {clip.intrinsics->cx, clip.intrinsics->cy}}};
    json frames = json::array();
    for (const auto &f : clip.frames)
    {
        if (!f.detected)
            continue;
        json pix = json::array(), world = json::array();
        for (std::size_t i = 0; i < kNumKeypoints; ++i)
        {
            pix.push_back({f.pixels[i].x(), f.pixels[i].y()});
            world.push_back({f.world[i].x(), f.world[i].y(), f.world[i].z()});
        }
        frames.push_back({{"t", f.timestamp}, {"pixel", pix}, {"world", world}});
    }
    doc["frames"] = frames;
    return doc;
}

void save_motion_clip(const MotionClip &clip, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoFailure("cannot open '" + path.string() + "' for writing");
    out << to_json(clip).dump() << '\n';
    if (!out)
        throw IoFailure("failed writing '" + path.string() + "'");
}

} // namespace caster
