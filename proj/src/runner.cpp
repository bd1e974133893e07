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

#include "caster/runner.hpp"

#include "caster/motion_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

namespace caster
{

CameraTrajectory camera_trajectory(const MotionClip &clip, const CameraIntrinsics &intrinsics,
                                   const PnpOptions &options, double drop_budget)
{
    clip.validate();
    const std::size_t n = clip.frames.size();

    CameraTrajectory out;
    out.positions.resize(n);
    std::vector<bool> solved(n, false);
    std::optional<Pose> previous;

    for (std::size_t k = 0; k < n; ++k)
    {
        const MotionFrame &f = clip.frames[k];
        if (!f.detected)
            continue;

        std::optional<PnpResult> result;
        try
        {
            result = solve_pnp(f.pixels, f.world, intrinsics, previous, options);
        }
        catch (const NonConvergence &)
        {
            if (previous)
            {
                try
                {
                    result = solve_pnp(f.pixels, f.world, intrinsics, std::nullopt, options);
                }
                catch (const NonConvergence &)
                {
                }
            }
        }
        if (!result)
            continue;

        previous = result->pose;
        solved[k] = true;
        out.max_residual_rms = std::max(out.max_residual_rms, result->residual_rms);
        for (std::size_t i = 0; i < kNumKeypoints; ++i)
            out.positions[k][i] = to_camera(f.world[i], result->pose);
    }

    for (std::size_t k = 0; k < n; ++k)
        if (!solved[k])
            out.dropped.push_back(k);

    if (out.dropped.size() == n || double(out.dropped.size()) > drop_budget * double(n))
        throw ClipRejected(std::to_string(out.dropped.size()) + " of " + std::to_string(n) +
                           " frames have no pose (budget " + std::to_string(drop_budget) + ")");

    // Fill gaps from the nearest solved frames.
    std::optional<std::size_t> last;
    for (std::size_t k = 0; k < n; ++k)
    {
        if (solved[k])
        {
            if (last && k - *last > 1)
                for (std::size_t g = *last + 1; g < k; ++g)
                {
                    const double w = double(g - *last) / double(k - *last);
                    for (std::size_t i = 0; i < kNumKeypoints; ++i)
                        out.positions[g][i] = (1.0 - w) * out.positions[*last][i] + w * out.positions[k][i];
                }
            else if (!last)
                for (std::size_t g = 0; g < k; ++g)
                    out.positions[g] = out.positions[k];
            last = k;
        }
    }
    for (std::size_t g = *last + 1; g < n; ++g)
        out.positions[g] = out.positions[*last];
    return out;
}

void place_trajectory(Trajectory &trajectory, const Point3 &center)
{
    if (trajectory.empty())
        return;
    Point3 mean = Point3::Zero();
    for (const auto &frame : trajectory)
        for (const auto &p : frame)
            mean += p;
    mean /= double(trajectory.size() * kNumKeypoints);
    const Point3 shift = center - mean;
    for (auto &frame : trajectory)
        for (auto &p : frame)
            p += shift;
}

NarrowbandSeries simulate_series(const SnapshotSequence &snapshots, const RunConfig &config,
                                 const StaticChannel &static_channel)
{
    NarrowbandSeries series;
    series.sample_rate = 1.0 / snapshots.snapshot_interval;
    series.samples.resize(snapshots.size());
    for (std::size_t s = 0; s < snapshots.size(); ++s)
    {
        const ChannelSnapshot snapshot =
            snapshot_channel(snapshots.positions[s], config.scenario, static_channel,
                             double(s) * snapshots.snapshot_interval, config.topology, config.radius_ratio);
        series.samples[s] = collapse(snapshot);
    }
    return series;
}

ClipResult run_clip(const MotionClip &clip, const RunConfig &config, const std::string &clip_id)
{
    config.validate();
    const CameraIntrinsics intrinsics = clip.intrinsics.value_or(config.camera);

    ClipResult result;
    ClipMetadata &meta = result.metadata;
    meta.clip_id = clip_id;
    meta.label = clip.label;
    meta.seed = derive_clip_seed(config.master_seed, clip_id);
    meta.frames = clip.frames.size();

    CameraTrajectory camera = camera_trajectory(clip, intrinsics, config.pnp, config.drop_budget);
    meta.dropped_frames = camera.dropped.size();
    meta.max_pnp_residual = camera.max_residual_rms;

    meta.hand_center = sample_hand_center(config.hand_center, meta.seed);
    place_trajectory(camera.positions, meta.hand_center);

    const Trajectory smoothed = smooth(camera.positions, clip.frame_interval, config.filter);
    SnapshotSequence snapshots = resample(smoothed, clip.frame_interval, 1.0 / config.snapshot_rate);
    snapshots.label = clip.label;
    meta.snapshots = snapshots.size();
    meta.snapshot_interval = snapshots.snapshot_interval;

    const StaticChannel static_channel = StaticChannel::from_scenario(config.scenario);
    meta.rays_per_snapshot = config.topology.size() + static_channel.rays.size();

    const NarrowbandSeries raw = simulate_series(snapshots, config, static_channel);
    result.series = remove_clutter(raw, config.clutter_mode, collapse(std::span<const Ray>(static_channel.rays)));
    result.spectrogram = stft(result.series, config.stft, clip.label);
    return result;
}

std::vector<std::string> write_clip_outputs(const ClipResult &result, const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoFailure("cannot create output directory '" + dir.string() + "': " + ec.message());
    const std::string png = result.metadata.clip_id + ".png";
    const std::string cstr = result.metadata.clip_id + ".cstr";
    export_spectrogram(result.spectrogram, dir / png, ExportFormat::PngGrayscale);
    export_spectrogram(result.spectrogram, dir / cstr, ExportFormat::BinaryMatrixV1);
    return {png, cstr};
}

std::size_t DatasetManifest::succeeded() const
{
    return std::size_t(std::count_if(entries.begin(), entries.end(), [](const auto &e) { return e.ok; }));
}

nlohmann::json DatasetManifest::to_json() const
{
    nlohmann::json list = nlohmann::json::array();
    for (const auto &e : entries)
    {
        nlohmann::json j = {{"clip_id", e.clip_id},
                            {"label", e.label},
                            {"seed", e.seed},
                            {"status", e.ok ? "ok" : "rejected"},
                            {"outputs", e.outputs},
                            {"config_digest", e.config_digest}};
        if (!e.ok)
            j["error"] = e.error;
        list.push_back(std::move(j));
    }
    return {{"format", kManifestFormat},
            {"config_digest", config_digest},
            {"master_seed", master_seed},
            {"entries", list}};
}

DatasetManifest DatasetManifest::from_json(const nlohmann::json &doc)
{
    DatasetManifest m;
    try
    {
        if (doc.value("format", std::string()) != kManifestFormat)
            throw FormatError(std::string("document is not ") + kManifestFormat);
        m.config_digest = doc.at("config_digest").get<std::string>();
        m.master_seed = doc.at("master_seed").get<std::uint64_t>();
        for (const auto &j : doc.at("entries"))
        {
            ManifestEntry e;
            e.clip_id = j.at("clip_id").get<std::string>();
            e.label = j.at("label").get<std::string>();
            e.seed = j.at("seed").get<std::uint64_t>();
            e.ok = j.at("status").get<std::string>() == "ok";
            e.error = j.value("error", std::string());
            e.outputs = j.at("outputs").get<std::vector<std::string>>();
            e.config_digest = j.at("config_digest").get<std::string>();
            m.entries.push_back(std::move(e));
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw FormatError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

void write_manifest(const DatasetManifest &manifest, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoFailure("cannot open '" + path.string() + "' for writing");
    out << manifest.to_json().dump(2) << '\n';
    if (!out)
        throw IoFailure("failed writing '" + path.string() + "'");
}

DatasetManifest load_manifest(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoFailure("cannot open manifest '" + path.string() + "'");
    try
    {
        return DatasetManifest::from_json(nlohmann::json::parse(in));
    }
    catch (const nlohmann::json::exception &e)
    {
        throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

DatasetManifest run_batch(const std::vector<BatchItem> &items, const RunConfig &config)
{
    if (items.empty())
        throw InvalidArgument("batch needs at least one clip");
    config.validate();
    std::set<std::string> ids;
    for (const auto &item : items)
        if (item.id.empty() || !ids.insert(item.id).second)
            throw InvalidArgument("clip ids must be non-empty and unique ('" + item.id + "')");

    DatasetManifest manifest;
    manifest.config_digest = config_digest(config);
    manifest.master_seed = config.master_seed;
    manifest.entries.resize(items.size());

    auto process = [&](std::size_t index)
    {
        const BatchItem &item = items[index];
        ManifestEntry &entry = manifest.entries[index];
        entry.clip_id = item.id;
        entry.seed = derive_clip_seed(config.master_seed, item.id);
        entry.config_digest = manifest.config_digest;
        try
        {
            const MotionClip clip = item.clip ? *item.clip : load_motion_clip(item.path.value());
            entry.label = clip.label;
            const ClipResult result = run_clip(clip, config, item.id);
            entry.outputs = write_clip_outputs(result, config.output_dir);
            entry.ok = true;
        }
        catch (const std::exception &e)
        {
            entry.ok = false;
            entry.error = e.what();
            entry.outputs.clear();
        }
    };

    const std::size_t workers = std::min<std::size_t>(std::size_t(config.workers), items.size());
    if (workers <= 1)
        for (std::size_t i = 0; i < items.size(); ++i)
            process(i);
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(
                [&]
                {
                    for (std::size_t i = next++; i < items.size(); i = next++)
                        process(i);
                });
    }

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    write_manifest(manifest, config.output_dir / "manifest.json");
    if (manifest.succeeded() == 0)
        throw ClipRejected("every clip in the batch failed");
    return manifest;
}

} // namespace caster
