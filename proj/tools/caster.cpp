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

// Command-line front end: simulate one clip, run a batch, emit synthetic
// fixture clips, or inspect produced files.

#include "caster/config.hpp"
#include "caster/fixtures.hpp"
#include "caster/motion_io.hpp"
#include "caster/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace caster;

namespace
{

struct CommonFlags
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string clutter_mode;
};

void add_common(CLI::App *cmd, CommonFlags &flags)
{
    cmd->add_option("--config", flags.config_path, "caster-scenario/1 configuration file");
    cmd->add_option("--seed", flags.seed, "master seed (overrides the configuration)");
    cmd->add_option("--out", flags.out, "output directory (overrides the configuration)");
    cmd->add_option("--clutter-mode", flags.clutter_mode, "none | subtract_mean | subtract_static");
}

RunConfig resolve_config(const CommonFlags &flags)
{
    RunConfig config = flags.config_path.empty() ? default_run_config() : load_run_config(flags.config_path);
    if (flags.seed)
        config.master_seed = *flags.seed;
    if (!flags.out.empty())
        config.output_dir = flags.out;
    if (!flags.clutter_mode.empty())
        config.clutter_mode = clutter_mode_from_string(flags.clutter_mode);
    config.validate();
    return config;
}

int inspect(const std::filesystem::path &path)
{
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw IoFailure("cannot open '" + path.string() + "'");
    char magic[4] = {};
    probe.read(magic, 4);
    if (probe.gcount() == 4 && std::string(magic, 4) == "CSTR")
    {
        const CstrMatrix m = read_cstr(path);
        std::cout << "format: CSTR v" << m.version << "\nrows (frequency): " << m.values.rows()
                  << "\ncolumns (time): " << m.values.cols() << "\nf_min: " << m.f_min << " Hz\nf_max: " << m.f_max
                  << " Hz\nt_step: " << m.t_step << " s\n";
        return 0;
    }
    probe.close();

    std::ifstream in(path);
    const nlohmann::json doc = nlohmann::json::parse(in);
    const std::string format = doc.value("format", std::string());
    std::cout << "format: " << (format.empty() ? "unknown" : format) << "\n";
    if (format == kManifestFormat)
    {
        const DatasetManifest m = DatasetManifest::from_json(doc);
        std::cout << "config digest: " << m.config_digest << "\nmaster seed: " << m.master_seed
                  << "\nentries: " << m.entries.size() << " (" << m.succeeded() << " ok)\n";
        for (const auto &e : m.entries)
            if (!e.ok)
                std::cout << "  rejected " << e.clip_id << ": " << e.error << "\n";
    }
    else if (format == kMotionFormat)
    {
        const MotionClip clip = motion_clip_from_json(doc);
        std::size_t detected = 0;
        for (const auto &f : clip.frames)
            detected += f.detected;
        std::cout << "label: " << clip.label << "\nfps: " << 1.0 / clip.frame_interval << "\nframes: " << detected
                  << " detected of " << clip.frames.size() << "\n";
    }
    else if (format == kScenarioFormat)
        std::cout << "config digest: " << config_digest(run_config_from_json(doc)) << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Hand-gesture wireless channel and micro-Doppler spectrogram simulator"};
    app.require_subcommand(1);

    CommonFlags sim_flags;
    std::string clip_path, clip_id;
    auto *simulate = app.add_subcommand("simulate", "simulate one caster-motion/1 clip");
    add_common(simulate, sim_flags);
    simulate->add_option("clip", clip_path, "motion clip file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--id", clip_id, "clip id used for file names and seeding (default: file stem)");

    CommonFlags batch_flags;
    std::vector<std::string> batch_inputs;
    int workers = 0;
    auto *batch = app.add_subcommand("batch", "simulate a list of clips and write a manifest");
    add_common(batch, batch_flags);
    batch->add_option("clips", batch_inputs, "motion clip files (default: inputs from the configuration)");
    batch->add_option("--workers", workers, "parallel clips");

    std::string synth_kind = "push_pull", synth_out = "fixtures";
    double duration = 2.0, fps = 30.0, speed = 1.0, noise = 0.0;
    int count = 1;
    std::uint64_t synth_seed = 1;
    auto *synth = app.add_subcommand("synth", "write synthetic caster-motion/1 fixture clips");
    synth->add_option("--kind", synth_kind,
                      "push_pull | beckon | rub_fingers | plugging | scaling | static | single_point_radial | all");
    synth->add_option("--duration", duration, "clip length in seconds");
    synth->add_option("--fps", fps, "frame rate");
    synth->add_option("--count", count, "clips per gesture");
    synth->add_option("--seed", synth_seed, "first fixture seed");
    synth->add_option("--speed", speed, "radial speed for single_point_radial (m/s)");
    synth->add_option("--pixel-noise", noise, "pixel noise standard deviation (px)");
    synth->add_option("--out", synth_out, "output directory");

    std::string inspect_path;
    auto *inspect_cmd = app.add_subcommand("inspect", "print the format and summary of a produced file");
    inspect_cmd->add_option("path", inspect_path, "manifest, CSTR, motion clip or configuration")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*simulate)
        {
            const RunConfig config = resolve_config(sim_flags);
            const std::filesystem::path path(clip_path);
            const std::string id = clip_id.empty() ? path.stem().string() : clip_id;
            const ClipResult result = run_clip(load_motion_clip(path), config, id);
            const auto files = write_clip_outputs(result, config.output_dir);
            std::cout << id << ": " << result.metadata.snapshots << " snapshots, " << result.spectrogram.rows() << "x"
                      << result.spectrogram.cols() << " spectrogram, " << result.metadata.dropped_frames
                      << " dropped frames\n";
            for (const auto &f : files)
                std::cout << "  wrote " << (config.output_dir / f).string() << "\n";
        }
        else if (*batch)
        {
            RunConfig config = resolve_config(batch_flags);
            if (workers > 0)
                config.workers = workers;
            std::vector<std::filesystem::path> paths(batch_inputs.begin(), batch_inputs.end());
            if (paths.empty())
                paths = config.inputs;
            std::vector<BatchItem> items;
            for (const auto &p : paths)
                items.push_back({p.stem().string(), p, std::nullopt});
            const DatasetManifest manifest = run_batch(items, config);
            std::cout << manifest.succeeded() << " of " << manifest.entries.size() << " clips ok; manifest "
                      << (config.output_dir / "manifest.json").string() << "\n";
        }
        else if (*synth)
        {
            std::filesystem::create_directories(synth_out);
            std::vector<GestureKind> kinds;
            if (synth_kind == "all")
                kinds = dataset_gestures();
            else
                kinds.push_back(gesture_kind_from_string(synth_kind));
            for (auto kind : kinds)
                for (int i = 0; i < count; ++i)
                {
                    SynthOptions options;
                    options.seed = synth_seed + std::uint64_t(i);
                    options.radial_speed = speed;
                    options.pixel_noise = noise;
                    const auto clip = synth_gesture(kind, duration, fps, options);
                    const auto file = std::filesystem::path(synth_out) /
                                      (std::string(to_string(kind)) + "_" + std::to_string(i) + ".json");
                    save_motion_clip(clip, file);
                    std::cout << "wrote " << file.string() << "\n";
                }
        }
        else if (*inspect_cmd)
            return inspect(inspect_path);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
