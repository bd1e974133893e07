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

#include "caster/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace caster
{

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t derive_clip_seed(std::uint64_t master_seed, std::string_view clip_id)
{
    return splitmix64(master_seed ^ fnv1a64(clip_id));
}

Point3 sample_hand_center(const HandCenterPlacement &placement, std::uint64_t seed)
{
    if (const auto *fixed = std::get_if<FixedPlacement>(&placement))
        return fixed->center;
    const auto &range = std::get<AxisRangePlacement>(placement);
    std::mt19937_64 rng(seed);
    // Drawn from raw bits so the value does not depend on the library's
    // distribution implementation.
    const double u = double(rng() >> 11) * 0x1.0p-53;
    Point3 c = range.base;
    c(range.axis) = range.min + u * (range.max - range.min);
    return c;
}

std::vector<Scatterer> EnvironmentSpec::realize(const Point3 &rx) const
{
    if (explicit_scatterers)
        return *explicit_scatterers;
    return generate_environment(seed, count, rx);
}

void RunConfig::validate() const
{
    scenario.validate();
    camera.validate();
    filter.validate();
    stft.validate();
    if (!(radius_ratio > 0.0))
        throw InvalidArgument("radius_ratio must be positive");
    if (!(snapshot_rate > 0.0) || !std::isfinite(snapshot_rate))
        throw InvalidArgument("snapshot_rate must be positive");
    if (!(drop_budget >= 0.0 && drop_budget <= 1.0))
        throw InvalidArgument("drop_budget must lie in [0, 1]");
    if (environment.count < 0)
        throw InvalidArgument("environment count must be non-negative");
    if (const auto *range = std::get_if<AxisRangePlacement>(&hand_center))
        if (range->axis < 0 || range->axis > 2 || !(range->max >= range->min))
            throw InvalidArgument("hand center range needs axis in x/y/z and min <= max");
    if (workers < 1)
        throw InvalidArgument("workers must be >= 1");
    if (output_dir.empty())
        throw InvalidArgument("output_dir must not be empty");
}

RunConfig default_run_config()
{
    RunConfig c;
    c.scenario.scatterers = c.environment.realize(c.scenario.rx);
    return c;
}

namespace
{

Point3 point_from(const json &j)
{
    if (!j.is_array() || j.size() != 3)
        throw FormatError("expected a 3-element array, got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json point_to(const Point3 &p)
{
    return json::array({p.x(), p.y(), p.z()});
}

GainPattern pattern_from(const json &j)
{
    GainPattern p;
    if (j.contains("boresight"))
        p.boresight = point_from(j.at("boresight"));
    p.angles_deg = j.at("angles_deg").get<std::vector<double>>();
    p.gains = j.at("gains").get<std::vector<double>>();
    return p;
}

json pattern_to(const GainPattern &p)
{
    return {{"boresight", point_to(p.boresight)}, {"angles_deg", p.angles_deg}, {"gains", p.gains}};
}

int axis_from(const json &j)
{
    const auto name = j.get<std::string>();
    if (name == "x")
        return 0;
    if (name == "y")
        return 1;
    if (name == "z")
        return 2;
    throw FormatError("hand center axis must be x, y or z");
}

template <typename T>
void read_if(const json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

} // namespace

RunConfig run_config_from_json(const json &doc)
{
    RunConfig c;
    try
    {
        if (!doc.is_object())
            throw FormatError("configuration must be a JSON object");
        if (doc.contains("format") && doc.at("format") != kScenarioFormat)
            throw FormatError("unsupported configuration format " + doc.at("format").dump());

        if (doc.contains("scenario"))
        {
            const json &s = doc.at("scenario");
            if (s.contains("tx"))
                c.scenario.tx = point_from(s.at("tx"));
            if (s.contains("rx"))
                c.scenario.rx = point_from(s.at("rx"));
            read_if(s, "carrier_frequency_hz", c.scenario.carrier_frequency);
            if (s.contains("antennas"))
            {
                const json &a = s.at("antennas");
                const auto model = a.value("model", std::string("isotropic"));
                if (model == "isotropic")
                    c.scenario.antennas = IsotropicAntennas{};
                else if (model == "table")
                    c.scenario.antennas = TableAntennas{pattern_from(a.at("tx")), pattern_from(a.at("rx"))};
                else
                    throw FormatError("unknown antenna model '" + model + "'");
            }
            if (s.contains("environment"))
            {
                const json &e = s.at("environment");
                read_if(e, "seed", c.environment.seed);
                read_if(e, "count", c.environment.count);
                if (e.contains("scatterers"))
                {
                    std::vector<Scatterer> list;
                    for (const auto &item : e.at("scatterers"))
                        list.push_back({point_from(item.at("position")), item.at("rcs").get<double>()});
                    c.environment.explicit_scatterers = std::move(list);
                }
            }
        }

        if (doc.contains("hand"))
        {
            const json &h = doc.at("hand");
            if (h.contains("topology"))
                c.topology = SkeletonTopology(h.at("topology").get<std::vector<std::pair<int, int>>>());
            read_if(h, "radius_ratio", c.radius_ratio);
            if (h.contains("center"))
            {
                const json &p = h.at("center");
                if (p.contains("fixed"))
                    c.hand_center = FixedPlacement{point_from(p.at("fixed"))};
                else
                {
                    AxisRangePlacement r;
                    if (p.contains("base"))
                        r.base = point_from(p.at("base"));
                    if (p.contains("axis"))
                        r.axis = axis_from(p.at("axis"));
                    read_if(p, "min", r.min);
                    read_if(p, "max", r.max);
                    c.hand_center = r;
                }
            }
        }

        if (doc.contains("camera"))
        {
            const json &cam = doc.at("camera");
            read_if(cam, "focal", c.camera.focal);
            if (cam.contains("principal_point"))
            {
                const auto pp = cam.at("principal_point").get<std::vector<double>>();
                if (pp.size() != 2)
                    throw FormatError("principal_point must have 2 entries");
                c.camera.cx = pp[0];
                c.camera.cy = pp[1];
            }
        }

        if (doc.contains("filter"))
        {
            const json &f = doc.at("filter");
            read_if(f, "min_cutoff_hz", c.filter.min_cutoff);
            read_if(f, "beta", c.filter.beta);
            read_if(f, "gamma", c.filter.gamma);
        }

        if (doc.contains("pnp"))
        {
            const json &p = doc.at("pnp");
            read_if(p, "max_iterations", c.pnp.max_iterations);
            read_if(p, "max_residual_px", c.pnp.max_residual_rms);
        }

        if (doc.contains("stft"))
        {
            const json &s = doc.at("stft");
            read_if(s, "window_length", c.stft.window_length);
            read_if(s, "hop", c.stft.hop);
            c.stft.fft_length = c.stft.window_length;
            read_if(s, "fft_length", c.stft.fft_length);
            if (s.contains("window"))
                c.stft.window = window_shape_from_string(s.at("window").get<std::string>());
        }

        read_if(doc, "snapshot_rate_hz", c.snapshot_rate);
        if (doc.contains("clutter_mode"))
            c.clutter_mode = clutter_mode_from_string(doc.at("clutter_mode").get<std::string>());
        read_if(doc, "drop_budget", c.drop_budget);
        read_if(doc, "master_seed", c.master_seed);
        read_if(doc, "workers", c.workers);
        if (doc.contains("inputs"))
            for (const auto &p : doc.at("inputs"))
                c.inputs.emplace_back(p.get<std::string>());
        if (doc.contains("output_dir"))
            c.output_dir = doc.at("output_dir").get<std::string>();
    }
    catch (const json::exception &e)
    {
        throw FormatError(std::string("malformed configuration: ") + e.what());
    }

    c.scenario.scatterers = c.environment.realize(c.scenario.rx);
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoFailure("cannot open configuration '" + path.string() + "'");
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::exception &e)
    {
        throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return run_config_from_json(doc);
}

json to_json(const RunConfig &c, bool include_run_environment)
{
    json scenario = {{"tx", point_to(c.scenario.tx)},
                     {"rx", point_to(c.scenario.rx)},
                     {"carrier_frequency_hz", c.scenario.carrier_frequency}};
    if (const auto *table = std::get_if<TableAntennas>(&c.scenario.antennas))
        scenario["antennas"] = {{"model", "table"}, {"tx", pattern_to(table->tx)}, {"rx", pattern_to(table->rx)}};
    else
        scenario["antennas"] = {{"model", "isotropic"}};

    json environment;
    if (c.environment.explicit_scatterers)
    {
        environment["scatterers"] = json::array();
        for (const auto &s : *c.environment.explicit_scatterers)
            environment["scatterers"].push_back({{"position", point_to(s.position)}, {"rcs", s.rcs}});
    }
    else
        environment = {{"seed", c.environment.seed}, {"count", c.environment.count}};
    scenario["environment"] = environment;

    json center;
    if (const auto *fixed = std::get_if<FixedPlacement>(&c.hand_center))
        center = {{"fixed", point_to(fixed->center)}};
    else
    {
        const auto &r = std::get<AxisRangePlacement>(c.hand_center);
        center = {{"base", point_to(r.base)}, {"axis", std::string(1, "xyz"[r.axis])}, {"min", r.min}, {"max", r.max}};
    }

    json doc = {
        {"format", kScenarioFormat},
        {"scenario", scenario},
        {"hand", {{"topology", c.topology.edges()}, {"radius_ratio", c.radius_ratio}, {"center", center}}},
        {"camera", {{"focal", c.camera.focal}, {"principal_point", {c.camera.cx, c.camera.cy}}}},
        {"filter", {{"min_cutoff_hz", c.filter.min_cutoff}, {"beta", c.filter.beta}, {"gamma", c.filter.gamma}}},
        {"pnp", {{"max_iterations", c.pnp.max_iterations}, {"max_residual_px", c.pnp.max_residual_rms}}},
        {"stft",
         {{"window_length", c.stft.window_length},
          {"hop", c.stft.hop},
          {"fft_length", c.stft.fft_length},
          {"window", to_string(c.stft.window)}}},
        {"snapshot_rate_hz", c.snapshot_rate},
        {"clutter_mode", to_string(c.clutter_mode)},
        {"drop_budget", c.drop_budget},
        {"master_seed", c.master_seed},
    };
    if (include_run_environment)
    {
        doc["workers"] = c.workers;
        json inputs = json::array();
        for (const auto &p : c.inputs)
            inputs.push_back(p.string());
        doc["inputs"] = inputs;
        doc["output_dir"] = c.output_dir.string();
    }
    return doc;
}

std::string config_digest(const RunConfig &config)
{
    // nlohmann::json objects are key-sorted, so dump() is canonical.
    const std::string canonical = to_json(config, false).dump();
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
    return hex;
}

} // namespace caster
