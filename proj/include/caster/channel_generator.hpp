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

#include "caster/hand_model.hpp"
#include "caster/types.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace caster
{

// Gain (linear, not dB) as a function of the angle off an antenna's boresight,
// linearly interpolated over a sorted angle table and held flat outside it.
struct GainPattern
{
    Point3 boresight = Point3::UnitZ();
    std::vector<double> angles_deg;
    std::vector<double> gains;

    void validate() const;
    double gain(const Point3 &direction) const;
};

struct IsotropicAntennas
{
};

struct TableAntennas
{
    GainPattern tx;
    GainPattern rx;
};

using AntennaGainModel = std::variant<IsotropicAntennas, TableAntennas>;

struct Scatterer
{
    Point3 position = Point3::Zero();
    double rcs = 0.0; // m^2
};

struct Scenario
{
    Point3 tx = Point3(0.0, -0.1, -1.5);
    Point3 rx = Point3(0.2, -0.1, 0.1);
    double carrier_frequency = 60.48e9; // Hz
    AntennaGainModel antennas = IsotropicAntennas{};
    std::vector<Scatterer> scatterers;

    double wavelength() const { return kSpeedOfLight / carrier_frequency; }

    // Transmit gain towards `direction` (pointing away from the transmitter).
    double tx_gain(const Point3 &direction) const;
    // Receive gain for a ray arriving from `direction` (pointing away from the receiver).
    double rx_gain(const Point3 &direction) const;

    void validate() const;
};

struct BistaticGeometry
{
    double theta_t = 0.0;   // incident elevation vs. the long axis, [0, pi]
    double theta_r = 0.0;   // scattered elevation vs. the long axis, [0, pi]
    double delta_phi = 0.0; // |phi_r - phi_t|, [0, pi]
    double range_t = 0.0;   // m
    double range_r = 0.0;   // m
};

// Angles of the transmitter and receiver relative to a primitive. When either
// antenna lies on the long axis the azimuth difference is taken as 0.
BistaticGeometry bistatic_geometry(const Primitive &primitive, const Point3 &tx, const Point3 &rx);

// Bistatic radar cross section (m^2) of a prolate ellipsoid with half-axes
// l (long) and r (short, twice). Returns 0 where the closed form degenerates
// to 0/0 (forward scattering).
double ellipsoid_rcs(const BistaticGeometry &geometry, double half_length_long, double half_length_short);

struct RayTag
{
    enum class Kind : std::uint8_t
    {
        Primitive,
        Scatterer,
        LineOfSight
    };

    Kind kind = Kind::LineOfSight;
    int index = 0;

    bool operator==(const RayTag &) const = default;
};

struct Ray
{
    Complex amplitude;  // includes exp(-j * phase)
    double delay = 0.0; // s
    double phase = 0.0; // 2 pi f_c delay, reduced to [0, 2 pi)
    RayTag tag;
};

// Builds a ray of real magnitude `magnitude` travelling `path_length` meters.
Ray make_ray(double magnitude, double path_length, double carrier_frequency, RayTag tag);

// Bistatic radar-equation magnitude lambda sqrt(sigma Gt Gr / ((4 pi)^3 (Rt Rr)^2)).
double scattered_magnitude(double wavelength, double rcs, double gain_t, double gain_r, double range_t,
                           double range_r);

struct AntennaGains
{
    double tx = 1.0;
    double rx = 1.0;
};

// Antenna gains towards a point scatterer at `position`.
AntennaGains gains_towards(const Scenario &scenario, const Point3 &position);

Ray primitive_ray(const Primitive &primitive, const Scenario &scenario, const AntennaGains &gains, int index = 0);

std::vector<Ray> target_related(std::span<const Primitive> primitives, const Scenario &scenario);

std::vector<Ray> environment_rays(const Scenario &scenario);
Ray los_ray(const Scenario &scenario);

// Scatterers uniformly placed in the 2 m cube centered at `rx` with RCS drawn
// from N(0.005, 0.001^2) m^2 truncated at 0. Deterministic in `seed`.
std::vector<Scatterer> generate_environment(std::uint64_t seed, int count, const Point3 &rx);

inline constexpr double kScattererRcsMean = 0.005;
inline constexpr double kScattererRcsStd = 0.001;
inline constexpr double kEnvironmentCubeSide = 2.0;

struct ChannelSnapshot
{
    double time = 0.0; // s
    std::vector<Ray> rays;
};

// Time-invariant part of the channel: K scatterer rays followed by the LoS ray.
struct StaticChannel
{
    std::vector<Ray> rays;

    static StaticChannel from_scenario(const Scenario &scenario);
};

// Target rays (one per topology edge) followed by the static rays.
// Propagates DegeneratePrimitive.
ChannelSnapshot snapshot_channel(std::span<const Point3> keypoints, const Scenario &scenario,
                                 const StaticChannel &static_channel, double time = 0.0,
                                 const SkeletonTopology &topology = default_topology(),
                                 double radius_ratio = kDefaultRadiusRatio);

} // namespace caster
