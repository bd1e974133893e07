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

#include "caster/channel_generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace caster
{

void GainPattern::validate() const
{
    if (angles_deg.empty() || angles_deg.size() != gains.size())
        throw InvalidArgument("gain pattern needs matching, non-empty angle and gain tables");
    if (!(boresight.norm() > 0.0) || !boresight.allFinite())
        throw InvalidArgument("gain pattern boresight must be a non-zero vector");
    for (std::size_t k = 0; k < gains.size(); ++k)
    {
        if (!(gains[k] >= 0.0) || !std::isfinite(gains[k]))
            throw InvalidArgument("antenna gains must be finite and non-negative");
        if (k > 0 && !(angles_deg[k] > angles_deg[k - 1]))
            throw InvalidArgument("gain pattern angles must be strictly increasing");
    }
}

double GainPattern::gain(const Point3 &direction) const
{
    const double n = direction.norm() * boresight.norm();
    const double c = n > 0.0 ? std::clamp(direction.dot(boresight) / n, -1.0, 1.0) : 1.0;
    const double angle = std::acos(c) * 180.0 / kPi;

    if (angle <= angles_deg.front())
        return gains.front();
    if (angle >= angles_deg.back())
        return gains.back();
    const auto hi = std::size_t(std::upper_bound(angles_deg.begin(), angles_deg.end(), angle) - angles_deg.begin());
    const double w = (angle - angles_deg[hi - 1]) / (angles_deg[hi] - angles_deg[hi - 1]);
    return (1.0 - w) * gains[hi - 1] + w * gains[hi];
}

double Scenario::tx_gain(const Point3 &direction) const
{
    if (const auto *table = std::get_if<TableAntennas>(&antennas))
        return table->tx.gain(direction);
    return 1.0;
}

double Scenario::rx_gain(const Point3 &direction) const
{
    if (const auto *table = std::get_if<TableAntennas>(&antennas))
        return table->rx.gain(direction);
    return 1.0;
}

void Scenario::validate() const
{
    if (!tx.allFinite() || !rx.allFinite())
        throw InvalidArgument("transmitter and receiver positions must be finite");
    if ((tx - rx).norm() == 0.0)
        throw InvalidArgument("transmitter and receiver must not coincide");
    if (!(carrier_frequency > 0.0) || !std::isfinite(carrier_frequency))
        throw InvalidArgument("carrier frequency must be positive");
    if (const auto *table = std::get_if<TableAntennas>(&antennas))
    {
        table->tx.validate();
        table->rx.validate();
    }
    for (const auto &s : scatterers)
        if (!s.position.allFinite() || !(s.rcs >= 0.0) || !std::isfinite(s.rcs))
            throw InvalidArgument("scatterers need finite positions and non-negative RCS");
}

BistaticGeometry bistatic_geometry(const Primitive &primitive, const Point3 &tx, const Point3 &rx)
{
    const Point3 &v = primitive.axis;
    const Point3 from_tx = primitive.center - tx;
    const Point3 from_rx = primitive.center - rx;

    BistaticGeometry g;
    g.range_t = from_tx.norm();
    g.range_r = from_rx.norm();
    if (!(g.range_t > 0.0) || !(g.range_r > 0.0))
        throw InvalidArgument("antenna coincides with a primitive center");

    g.theta_t = std::acos(std::clamp(from_tx.dot(v) / g.range_t, -1.0, 1.0));
    g.theta_r = std::acos(std::clamp(from_rx.dot(v) / g.range_r, -1.0, 1.0));

    // Components of the antenna offsets perpendicular to the long axis, i.e.
    // p_c minus the antenna position projected onto the plane through p_c.
    const Point3 perp_t = from_tx - v * from_tx.dot(v);
    const Point3 perp_r = from_rx - v * from_rx.dot(v);
    const double norm_t = perp_t.norm();
    const double norm_r = perp_r.norm();
    if (norm_t < 1e-12 || norm_r < 1e-12)
        g.delta_phi = 0.0;
    else
        g.delta_phi = std::acos(std::clamp(perp_t.dot(perp_r) / (norm_t * norm_r), -1.0, 1.0));
    return g;
}

double ellipsoid_rcs(const BistaticGeometry &geometry, double l, double r)
{
    if (!(l > 0.0) || !(r > 0.0))
        throw InvalidArgument("ellipsoid half-axes must be positive");

    const double ct = std::cos(geometry.theta_t), cr = std::cos(geometry.theta_r);
    const double st = std::sin(geometry.theta_t), sr = std::sin(geometry.theta_r);
    const double cp = std::cos(geometry.delta_phi);

    const double bracket = (1.0 + ct * cr) * cp + st * sr;
    const double numerator = 4.0 * kPi * r * r * r * r * l * l * bracket * bracket;

    const double cos_sum = ct + cr;
    const double base = r * r * (st * st + sr * sr + 2.0 * st * sr * cp) + l * l * cos_sum * cos_sum;
    const double denominator = base * base;

    // Forward scattering makes both terms vanish together.
    if (numerator == 0.0 || !(denominator > 0.0))
        return 0.0;
    const double sigma = numerator / denominator;
    return std::isfinite(sigma) ? sigma : 0.0;
}

Ray make_ray(double magnitude, double path_length, double carrier_frequency, RayTag tag)
{
    Ray ray;
    ray.delay = path_length / kSpeedOfLight;
    // Count cycles in extended precision and reduce before scaling by 2 pi;
    // a few metres hold thousands of carrier cycles.
    const long double cycles =
        static_cast<long double>(path_length) * carrier_frequency / static_cast<long double>(kSpeedOfLight);
    ray.phase = static_cast<double>(2.0L * std::numbers::pi_v<long double> * (cycles - std::floor(cycles)));
    if (ray.phase >= 2.0 * kPi)
        ray.phase = 0.0;
    ray.amplitude = std::polar(magnitude, -ray.phase);
    ray.tag = tag;
    return ray;
}

double scattered_magnitude(double wavelength, double rcs, double gain_t, double gain_r, double range_t,
                           double range_r)
{
    const double four_pi_cubed = std::pow(4.0 * kPi, 3);
    const double rr = range_t * range_r;
    return wavelength * std::sqrt(rcs * gain_t * gain_r / (four_pi_cubed * rr * rr));
}

AntennaGains gains_towards(const Scenario &scenario, const Point3 &position)
{
    return {scenario.tx_gain(position - scenario.tx), scenario.rx_gain(position - scenario.rx)};
}

Ray primitive_ray(const Primitive &primitive, const Scenario &scenario, const AntennaGains &gains, int index)
{
    const BistaticGeometry g = bistatic_geometry(primitive, scenario.tx, scenario.rx);
    const double sigma = ellipsoid_rcs(g, primitive.half_length_long, primitive.half_length_short);
    const double magnitude =
        scattered_magnitude(scenario.wavelength(), sigma, gains.tx, gains.rx, g.range_t, g.range_r);
    return make_ray(magnitude, g.range_t + g.range_r, scenario.carrier_frequency,
                    {RayTag::Kind::Primitive, index});
}

std::vector<Ray> target_related(std::span<const Primitive> primitives, const Scenario &scenario)
{
    std::vector<Ray> rays;
    rays.reserve(primitives.size());
    for (std::size_t n = 0; n < primitives.size(); ++n)
        rays.push_back(primitive_ray(primitives[n], scenario, gains_towards(scenario, primitives[n].center), int(n)));
    return rays;
}

std::vector<Ray> environment_rays(const Scenario &scenario)
{
    std::vector<Ray> rays;
    rays.reserve(scenario.scatterers.size());
    for (std::size_t k = 0; k < scenario.scatterers.size(); ++k)
    {
        const auto &s = scenario.scatterers[k];
        const double range_t = (s.position - scenario.tx).norm();
        const double range_r = (s.position - scenario.rx).norm();
        if (!(range_t > 0.0) || !(range_r > 0.0))
            throw InvalidArgument("scatterer " + std::to_string(k) + " coincides with an antenna");
        const AntennaGains gains = gains_towards(scenario, s.position);
        const double magnitude =
            scattered_magnitude(scenario.wavelength(), s.rcs, gains.tx, gains.rx, range_t, range_r);
        rays.push_back(make_ray(magnitude, range_t + range_r, scenario.carrier_frequency,
                                {RayTag::Kind::Scatterer, int(k)}));
    }
    return rays;
}

Ray los_ray(const Scenario &scenario)
{
    const double range = (scenario.rx - scenario.tx).norm();
    const double gain_t = scenario.tx_gain(scenario.rx - scenario.tx);
    const double gain_r = scenario.rx_gain(scenario.tx - scenario.rx);
    const double magnitude = scenario.wavelength() * std::sqrt(gain_t * gain_r) / (4.0 * kPi * range);
    return make_ray(magnitude, range, scenario.carrier_frequency, {RayTag::Kind::LineOfSight, 0});
}

std::vector<Scatterer> generate_environment(std::uint64_t seed, int count, const Point3 &rx)
{
    if (count < 0)
        throw InvalidArgument("scatterer count must be non-negative");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(-0.5 * kEnvironmentCubeSide, 0.5 * kEnvironmentCubeSide);
    std::normal_distribution<double> rcs(kScattererRcsMean, kScattererRcsStd);

    std::vector<Scatterer> scatterers(static_cast<std::size_t>(count));
    for (auto &s : scatterers)
    {
        const double dx = offset(rng), dy = offset(rng), dz = offset(rng);
        s.position = rx + Point3(dx, dy, dz);
        do
            s.rcs = rcs(rng);
        while (s.rcs < 0.0);
    }
    return scatterers;
}

StaticChannel StaticChannel::from_scenario(const Scenario &scenario)
{
    StaticChannel channel;
    channel.rays = environment_rays(scenario);
    channel.rays.push_back(los_ray(scenario));
    return channel;
}

ChannelSnapshot snapshot_channel(std::span<const Point3> keypoints, const Scenario &scenario,
                                 const StaticChannel &static_channel, double time, const SkeletonTopology &topology,
                                 double radius_ratio)
{
    const auto primitives = build_primitives(keypoints, topology, radius_ratio);
    ChannelSnapshot snapshot;
    snapshot.time = time;
    snapshot.rays = target_related(primitives, scenario);
    snapshot.rays.insert(snapshot.rays.end(), static_channel.rays.begin(), static_channel.rays.end());
    return snapshot;
}

} // namespace caster
