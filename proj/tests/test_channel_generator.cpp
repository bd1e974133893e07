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

#include <catch_amalgamated.hpp>

#include "caster/channel_generator.hpp"
#include "caster/signal_processing.hpp"

#include <cmath>
#include <random>

using namespace caster;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

Primitive make_primitive(const Point3 &center, const Point3 &axis, double l, double r)
{
    Primitive p;
    p.center = center;
    p.axis = axis.normalized();
    p.half_length_long = l;
    p.half_length_short = r;
    return p;
}

BistaticGeometry angles(double tt, double tr, double dphi)
{
    BistaticGeometry g;
    g.theta_t = tt;
    g.theta_r = tr;
    g.delta_phi = dphi;
    g.range_t = g.range_r = 1.0;
    return g;
}

Keypoints random_hand(std::mt19937_64 &rng, const Point3 &center)
{
    std::uniform_real_distribution<double> u(-0.08, 0.08);
    Keypoints k;
    for (auto &p : k)
        p = center + Point3(u(rng), u(rng), u(rng));
    return k;
}

} // namespace

TEST_CASE("Bistatic angles", "[channel][geometry]")
{
    const Primitive p = make_primitive(Point3::Zero(), Point3::UnitZ(), 0.02, 0.01);

    const BistaticGeometry axial = bistatic_geometry(p, Point3(0, 0, -1), Point3(0, 0, 1));
    CHECK_THAT(axial.theta_t, WithinAbs(0.0, 1e-15));
    CHECK_THAT(axial.theta_r, WithinAbs(kPi, 1e-15));
    CHECK(axial.delta_phi == 0.0);
    CHECK_THAT(axial.range_t, WithinAbs(1.0, 1e-15));

    const BistaticGeometry side = bistatic_geometry(p, Point3(-1, 0, 0), Point3(1, 0, 0));
    CHECK_THAT(side.theta_t, WithinAbs(kPi / 2, 1e-15));
    CHECK_THAT(side.theta_r, WithinAbs(kPi / 2, 1e-15));
    CHECK_THAT(side.delta_phi, WithinAbs(kPi, 1e-15));

    const Point3 a(0.3, -0.4, 0.9);
    const BistaticGeometry mono = bistatic_geometry(p, a, a);
    CHECK(mono.delta_phi == 0.0);
    CHECK(mono.theta_t == mono.theta_r);

    // Quarter turn in azimuth.
    const BistaticGeometry quarter = bistatic_geometry(p, Point3(1, 0, 0.5), Point3(0, 2, -0.3));
    CHECK_THAT(quarter.delta_phi, WithinAbs(kPi / 2, 1e-15));
}

TEST_CASE("Ellipsoid cross section closed-form values", "[channel][rcs]")
{
    SECTION("sphere limit, monostatic along the axis")
    {
        CHECK_THAT(ellipsoid_rcs(angles(0, 0, 0), 0.01, 0.01), WithinRel(kPi * 1e-4, 1e-12));
    }
    SECTION("broadside monostatic")
    {
        CHECK_THAT(ellipsoid_rcs(angles(kPi / 2, kPi / 2, 0), 0.02, 0.005), WithinRel(kPi * 0.02 * 0.02, 1e-12));
    }
    SECTION("geometric-optics monostatic formula at arbitrary aspect")
    {
        // pi (a b c)^2 / (a^2 u^2 + b^2 v^2 + c^2 w^2)^2 with a = b = r, c = l.
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> th(0.0, kPi), len(0.002, 0.05);
        for (int i = 0; i < 200; ++i)
        {
            const double t = th(rng), l = len(rng), r = len(rng);
            const double s = std::sin(t), c = std::cos(t);
            const double denom = r * r * s * s + l * l * c * c;
            const double expected = kPi * r * r * r * r * l * l / (denom * denom);
            CHECK_THAT(ellipsoid_rcs(angles(t, t, 0), l, r), WithinRel(expected, 1e-10));
        }
    }
    SECTION("swap symmetry and non-negativity")
    {
        std::mt19937_64 rng(32);
        std::uniform_real_distribution<double> th(0.0, kPi), len(0.001, 0.05);
        for (int i = 0; i < 2000; ++i)
        {
            const double t1 = th(rng), t2 = th(rng), dp = th(rng), l = len(rng), r = len(rng);
            const double a = ellipsoid_rcs(angles(t1, t2, dp), l, r);
            const double b = ellipsoid_rcs(angles(t2, t1, dp), l, r);
            CHECK(std::isfinite(a));
            CHECK(a >= 0.0);
            CHECK(a == b);
        }
    }
    SECTION("forward scattering degenerates to zero")
    {
        CHECK(ellipsoid_rcs(angles(0, kPi, 0), 0.02, 0.01) == 0.0);
        CHECK(ellipsoid_rcs(angles(kPi / 2, kPi / 2, kPi), 0.02, 0.01) == 0.0);
    }
}

TEST_CASE("Ray amplitude law", "[channel][ray]")
{
    const double lambda = kSpeedOfLight / 60.48e9;
    CHECK_THAT(lambda, WithinRel(299792458.0 / 60.48e9, 1e-12));
    CHECK_THAT(lambda, WithinAbs(0.004958, 2e-6));

    const double mag = scattered_magnitude(lambda, 1e-4, 1.0, 1.0, 1.5, 0.5);
    CHECK_THAT(mag, WithinRel(1.484e-6, 1e-3));
    const Ray ray = make_ray(mag, 2.0, 60.48e9, RayTag{RayTag::Kind::Primitive, 3});
    CHECK_THAT(ray.delay, WithinRel(6.671e-9, 1e-4));
    CHECK_THAT(std::abs(ray.amplitude), WithinRel(mag, 1e-15));
    CHECK(ray.phase >= 0.0);
    CHECK(ray.phase < 2 * kPi);

    CHECK(scattered_magnitude(lambda, 0.0, 1.0, 1.0, 1.5, 0.5) == 0.0);
    CHECK(make_ray(0.0, 2.0, 60.48e9, {}).amplitude == Complex(0.0, 0.0));

    // One extra wavelength of path leaves the complex amplitude unchanged.
    const Ray longer = make_ray(mag, 2.0 + lambda, 60.48e9, {});
    CHECK(std::abs(longer.amplitude - ray.amplitude) < 1e-9 * mag);
    CHECK_THAT(2 * kPi * 60.48e9 * (longer.delay - ray.delay), WithinRel(2 * kPi, 1e-9));

    // Half a wavelength flips the sign.
    const Ray half = make_ray(mag, 2.0 + lambda / 2, 60.48e9, {});
    CHECK(std::abs(half.amplitude + ray.amplitude) < 1e-9 * mag);
}

TEST_CASE("Line of sight ray in the reference geometry", "[channel][ray]")
{
    const Scenario s;
    const Ray los = los_ray(s);
    const double range = std::sqrt(0.2 * 0.2 + 1.6 * 1.6);
    CHECK_THAT(std::abs(los.amplitude), WithinRel(s.wavelength() / (4 * kPi * range), 1e-12));
    CHECK_THAT(std::abs(los.amplitude), WithinRel(2.447e-4, 1e-3));
    CHECK_THAT(los.delay, WithinRel(range / kSpeedOfLight, 1e-12));
    CHECK(los.tag.kind == RayTag::Kind::LineOfSight);

    Scenario far = s;
    far.rx = s.tx + 2.0 * (s.rx - s.tx);
    CHECK_THAT(std::abs(los_ray(far).amplitude), WithinRel(0.5 * std::abs(los.amplitude), 1e-12));
}

TEST_CASE("Primitive rays", "[channel][ray]")
{
    const Scenario s;
    const Primitive p = make_primitive(Point3(0.05, 0.0, 0.6), Point3(1, 1, 0.2), 0.02, 0.01);
    const Ray ray = primitive_ray(p, s, AntennaGains{}, 7);
    const BistaticGeometry g = bistatic_geometry(p, s.tx, s.rx);
    const double sigma = ellipsoid_rcs(g, 0.02, 0.01);
    CHECK_THAT(std::abs(ray.amplitude),
               WithinRel(scattered_magnitude(s.wavelength(), sigma, 1, 1, g.range_t, g.range_r), 1e-15));
    CHECK_THAT(ray.delay, WithinRel((g.range_t + g.range_r) / kSpeedOfLight, 1e-15));
    CHECK(ray.tag == RayTag{RayTag::Kind::Primitive, 7});

    SECTION("gains scale the magnitude by sqrt(Gt Gr)")
    {
        const Ray boosted = primitive_ray(p, s, AntennaGains{4.0, 9.0}, 7);
        CHECK_THAT(std::abs(boosted.amplitude), WithinRel(6.0 * std::abs(ray.amplitude), 1e-14));
    }
    SECTION("reciprocity")
    {
        Scenario swapped = s;
        std::swap(swapped.tx, swapped.rx);
        const Ray back = primitive_ray(p, swapped, AntennaGains{}, 7);
        CHECK_THAT(std::abs(back.amplitude), WithinRel(std::abs(ray.amplitude), 1e-12));
        CHECK_THAT(back.delay, WithinRel(ray.delay, 1e-15));
    }
    SECTION("scaling both ranges by s scales the magnitude by 1/s^2")
    {
        for (double scale : {0.5, 2.0, 3.7})
        {
            Scenario sc = s;
            sc.tx = p.center + scale * (s.tx - p.center);
            sc.rx = p.center + scale * (s.rx - p.center);
            const Ray r2 = primitive_ray(p, sc, AntennaGains{}, 7);
            CHECK_THAT(std::abs(r2.amplitude), WithinRel(std::abs(ray.amplitude) / (scale * scale), 1e-12));
        }
    }
    SECTION("map semantics")
    {
        std::vector<Primitive> same(21, p);
        const auto rays = target_related(same, s);
        REQUIRE(rays.size() == 21);
        for (std::size_t n = 0; n < rays.size(); ++n)
        {
            CHECK(rays[n].amplitude == ray.amplitude);
            CHECK(rays[n].tag.index == int(n));
        }
        std::vector<Primitive> two{p, make_primitive(Point3(0, 0.1, 0.5), Point3::UnitX(), 0.03, 0.015)};
        const auto fwd = target_related(two, s);
        std::swap(two[0], two[1]);
        const auto rev = target_related(two, s);
        CHECK(fwd[0].amplitude == rev[1].amplitude);
        CHECK(fwd[1].amplitude == rev[0].amplitude);
        CHECK(collapse(fwd) == fwd[0].amplitude + fwd[1].amplitude);
    }
}

TEST_CASE("Phase advance follows path-length rate", "[channel][doppler][property]")
{
    const Scenario s;
    const double dt = 1.0 / 2000.0;
    const Point3 velocity(0.1, -0.2, -0.8);
    Primitive p = make_primitive(Point3(0.05, -0.02, 0.6), Point3(0.3, 1, 0.1), 0.02, 0.01);
    for (int step = 0; step < 20; ++step)
    {
        const Ray a = primitive_ray(p, s, AntennaGains{});
        const double path_a = (p.center - s.tx).norm() + (p.center - s.rx).norm();
        p.center += velocity * dt;
        const Ray b = primitive_ray(p, s, AntennaGains{});
        const double path_b = (p.center - s.tx).norm() + (p.center - s.rx).norm();
        const double rate = (path_b - path_a) / dt;
        const double expected = -2 * kPi * s.carrier_frequency * rate * dt / kSpeedOfLight;
        const double measured = std::arg(b.amplitude / a.amplitude);
        CHECK_THAT(measured, WithinRel(expected, 1e-6));
    }
}

TEST_CASE("Environment generation", "[channel][environment]")
{
    const Point3 rx(0.2, -0.1, 0.1);
    const auto env = generate_environment(11, 10, rx);
    REQUIRE(env.size() == 10);
    for (const auto &sc : env)
    {
        CHECK((sc.position - rx).cwiseAbs().maxCoeff() <= 1.0);
        CHECK(sc.rcs >= 0.0);
    }
    const auto again = generate_environment(11, 10, rx);
    for (std::size_t k = 0; k < env.size(); ++k)
    {
        CHECK(env[k].position == again[k].position);
        CHECK(env[k].rcs == again[k].rcs);
    }
    CHECK(generate_environment(12, 10, rx)[0].position != env[0].position);
    CHECK(generate_environment(11, 0, rx).empty());
    CHECK_THROWS_AS(generate_environment(11, -1, rx), InvalidArgument);

    const int big = 100000;
    const auto many = generate_environment(3, big, rx);
    double mean = 0.0;
    Point3 centroid = Point3::Zero();
    for (const auto &sc : many)
    {
        mean += sc.rcs;
        centroid += sc.position;
    }
    mean /= big;
    centroid /= big;
    CHECK(std::abs(mean - kScattererRcsMean) <= 3 * kScattererRcsStd / std::sqrt(double(big)));
    // Uniform on a 2 m side: std of the mean is (2/sqrt(12))/sqrt(K) per axis.
    CHECK((centroid - rx).cwiseAbs().maxCoeff() <= 4 * (2 / std::sqrt(12.0)) / std::sqrt(double(big)));
}

TEST_CASE("Snapshot assembly", "[channel][snapshot]")
{
    std::mt19937_64 rng(33);
    Scenario s;
    s.scatterers = generate_environment(4, 20, s.rx);
    const StaticChannel stat = StaticChannel::from_scenario(s);
    REQUIRE(stat.rays.size() == 21);
    CHECK(stat.rays.back().tag.kind == RayTag::Kind::LineOfSight);
    const auto env = environment_rays(s);
    for (std::size_t k = 0; k < env.size(); ++k)
    {
        CHECK(stat.rays[k].amplitude == env[k].amplitude);
        CHECK(env[k].tag == (RayTag{RayTag::Kind::Scatterer, int(k)}));
    }

    const Keypoints hand = random_hand(rng, Point3(0, 0, 0.6));
    const ChannelSnapshot snap = snapshot_channel(hand, s, stat, 0.25);
    CHECK(snap.rays.size() == 21 + 20 + 1);
    CHECK(snap.time == 0.25);
    for (std::size_t n = 0; n < 21; ++n)
        CHECK(snap.rays[n].tag == (RayTag{RayTag::Kind::Primitive, int(n)}));
    for (std::size_t k = 0; k < stat.rays.size(); ++k)
        CHECK(snap.rays[21 + k].amplitude == stat.rays[k].amplitude);

    const ChannelSnapshot again = snapshot_channel(hand, s, stat, 0.5);
    for (std::size_t n = 0; n < snap.rays.size(); ++n)
        CHECK(again.rays[n].amplitude == snap.rays[n].amplitude);

    Scenario empty = s;
    empty.scatterers.clear();
    const ChannelSnapshot bare = snapshot_channel(hand, empty, StaticChannel::from_scenario(empty));
    CHECK(bare.rays.size() == 22);

    Keypoints collapsed = hand;
    collapsed[1] = collapsed[0];
    CHECK_THROWS_AS(snapshot_channel(collapsed, s, stat), DegeneratePrimitive);
}

TEST_CASE("Cross-section positivity over random geometries", "[channel][rcs][property]")
{
    std::mt19937_64 rng(34);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> len(0.001, 0.05);
    for (int i = 0; i < 20000; ++i)
    {
        const double l = len(rng);
        const Primitive p =
            make_primitive(Point3(g(rng), g(rng), g(rng)) * 0.1, Point3(g(rng), g(rng), g(rng)), l, 0.5 * l);
        const Point3 tx(g(rng), g(rng), g(rng)), rx(g(rng), g(rng), g(rng));
        const BistaticGeometry a = bistatic_geometry(p, tx, rx), b = bistatic_geometry(p, rx, tx);
        const double sa = ellipsoid_rcs(a, p.half_length_long, p.half_length_short);
        const double sb = ellipsoid_rcs(b, p.half_length_long, p.half_length_short);
        REQUIRE(std::isfinite(sa));
        CHECK(sa >= 0.0);
        CHECK(std::abs(sa - sb) <= 1e-12 * std::max(sa, 1e-300) + 1e-300);
    }
}

TEST_CASE("Gain patterns", "[channel][antenna]")
{
    GainPattern pattern;
    pattern.boresight = Point3::UnitZ();
    pattern.angles_deg = {0.0, 30.0, 90.0};
    pattern.gains = {10.0, 4.0, 1.0};
    CHECK_NOTHROW(pattern.validate());
    CHECK_THAT(pattern.gain(Point3(0, 0, 5)), WithinRel(10.0, 1e-12));
    CHECK_THAT(pattern.gain(Point3(std::sin(kPi / 12), 0, std::cos(kPi / 12))), WithinRel(7.0, 1e-9));
    CHECK_THAT(pattern.gain(Point3(0, 0, -1)), WithinRel(1.0, 1e-12));

    Scenario s;
    s.antennas = TableAntennas{pattern, pattern};
    const AntennaGains gains = gains_towards(s, s.tx + Point3(0, 0, 1));
    CHECK_THAT(gains.tx, WithinRel(10.0, 1e-12));

    GainPattern bad = pattern;
    bad.gains = {1.0, -1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = pattern;
    bad.angles_deg = {0.0, 0.0, 90.0};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
