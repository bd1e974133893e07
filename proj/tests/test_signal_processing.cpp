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

#include "caster/signal_processing.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

using namespace caster;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

NarrowbandSeries tone(double freq, int samples, double rate = 2000.0)
{
    NarrowbandSeries s;
    s.sample_rate = rate;
    for (int k = 0; k < samples; ++k)
        s.samples.push_back(std::polar(1.0, 2 * kPi * freq * k / rate));
    return s;
}

std::filesystem::path scratch_dir()
{
    auto dir = std::filesystem::temp_directory_path() / "caster_signal_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<unsigned char> read_bytes(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct GrayImage
{
    png_uint_32 width = 0, height = 0;
    std::vector<png_byte> pixels;
};

GrayImage read_png(const std::filesystem::path &path)
{
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    REQUIRE(png_image_begin_read_from_file(&image, path.string().c_str()) != 0);
    image.format = PNG_FORMAT_GRAY;
    GrayImage out;
    out.width = image.width;
    out.height = image.height;
    out.pixels.resize(PNG_IMAGE_SIZE(image));
    REQUIRE(png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr) != 0);
    return out;
}

} // namespace

TEST_CASE("Narrowband collapse", "[signal][collapse]")
{
    const double fc = 60.48e9;
    const Ray a = make_ray(1e-5, 1.3, fc, {});
    CHECK(collapse(std::span<const Ray>(&a, 1)) == a.amplitude);

    // Half a carrier period of extra delay cancels the pair.
    const Ray b = make_ray(1e-5, 1.3 + kSpeedOfLight / (2 * fc), fc, {});
    const std::vector<Ray> pair{a, b};
    CHECK(std::abs(collapse(pair)) < 1e-12 * std::abs(a.amplitude));

    ChannelSnapshot snap;
    snap.rays = pair;
    snap.rays.push_back(make_ray(2e-5, 0.7, fc, {}));
    CHECK(collapse(snap) == a.amplitude + b.amplitude + snap.rays[2].amplitude);

    const StaticChannel stat = StaticChannel::from_scenario(Scenario{});
    CHECK(collapse(stat.rays) == collapse(stat.rays));
}

TEST_CASE("Clutter removal", "[signal][clutter]")
{
    NarrowbandSeries constant;
    constant.samples.assign(100, Complex(0.3, -0.7));
    for (const auto &v : remove_clutter(constant, ClutterMode::SubtractMean).samples)
        CHECK(std::abs(v) < 1e-14);

    const Complex fixed(1e-4, 2e-4);
    NarrowbandSeries moving = tone(120.0, 300);
    NarrowbandSeries mixed = moving;
    for (auto &v : mixed.samples)
        v += fixed;
    const auto cleaned = remove_clutter(mixed, ClutterMode::SubtractStatic, fixed);
    for (std::size_t k = 0; k < moving.samples.size(); ++k)
        CHECK(std::abs(cleaned.samples[k] - moving.samples[k]) < 1e-15);

    const auto passthrough = remove_clutter(mixed, ClutterMode::None);
    CHECK(passthrough.samples == mixed.samples);
    CHECK(passthrough.sample_rate == mixed.sample_rate);

    CHECK_THROWS_AS(remove_clutter(mixed, ClutterMode::SubtractStatic), InvalidArgument);
    for (auto mode : {ClutterMode::None, ClutterMode::SubtractMean, ClutterMode::SubtractStatic})
        CHECK(clutter_mode_from_string(to_string(mode)) == mode);
    CHECK_THROWS_AS(clutter_mode_from_string("median"), InvalidArgument);
}

TEST_CASE("Windows", "[signal][stft]")
{
    const auto hann = make_window(WindowShape::Hann, 8);
    CHECK(hann[0] == 0.0);
    CHECK_THAT(hann[4], WithinAbs(1.0, 1e-15));
    CHECK_THAT(hann[2], WithinAbs(0.5, 1e-15));
    for (double v : make_window(WindowShape::Rectangular, 5))
        CHECK(v == 1.0);
    CHECK(window_shape_from_string("hann") == WindowShape::Hann);
    CHECK(window_shape_from_string("rectangular") == WindowShape::Rectangular);
}

TEST_CASE("STFT of tones", "[signal][stft]")
{
    const StftConfig rect{250, 25, 250, WindowShape::Rectangular};
    const auto axis = stft_frequency_axis(250, 2000.0);
    REQUIRE(axis.size() == 250);
    CHECK(axis[125] == 0.0);
    CHECK(axis[0] == -1000.0);
    CHECK(axis[175] == 400.0);

    for (double f : {400.0, -400.0, 0.0, 96.0})
    {
        const Spectrogram spec = stft(tone(f, 2000), rect);
        CHECK(spec.rows() == 250);
        CHECK(spec.cols() == (2000 - 250) / 25 + 1);
        for (Eigen::Index m = 0; m < spec.cols(); ++m)
            CHECK(peak_frequency(spec, m) == f);
    }

    const Spectrogram hann = stft(tone(-400.0, 1000), StftConfig{});
    for (Eigen::Index m = 0; m < hann.cols(); ++m)
        CHECK(peak_frequency(hann, m) == -400.0);
    CHECK_THAT(hann.time_axis[0], WithinRel(125.0 / 2000.0, 1e-15));
    CHECK_THAT(hann.time_step(), WithinRel(25.0 / 2000.0, 1e-12));
    // 20 log10 of the Hann-window coherent gain (N / 2) for a unit tone.
    CHECK_THAT(hann.magnitude_db.maxCoeff(), WithinRel(20 * std::log10(125.0), 1e-9));
    CHECK(hann.magnitude_db.minCoeff() >= hann.magnitude_db.maxCoeff() - kDynamicRangeDb);
    CHECK(hann.magnitude_db.allFinite());
}

TEST_CASE("STFT column energy", "[signal][stft][property]")
{
    std::mt19937_64 rng(41);
    std::normal_distribution<double> g(0.0, 1.0);
    NarrowbandSeries s;
    for (int k = 0; k < 600; ++k)
        s.samples.emplace_back(g(rng), g(rng));
    const StftConfig config{250, 25, 250, WindowShape::Hann};
    const Eigen::MatrixXd mag = stft_magnitude(s, config);
    const auto w = make_window(WindowShape::Hann, 250);
    for (Eigen::Index m = 0; m < mag.cols(); ++m)
    {
        double time_energy = 0.0;
        for (int n = 0; n < 250; ++n)
            time_energy += std::norm(w[std::size_t(n)] * s.samples[std::size_t(m * 25 + n)]);
        CHECK_THAT(mag.col(m).squaredNorm() / 250.0, WithinRel(time_energy, 1e-9));
    }
}

TEST_CASE("STFT linearity and padding", "[signal][stft]")
{
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g(0.0, 1.0);
    NarrowbandSeries s;
    for (int k = 0; k < 500; ++k)
        s.samples.emplace_back(g(rng), g(rng));
    const Complex a(0.0, -3.0);
    NarrowbandSeries scaled = s;
    for (auto &v : scaled.samples)
        v *= a;
    const Eigen::MatrixXd m1 = stft_magnitude(s, StftConfig{}), m2 = stft_magnitude(scaled, StftConfig{});
    CHECK(((m2 - 3.0 * m1).cwiseAbs().maxCoeff()) <= 1e-12 * m2.maxCoeff());

    // In dB every cell shifts by 20 log10 |a|.
    const Spectrogram d1 = stft(s, StftConfig{}), d2 = stft(scaled, StftConfig{});
    const Eigen::MatrixXd shift = d2.magnitude_db - d1.magnitude_db;
    CHECK((shift.array() - 20 * std::log10(3.0)).abs().maxCoeff() < 1e-9);

    const Spectrogram padded = stft(tone(400.0, 600), StftConfig{250, 50, 500, WindowShape::Hann});
    CHECK(padded.rows() == 500);
    CHECK(padded.cols() == 8);
    CHECK(peak_frequency(padded, 3) == 400.0);

    CHECK_THROWS_AS(stft(tone(1.0, 249), StftConfig{}), SeriesTooShort);
    CHECK_THROWS_AS((StftConfig{250, 0, 250}.validate()), InvalidArgument);
    CHECK_THROWS_AS((StftConfig{250, 25, 200}.validate()), InvalidArgument);
}

TEST_CASE("Moving point scatterer produces the expected Doppler ridge", "[signal][doppler]")
{
    const Scenario s;
    const double rate = 2000.0;
    const Point3 start(0.05, -0.05, 0.3), velocity(0.0, 0.1, 0.9);
    NarrowbandSeries series;
    series.sample_rate = rate;
    const int samples = 2000;
    for (int k = 0; k < samples; ++k)
    {
        const Point3 p = start + velocity * (k / rate);
        const double rt = (p - s.tx).norm(), rr = (p - s.rx).norm();
        const double mag = scattered_magnitude(s.wavelength(), 1e-3, 1, 1, rt, rr);
        series.samples.push_back(make_ray(mag, rt + rr, s.carrier_frequency, {}).amplitude);
    }
    const Spectrogram spec = stft(series, StftConfig{});
    const double bin = rate / 250.0;
    for (Eigen::Index m = 0; m < spec.cols(); ++m)
    {
        const Point3 p = start + velocity * spec.time_axis[std::size_t(m)];
        const double range_rate = velocity.dot((p - s.tx).normalized() + (p - s.rx).normalized());
        const double expected = -s.carrier_frequency * range_rate / kSpeedOfLight;
        CHECK(std::abs(peak_frequency(spec, m) - expected) <= bin);
    }
}

TEST_CASE("Binary matrix export", "[signal][export]")
{
    const auto dir = scratch_dir();
    Spectrogram spec;
    spec.magnitude_db = Eigen::MatrixXd::Random(500, 30) * 50.0;
    spec.frequency_axis = stft_frequency_axis(500, 2000.0);
    for (int m = 0; m < 30; ++m)
        spec.time_axis.push_back(0.0625 + m * 0.0125);
    const auto path = dir / "matrix.cstr";
    export_spectrogram(spec, path, ExportFormat::BinaryMatrixV1);
    CHECK(std::filesystem::file_size(path) == 4 + 4 + 4 + 4 + 24 + 500 * 30 * 8);

    const auto bytes = read_bytes(path);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "CSTR");
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == (500 & 0xff));
    CHECK(bytes[9] == (500 >> 8));
    CHECK(bytes[12] == 30);

    const CstrMatrix back = read_cstr(path);
    CHECK(back.version == 1);
    CHECK(back.values == spec.magnitude_db);
    CHECK(back.f_min == spec.frequency_axis.front());
    CHECK(back.f_max == spec.frequency_axis.back());
    CHECK_THAT(back.t_step, WithinRel(0.0125, 1e-12));

    // Truncated and foreign files are rejected.
    {
        std::ofstream out(dir / "short.cstr", std::ios::binary);
        out.write(reinterpret_cast<const char *>(bytes.data()), 100);
    }
    CHECK_THROWS_AS(read_cstr(dir / "short.cstr"), FormatError);
    {
        std::ofstream out(dir / "foreign.cstr", std::ios::binary);
        out << "PNG not a matrix file at all, padding padding padding";
    }
    CHECK_THROWS_AS(read_cstr(dir / "foreign.cstr"), FormatError);
    CHECK_THROWS_AS(export_spectrogram(spec, dir / "missing" / "x.cstr", ExportFormat::BinaryMatrixV1), IoFailure);
}

TEST_CASE("PNG export", "[signal][export]")
{
    const auto dir = scratch_dir();
    const Spectrogram spec = stft(tone(400.0, 1000), StftConfig{});
    export_spectrogram(spec, dir / "tone.png", ExportFormat::PngGrayscale);
    const GrayImage img = read_png(dir / "tone.png");
    CHECK(img.height == png_uint_32(spec.rows()));
    CHECK(img.width == png_uint_32(spec.cols()));
    // Brightest row sits 50 bins above the image center: +400 Hz with positive Doppler up.
    const std::size_t row = std::size_t(spec.rows() - 1 - 175);
    CHECK(img.pixels[row * img.width] == 255);
    CHECK(*std::min_element(img.pixels.begin(), img.pixels.end()) == 0);

    Spectrogram flat = spec;
    flat.magnitude_db.setConstant(-20.0);
    export_spectrogram(flat, dir / "flat.png", ExportFormat::PngGrayscale);
    const GrayImage gray = read_png(dir / "flat.png");
    const auto first = gray.pixels.front();
    for (auto v : gray.pixels)
        CHECK(v == first);

    // Identical inputs give identical files.
    export_spectrogram(spec, dir / "tone2.png", ExportFormat::PngGrayscale);
    CHECK(read_bytes(dir / "tone.png") == read_bytes(dir / "tone2.png"));
}
