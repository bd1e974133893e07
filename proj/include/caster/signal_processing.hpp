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

#include "caster/channel_generator.hpp"
#include "caster/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace caster
{

struct NarrowbandSeries
{
    double sample_rate = 2000.0; // Hz
    std::vector<Complex> samples;
};

// Coherent sum of all ray amplitudes of one snapshot.
Complex collapse(const ChannelSnapshot &snapshot);
Complex collapse(std::span<const Ray> rays);

enum class ClutterMode
{
    None,
    SubtractMean,
    SubtractStatic
};

std::string_view to_string(ClutterMode mode);
ClutterMode clutter_mode_from_string(std::string_view name);

// SubtractStatic requires `static_component` (the collapsed environment + LoS
// rays) and throws InvalidArgument without it.
NarrowbandSeries remove_clutter(const NarrowbandSeries &series, ClutterMode mode,
                                std::optional<Complex> static_component = std::nullopt);

enum class WindowShape
{
    Rectangular,
    Hann
};

std::string_view to_string(WindowShape shape);
WindowShape window_shape_from_string(std::string_view name);

struct StftConfig
{
    int window_length = 250; // samples
    int hop = 25;            // samples
    int fft_length = 250;    // samples, zero padded beyond window_length
    WindowShape window = WindowShape::Hann;

    void validate() const;
};

std::vector<double> make_window(WindowShape shape, int length);

// Linear |DFT| matrix (fft_length x columns), fftshifted so that row
// fft_length / 2 is 0 Hz. Throws SeriesTooShort.
Eigen::MatrixXd stft_magnitude(const NarrowbandSeries &series, const StftConfig &config);

// Doppler frequency (Hz) of each fftshifted row.
std::vector<double> stft_frequency_axis(int fft_length, double sample_rate);

inline constexpr double kDynamicRangeDb = 120.0;

struct Spectrogram
{
    Eigen::MatrixXd magnitude_db;       // frequency rows x time columns
    std::vector<double> frequency_axis; // Hz, ascending, 0 Hz centered
    std::vector<double> time_axis;      // s, window centers
    std::string label;

    Eigen::Index rows() const { return magnitude_db.rows(); }
    Eigen::Index cols() const { return magnitude_db.cols(); }
    double time_step() const;
};

// Magnitude in dB, floored kDynamicRangeDb below the clip maximum.
Spectrogram stft(const NarrowbandSeries &series, const StftConfig &config, std::string label = {});

// Frequency of the strongest row in column `m`.
double peak_frequency(const Spectrogram &spectrogram, Eigen::Index column);

enum class ExportFormat
{
    PngGrayscale,
    BinaryMatrixV1
};

// 8-bit grayscale, min-max normalized over the whole clip, positive Doppler up.
void write_png(const Spectrogram &spectrogram, const std::filesystem::path &path);

// "CSTR" little-endian matrix: magic, u32 version = 1, u32 rows, u32 cols,
// f64 f_min, f64 f_max, f64 t_step, then rows * cols f64 values row-major.
void write_cstr(const Spectrogram &spectrogram, const std::filesystem::path &path);

struct CstrMatrix
{
    std::uint32_t version = 1;
    double f_min = 0.0;
    double f_max = 0.0;
    double t_step = 0.0;
    Eigen::MatrixXd values;
};

CstrMatrix read_cstr(const std::filesystem::path &path);

inline constexpr std::size_t kCstrHeaderBytes = 40;

// Throws IoFailure.
void export_spectrogram(const Spectrogram &spectrogram, const std::filesystem::path &path, ExportFormat format);

} // namespace caster
