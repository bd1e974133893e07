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

#include "caster/signal_processing.hpp"

#include <fftw3.h>
#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>

namespace caster
{

Complex collapse(std::span<const Ray> rays)
{
    Complex sum{0.0, 0.0};
    for (const auto &ray : rays)
        sum += ray.amplitude;
    return sum;
}

Complex collapse(const ChannelSnapshot &snapshot)
{
    return collapse(std::span<const Ray>(snapshot.rays));
}

std::string_view to_string(ClutterMode mode)
{
    switch (mode)
    {
    case ClutterMode::None:
        return "none";
    case ClutterMode::SubtractMean:
        return "subtract_mean";
    case ClutterMode::SubtractStatic:
        return "subtract_static";
    }
    return "none";
}

ClutterMode clutter_mode_from_string(std::string_view name)
{
    if (name == "none")
        return ClutterMode::None;
    if (name == "subtract_mean")
        return ClutterMode::SubtractMean;
    if (name == "subtract_static")
        return ClutterMode::SubtractStatic;
    throw InvalidArgument("unknown clutter mode '" + std::string(name) + "'");
}

NarrowbandSeries remove_clutter(const NarrowbandSeries &series, ClutterMode mode,
                                std::optional<Complex> static_component)
{
    NarrowbandSeries out = series;
    switch (mode)
    {
    case ClutterMode::None:
        break;
    case ClutterMode::SubtractMean:
    {
        if (out.samples.empty())
            break;
        const Complex mean = std::accumulate(out.samples.begin(), out.samples.end(), Complex{}) /
                             double(out.samples.size());
        for (auto &s : out.samples)
            s -= mean;
        break;
    }
    case ClutterMode::SubtractStatic:
        if (!static_component)
            throw InvalidArgument("subtract_static needs the static channel component");
        for (auto &s : out.samples)
            s -= *static_component;
        break;
    }
    return out;
}

std::string_view to_string(WindowShape shape)
{
    return shape == WindowShape::Hann ? "hann" : "rectangular";
}

WindowShape window_shape_from_string(std::string_view name)
{
    if (name == "hann")
        return WindowShape::Hann;
    if (name == "rectangular")
        return WindowShape::Rectangular;
    throw InvalidArgument("unknown window shape '" + std::string(name) + "'");
}

void StftConfig::validate() const
{
    if (!(hop > 0 && hop <= window_length && window_length <= fft_length))
        throw InvalidArgument("STFT config needs 0 < hop <= window_length <= fft_length");
}

std::vector<double> make_window(WindowShape shape, int length)
{
    std::vector<double> w(static_cast<std::size_t>(length), 1.0);
    if (shape == WindowShape::Hann)
        for (int n = 0; n < length; ++n) // periodic Hann
            w[std::size_t(n)] = 0.5 - 0.5 * std::cos(2.0 * kPi * n / length);
    return w;
}

std::vector<double> stft_frequency_axis(int fft_length, double sample_rate)
{
    std::vector<double> f(static_cast<std::size_t>(fft_length));
    const int half = fft_length / 2;
    for (int k = 0; k < fft_length; ++k)
        f[std::size_t(k)] = double(k - half) * sample_rate / fft_length;
    return f;
}

namespace
{

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex &fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwPlan
{
    fftw_plan plan = nullptr;
    fftw_complex *buffer = nullptr;
    int length = 0;

    explicit FftwPlan(int n) : length(n)
    {
        std::lock_guard lock(fftw_planner_mutex());
        buffer = fftw_alloc_complex(std::size_t(n));
        plan = fftw_plan_dft_1d(n, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~FftwPlan()
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buffer);
    }
    FftwPlan(const FftwPlan &) = delete;
    FftwPlan &operator=(const FftwPlan &) = delete;

    Complex *data() { return reinterpret_cast<Complex *>(buffer); }
    void execute() { fftw_execute(plan); }
};

} // namespace

Eigen::MatrixXd stft_magnitude(const NarrowbandSeries &series, const StftConfig &config)
{
    config.validate();
    const auto total = std::ptrdiff_t(series.samples.size());
    if (total < config.window_length)
        throw SeriesTooShort("series of " + std::to_string(total) + " samples is shorter than the " +
                             std::to_string(config.window_length) + "-sample window");

    const auto columns = Eigen::Index((total - config.window_length) / config.hop + 1);
    const int n = config.fft_length;
    const int half = n / 2;
    const auto window = make_window(config.window, config.window_length);

    Eigen::MatrixXd magnitude(n, columns);
    FftwPlan fft(n);
    Complex *buf = fft.data();
    for (Eigen::Index m = 0; m < columns; ++m)
    {
        const std::size_t start = std::size_t(m) * std::size_t(config.hop);
        std::fill(buf, buf + n, Complex{});
        for (int k = 0; k < config.window_length; ++k)
            buf[k] = window[std::size_t(k)] * series.samples[start + std::size_t(k)];
        fft.execute();
        for (int row = 0; row < n; ++row)
            magnitude(row, m) = std::abs(buf[(row - half + n) % n]);
    }
    return magnitude;
}

double Spectrogram::time_step() const
{
    return time_axis.size() >= 2 ? time_axis[1] - time_axis[0] : 0.0;
}

Spectrogram stft(const NarrowbandSeries &series, const StftConfig &config, std::string label)
{
    if (!(series.sample_rate > 0.0))
        throw InvalidArgument("sample rate must be positive");
    const Eigen::MatrixXd magnitude = stft_magnitude(series, config);

    Spectrogram s;
    s.label = std::move(label);
    s.frequency_axis = stft_frequency_axis(config.fft_length, series.sample_rate);
    s.time_axis.resize(std::size_t(magnitude.cols()));
    for (std::size_t m = 0; m < s.time_axis.size(); ++m)
        s.time_axis[m] = (double(m) * config.hop + 0.5 * config.window_length) / series.sample_rate;

    const double peak = magnitude.maxCoeff();
    const double floor_db = peak > 0.0 ? 20.0 * std::log10(peak) - kDynamicRangeDb
                                       : 20.0 * std::log10(std::numeric_limits<double>::min());
    s.magnitude_db = magnitude.unaryExpr(
        [floor_db](double a) { return a > 0.0 ? std::max(20.0 * std::log10(a), floor_db) : floor_db; });
    return s;
}

double peak_frequency(const Spectrogram &spectrogram, Eigen::Index column)
{
    Eigen::Index row = 0;
    spectrogram.magnitude_db.col(column).maxCoeff(&row);
    return spectrogram.frequency_axis[std::size_t(row)];
}

namespace
{

struct FileCloser
{
    void operator()(std::FILE *f) const
    {
        if (f)
            std::fclose(f);
    }
};

template <typename T>
void put_le(std::string &out, T value)
{
    std::uint64_t bits = 0;
    std::memcpy(&bits, &value, sizeof(T));
    for (std::size_t b = 0; b < sizeof(T); ++b)
        out.push_back(char((bits >> (8 * b)) & 0xffu));
}

template <typename T>
T get_le(const unsigned char *in)
{
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b)
        bits |= std::uint64_t(in[b]) << (8 * b);
    T value;
    std::memcpy(&value, &bits, sizeof(T));
    return value;
}

} // namespace

void write_png(const Spectrogram &spectrogram, const std::filesystem::path &path)
{
    const auto &db = spectrogram.magnitude_db;
    const auto height = db.rows(), width = db.cols();
    if (height == 0 || width == 0)
        throw InvalidArgument("cannot write an empty spectrogram");

    const double lo = db.minCoeff(), hi = db.maxCoeff();
    std::vector<unsigned char> pixels(std::size_t(height * width));
    for (Eigen::Index y = 0; y < height; ++y)
    {
        const Eigen::Index row = height - 1 - y; // highest frequency on top
        for (Eigen::Index x = 0; x < width; ++x)
        {
            const double v = hi > lo ? (db(row, x) - lo) / (hi - lo) : 0.5;
            pixels[std::size_t(y * width + x)] = static_cast<unsigned char>(std::lround(255.0 * v));
        }
    }

    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.string().c_str(), "wb"));
    if (!file)
        throw IoFailure("cannot open '" + path.string() + "' for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info)
    {
        png_destroy_write_struct(&png, &info);
        throw IoFailure("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png)))
    {
        png_destroy_write_struct(&png, &info);
        throw IoFailure("libpng failed writing '" + path.string() + "'");
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (Eigen::Index y = 0; y < height; ++y)
        png_write_row(png, pixels.data() + y * width);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);

    if (std::fflush(file.get()) != 0)
        throw IoFailure("failed flushing '" + path.string() + "'");
}

void write_cstr(const Spectrogram &spectrogram, const std::filesystem::path &path)
{
    const auto &db = spectrogram.magnitude_db;
    std::string bytes;
    bytes.reserve(kCstrHeaderBytes + std::size_t(db.size()) * 8);
    bytes.append("CSTR", 4);
    put_le<std::uint32_t>(bytes, 1);
    put_le<std::uint32_t>(bytes, std::uint32_t(db.rows()));
    put_le<std::uint32_t>(bytes, std::uint32_t(db.cols()));
    put_le<double>(bytes, spectrogram.frequency_axis.empty() ? 0.0 : spectrogram.frequency_axis.front());
    put_le<double>(bytes, spectrogram.frequency_axis.empty() ? 0.0 : spectrogram.frequency_axis.back());
    put_le<double>(bytes, spectrogram.time_step());
    for (Eigen::Index r = 0; r < db.rows(); ++r)
        for (Eigen::Index c = 0; c < db.cols(); ++c)
            put_le<double>(bytes, db(r, c));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoFailure("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out)
        throw IoFailure("failed writing '" + path.string() + "'");
}

CstrMatrix read_cstr(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoFailure("cannot open '" + path.string() + "'");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < kCstrHeaderBytes || bytes.compare(0, 4, "CSTR") != 0)
        throw FormatError("'" + path.string() + "' is not a CSTR file");

    const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
    CstrMatrix m;
    m.version = get_le<std::uint32_t>(p + 4);
    if (m.version != 1)
        throw FormatError("unsupported CSTR version " + std::to_string(m.version));
    const auto rows = get_le<std::uint32_t>(p + 8);
    const auto cols = get_le<std::uint32_t>(p + 12);
    m.f_min = get_le<double>(p + 16);
    m.f_max = get_le<double>(p + 24);
    m.t_step = get_le<double>(p + 32);
    if (bytes.size() != kCstrHeaderBytes + std::size_t(rows) * cols * 8)
        throw FormatError("CSTR payload size does not match its header");

    m.values.resize(rows, cols);
    const unsigned char *v = p + kCstrHeaderBytes;
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c, v += 8)
            m.values(r, c) = get_le<double>(v);
    return m;
}

void export_spectrogram(const Spectrogram &spectrogram, const std::filesystem::path &path, ExportFormat format)
{
    if (format == ExportFormat::PngGrayscale)
        write_png(spectrogram, path);
    else
        write_cstr(spectrogram, path);
}

} // namespace caster
