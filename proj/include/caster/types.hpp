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

#include <Eigen/Core>

#include <array>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace caster
{

inline constexpr std::size_t kNumKeypoints = 21;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = std::numbers::pi;

using Point3 = Eigen::Vector3d;
using Complex = std::complex<double>;
using Keypoints = std::array<Point3, kNumKeypoints>;

// Base of all library errors. The concrete subclasses name the failure
// so callers can catch the ones they can recover from.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define CASTER_DEFINE_ERROR(Name)              \
    class Name : public Error                  \
    {                                          \
    public:                                    \
        using Error::Error;                    \
    }

CASTER_DEFINE_ERROR(InvalidArgument);
CASTER_DEFINE_ERROR(DegeneratePrimitive);
CASTER_DEFINE_ERROR(BehindCamera);
CASTER_DEFINE_ERROR(NonConvergence);
CASTER_DEFINE_ERROR(InsufficientFrames);
CASTER_DEFINE_ERROR(SeriesTooShort);
CASTER_DEFINE_ERROR(IoFailure);
CASTER_DEFINE_ERROR(FormatError);
CASTER_DEFINE_ERROR(ClipRejected);

#undef CASTER_DEFINE_ERROR

inline bool is_finite(const Point3 &p)
{
    return p.allFinite();
}

} // namespace caster
