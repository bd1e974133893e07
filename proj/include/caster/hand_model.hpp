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

#include "caster/types.hpp"

#include <span>
#include <utility>
#include <vector>

namespace caster
{

// Ratio r/l between the short and long half-axes of every primitive.
inline constexpr double kDefaultRadiusRatio = 0.5;

// Joint pairs defining the hand segments. Each edge yields one primitive.
class SkeletonTopology
{
public:
    using Edge = std::pair<int, int>;

    // Throws InvalidArgument unless there are exactly 21 distinct edges over
    // keypoints 0..20 forming a connected graph.
    explicit SkeletonTopology(std::vector<Edge> edges);

    const std::vector<Edge> &edges() const { return edges_; }
    std::size_t size() const { return edges_.size(); }
    const Edge &operator[](std::size_t n) const { return edges_[n]; }

    bool operator==(const SkeletonTopology &) const = default;

private:
    std::vector<Edge> edges_;
};

// Standard 21-connection hand-landmark layout (wrist = 0, thumb 1-4, index
// 5-8, middle 9-12, ring 13-16, pinky 17-20).
const SkeletonTopology &default_topology();

// Ellipsoid approximating one hand segment.
struct Primitive
{
    Point3 center;
    double half_length_long = 0.0;  // l
    double half_length_short = 0.0; // r
    Point3 axis;                    // unit vector from joint j towards joint i
};

// Keypoint separation below which an edge is treated as degenerate (m).
inline constexpr double kMinEdgeLength = 1e-9;

Primitive build_primitive(const Point3 &joint_i, const Point3 &joint_j,
                          double radius_ratio = kDefaultRadiusRatio);

std::vector<Primitive> build_primitives(std::span<const Point3> keypoints,
                                        const SkeletonTopology &topology = default_topology(),
                                        double radius_ratio = kDefaultRadiusRatio);

} // namespace caster
