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

#include "caster/hand_model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace caster
{

SkeletonTopology::SkeletonTopology(std::vector<Edge> edges) : edges_(std::move(edges))
{
    if (edges_.size() != kNumKeypoints)
        throw InvalidArgument("topology must have exactly 21 edges, got " + std::to_string(edges_.size()));

    std::set<std::pair<int, int>> seen;
    std::vector<int> parent(kNumKeypoints);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a)
    {
        while (parent[a] != a)
            a = parent[a] = parent[parent[a]];
        return a;
    };

    for (const auto &[i, j] : edges_)
    {
        if (i < 0 || j < 0 || i >= int(kNumKeypoints) || j >= int(kNumKeypoints))
            throw InvalidArgument("topology edge index outside 0..20");
        if (i == j)
            throw InvalidArgument("topology edge joins a keypoint to itself");
        if (!seen.emplace(std::min(i, j), std::max(i, j)).second)
            throw InvalidArgument("duplicate topology edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
        parent[find(i)] = find(j);
    }

    const int root = find(0);
    for (int k = 1; k < int(kNumKeypoints); ++k)
        if (find(k) != root)
            throw InvalidArgument("topology edge graph is not connected");
}

const SkeletonTopology &default_topology()
{
    static const SkeletonTopology topology({{0, 1}, {1, 2}, {2, 3}, {3, 4},          // thumb
                                            {0, 5}, {5, 6}, {6, 7}, {7, 8},          // index
                                            {5, 9}, {9, 10}, {10, 11}, {11, 12},     // middle
                                            {9, 13}, {13, 14}, {14, 15}, {15, 16},   // ring
                                            {13, 17}, {0, 17}, {17, 18}, {18, 19},   // palm, pinky
                                            {19, 20}});
    return topology;
}

Primitive build_primitive(const Point3 &joint_i, const Point3 &joint_j, double radius_ratio)
{
    if (!is_finite(joint_i) || !is_finite(joint_j))
        throw DegeneratePrimitive("non-finite keypoint");

    const Point3 diff = joint_i - joint_j;
    const double separation = diff.norm();
    if (separation <= kMinEdgeLength)
        throw DegeneratePrimitive("primitive endpoints coincide");

    Primitive p;
    p.center = 0.5 * (joint_i + joint_j);
    p.half_length_long = 0.5 * separation;
    p.half_length_short = radius_ratio * p.half_length_long;
    p.axis = diff / separation;
    return p;
}

std::vector<Primitive> build_primitives(std::span<const Point3> keypoints,
                                        const SkeletonTopology &topology, double radius_ratio)
{
    if (keypoints.size() != kNumKeypoints)
        throw InvalidArgument("expected 21 keypoints");
    if (!(radius_ratio > 0.0))
        throw InvalidArgument("radius ratio must be positive");

    std::vector<Primitive> primitives;
    primitives.reserve(topology.size());
    for (const auto &[i, j] : topology.edges())
    {
        try
        {
            primitives.push_back(build_primitive(keypoints[i], keypoints[j], radius_ratio));
        }
        catch (const DegeneratePrimitive &e)
        {
            throw DegeneratePrimitive(std::string(e.what()) + " on edge (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        }
    }
    return primitives;
}

} // namespace caster
