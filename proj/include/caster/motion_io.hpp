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

#include "caster/motion_pipeline.hpp"

#include <json.hpp>

#include <filesystem>

namespace caster
{

inline constexpr const char *kMotionFormat = "caster-motion/1";

// Reads a "caster-motion/1" document. Gaps in the timestamps that are whole
// multiples of the frame interval become frames with detected = false.
// Throws FormatError.
MotionClip motion_clip_from_json(const nlohmann::json &doc);
MotionClip load_motion_clip(const std::filesystem::path &path);

// Undetected frames are omitted, as an extractor would.
nlohmann::json to_json(const MotionClip &clip);
void save_motion_clip(const MotionClip &clip, const std::filesystem::path &path);

} // namespace caster
