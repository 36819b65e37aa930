/*
 * Copyright 2026 The vecaxis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Static SVG figures for the CLI. Only the first two axes of a 3-axis view
// are drawn.

#pragma once

#include <string>

#include "vecaxis/comparison.hpp"
#include "vecaxis/dimreduce.hpp"
#include "vecaxis/projection.hpp"

namespace vecaxis {

struct SvgOptions {
    int width = 720;
    int height = 720;
    bool show_labels = true;
};

/// Scatter; with `analogy`, also the bisector and the perpendicular bands.
std::string render_svg(const CartesianProjection& projection, const AnalogyDecoration* analogy = nullptr,
                       const SvgOptions& options = {});
/// One polygon per item, vertex k on spoke k at the mapped radius.
std::string render_svg(const PolarProjection& projection, const SvgOptions& options = {});
/// One segment per item from its space-A point to its space-B point.
std::string render_svg(const ComparisonResult& result, const SvgOptions& options = {});
std::string render_svg(const LearnedView& view, const SvgOptions& options = {});

}  // namespace vecaxis
