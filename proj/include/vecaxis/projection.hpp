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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecaxis/embedding_store.hpp"
#include "vecaxis/formula.hpp"
#include "vecaxis/matrix.hpp"

namespace vecaxis {

/// An explicit axis: a vector-valued formula plus the caption shown for it.
struct AxisSpec {
    Formula formula;
    std::string display_label;
};

/// Parses `formula_text`; the display label defaults to the canonical formula
/// text. Throws TypeError if the formula is scalar-valued.
AxisSpec make_axis(std::string_view formula_text, std::string display_label = {});
AxisSpec make_axis(Formula formula, std::string display_label = {});

struct CartesianProjection {
    std::vector<AxisSpec> axes;
    Measure measure = Measure::Cosine;
    std::vector<std::string> items;
    Matrix coords;  // items x axes
};

/// coords(i, j) = measure(item_i, axis_j). Each axis formula is evaluated once.
/// Works for any number of axes; callers enforce view-specific limits.
Matrix score_items(const EmbeddingSpace& space, std::span<const AxisSpec> axes,
                   std::span<const std::string> items, Measure measure);

/// 2 or 3 axes. Throws InvalidArgument, UnknownLabel, ZeroNorm.
CartesianProjection project_cartesian(const EmbeddingSpace& space, std::vector<AxisSpec> axes,
                                      std::vector<std::string> items, Measure measure = Measure::Cosine);

inline constexpr std::size_t kDefaultPolarItemCap = 16;

/// Affine map of [lo, hi] onto [floor, ceil]. A degenerate range maps to ceil.
struct RadialMapping {
    double lo = 0.0;
    double hi = 0.0;
    double floor = 0.05;
    double ceil = 1.0;

    double operator()(double score) const noexcept;
};

struct PolarProjection {
    std::vector<AxisSpec> axes;
    Measure measure = Measure::Cosine;
    std::vector<std::string> items;
    Matrix raw;     // items x axes, unmapped scores
    Matrix radial;  // raw mapped through `mapping`
    RadialMapping mapping;
};

/// At least 3 axes and at most `item_cap` items (TooManyItems otherwise).
PolarProjection project_polar(const EmbeddingSpace& space, std::vector<AxisSpec> axes,
                              std::vector<std::string> items, Measure measure = Measure::Cosine,
                              std::size_t item_cap = kDefaultPolarItemCap);

inline constexpr double kDefaultBandWidth = 0.05;

struct AnalogyEntry {
    std::string label;
    double sum_projection;  // (x + y) / sqrt(2)
    std::int64_t band;      // floor(sum_projection / band_width)
    bool excluded;          // label is an atom of one of the axis formulae
};

struct AnalogyDecoration {
    std::array<double, 2> bisector;
    double band_width;
    std::vector<AnalogyEntry> entries;  // same order as the projection items
    std::vector<std::size_t> ranking;   // entry indices by descending sum_projection

    /// Best-ranked entry that is not an axis atom.
    std::optional<std::string> best_candidate() const;
};

/// Requires exactly 2 axes and band_width > 0 (InvalidArgument otherwise).
AnalogyDecoration decorate_analogy(const CartesianProjection& projection, double band_width = kDefaultBandWidth);

}  // namespace vecaxis
