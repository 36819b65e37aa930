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

#include <string>
#include <vector>

#include "vecaxis/embedding_store.hpp"
#include "vecaxis/matrix.hpp"
#include "vecaxis/projection.hpp"

namespace vecaxis {

struct DroppedItem {
    std::string label;
    std::string missing_from;  // name of the space lacking the label

    bool operator==(const DroppedItem&) const = default;
};

struct ComparisonResult {
    std::vector<AxisSpec> axes;
    Measure measure = Measure::Cosine;
    std::string space_a;
    std::string space_b;
    std::vector<std::string> items;      // present in both spaces, request order
    Matrix coords_a;                     // items x axes
    Matrix coords_b;                     // items x axes
    std::vector<double> segment_length;  // Euclidean distance in the projection plane
    std::vector<DroppedItem> dropped;
};

/// Scores `items` against the same axes in both spaces. Both spaces must be
/// normalized (NotNormalized, subject = space name). Every formula atom must
/// exist in both spaces (UnknownLabel, subject = label). Items missing from
/// either space are reported in `dropped`. The spaces may differ in dimension.
ComparisonResult compare(const EmbeddingSpace& space_a, const EmbeddingSpace& space_b, std::vector<AxisSpec> axes,
                         const std::vector<std::string>& items, Measure measure = Measure::Cosine);

/// Keeps items whose segment is strictly longer than `min_length`.
/// Throws InvalidArgument for a negative or NaN threshold.
ComparisonResult filter_by_segment_length(const ComparisonResult& result, double min_length);

}  // namespace vecaxis
