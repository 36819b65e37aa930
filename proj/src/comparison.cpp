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

#include "vecaxis/comparison.hpp"

#include <cmath>
#include <set>

#include "vecaxis/error.hpp"

namespace vecaxis {

namespace {

void require_normalized(const EmbeddingSpace& space) {
    if (!space.normalized()) {
        throw Error(ErrorKind::NotNormalized, "space '" + space.name() + "' must be normalized before comparison")
            .about(space.name());
    }
}

void require_atoms(const EmbeddingSpace& space, const std::vector<AxisSpec>& axes) {
    for (const auto& axis : axes) {
        for (const auto& label : free_labels(axis.formula)) {
            if (!space.contains(label)) {
                throw Error(ErrorKind::UnknownLabel,
                            "unknown label '" + label + "' in space '" + space.name() + "'")
                    .about(label);
            }
        }
    }
}

}  // namespace

ComparisonResult compare(const EmbeddingSpace& space_a, const EmbeddingSpace& space_b, std::vector<AxisSpec> axes,
                         const std::vector<std::string>& items, Measure measure) {
    if (axes.size() < 2 || axes.size() > 3) {
        throw Error(ErrorKind::InvalidArgument, "a comparison needs 2 or 3 axes, got " + std::to_string(axes.size()));
    }
    require_normalized(space_a);
    require_normalized(space_b);
    require_atoms(space_a, axes);
    require_atoms(space_b, axes);

    ComparisonResult out;
    out.measure = measure;
    out.space_a = space_a.name();
    out.space_b = space_b.name();
    std::set<std::string_view> seen;
    for (const auto& item : items) {
        if (!seen.insert(item).second) continue;
        if (!space_a.contains(item)) {
            out.dropped.push_back({item, space_a.name()});
        } else if (!space_b.contains(item)) {
            out.dropped.push_back({item, space_b.name()});
        } else {
            out.items.push_back(item);
        }
    }
    out.coords_a = score_items(space_a, axes, out.items, measure);
    out.coords_b = score_items(space_b, axes, out.items, measure);
    out.segment_length.resize(out.items.size());
    for (std::size_t i = 0; i < out.items.size(); ++i) {
        out.segment_length[i] = euclidean(out.coords_a.row(i), out.coords_b.row(i));
    }
    out.axes = std::move(axes);
    return out;
}

ComparisonResult filter_by_segment_length(const ComparisonResult& result, double min_length) {
    if (!(min_length >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "min_length must be non-negative");
    }
    ComparisonResult out;
    out.axes = result.axes;
    out.measure = result.measure;
    out.space_a = result.space_a;
    out.space_b = result.space_b;
    out.dropped = result.dropped;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < result.items.size(); ++i) {
        if (result.segment_length[i] > min_length) keep.push_back(i);
    }
    const std::size_t cols = result.axes.size();
    out.coords_a = Matrix(keep.size(), cols);
    out.coords_b = Matrix(keep.size(), cols);
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const std::size_t i = keep[r];
        out.items.push_back(result.items[i]);
        out.segment_length.push_back(result.segment_length[i]);
        for (std::size_t c = 0; c < cols; ++c) {
            out.coords_a(r, c) = result.coords_a(i, c);
            out.coords_b(r, c) = result.coords_b(i, c);
        }
    }
    return out;
}

}  // namespace vecaxis
