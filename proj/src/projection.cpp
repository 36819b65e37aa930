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

#include "vecaxis/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "vecaxis/error.hpp"

namespace vecaxis {

AxisSpec make_axis(Formula formula, std::string display_label) {
    if (formula.type() != ValueType::Vector) {
        throw Error(ErrorKind::TypeError, "axis formula '" + format(formula) + "' must be vector-valued")
            .at_offset(formula.root().offset);
    }
    if (display_label.empty()) display_label = format(formula);
    return AxisSpec{std::move(formula), std::move(display_label)};
}

AxisSpec make_axis(std::string_view formula_text, std::string display_label) {
    return make_axis(parse_formula(formula_text), std::move(display_label));
}

Matrix score_items(const EmbeddingSpace& space, std::span<const AxisSpec> axes,
                   std::span<const std::string> items, Measure measure) {
    std::vector<Vector> axis_vectors;
    axis_vectors.reserve(axes.size());
    for (const auto& axis : axes) {
        Vector v = evaluate(axis.formula, space);
        if (measure == Measure::Cosine && norm(v) == 0.0) {
            throw Error(ErrorKind::ZeroNorm, "axis '" + axis.display_label + "' evaluates to a zero vector")
                .about(axis.display_label);
        }
        axis_vectors.push_back(std::move(v));
    }

    Matrix coords(items.size(), axes.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto item = space.lookup(items[i]);
        if (measure == Measure::Cosine && norm(item) == 0.0) {
            throw Error(ErrorKind::ZeroNorm, "item '" + items[i] + "' is a zero vector").about(items[i]);
        }
        for (std::size_t j = 0; j < axes.size(); ++j) {
            coords(i, j) = apply_measure(measure, item, axis_vectors[j]);
        }
    }
    return coords;
}

CartesianProjection project_cartesian(const EmbeddingSpace& space, std::vector<AxisSpec> axes,
                                      std::vector<std::string> items, Measure measure) {
    if (axes.size() < 2 || axes.size() > 3) {
        throw Error(ErrorKind::InvalidArgument,
                    "a Cartesian projection needs 2 or 3 axes, got " + std::to_string(axes.size()));
    }
    Matrix coords = score_items(space, axes, items, measure);
    return CartesianProjection{std::move(axes), measure, std::move(items), std::move(coords)};
}

double RadialMapping::operator()(double score) const noexcept {
    if (!(hi > lo)) return ceil;
    return floor + (score - lo) * (ceil - floor) / (hi - lo);
}

PolarProjection project_polar(const EmbeddingSpace& space, std::vector<AxisSpec> axes,
                              std::vector<std::string> items, Measure measure, std::size_t item_cap) {
    if (axes.size() < 3) {
        throw Error(ErrorKind::InvalidArgument,
                    "a polar projection needs at least 3 axes, got " + std::to_string(axes.size()));
    }
    if (items.size() > item_cap) {
        throw Error(ErrorKind::TooManyItems, "polar view holds at most " + std::to_string(item_cap) +
                                                 " items, got " + std::to_string(items.size()));
    }
    PolarProjection out;
    out.raw = score_items(space, axes, items, measure);
    if (!out.raw.empty()) {
        auto [lo, hi] = std::minmax_element(out.raw.data().begin(), out.raw.data().end());
        out.mapping.lo = *lo;
        out.mapping.hi = *hi;
    }
    out.radial = Matrix(out.raw.rows(), out.raw.cols());
    for (std::size_t k = 0; k < out.raw.data().size(); ++k) out.radial.data()[k] = out.mapping(out.raw.data()[k]);
    out.axes = std::move(axes);
    out.items = std::move(items);
    out.measure = measure;
    return out;
}

std::optional<std::string> AnalogyDecoration::best_candidate() const {
    for (std::size_t idx : ranking) {
        if (!entries[idx].excluded) return entries[idx].label;
    }
    return std::nullopt;
}

AnalogyDecoration decorate_analogy(const CartesianProjection& projection, double band_width) {
    if (projection.axes.size() != 2) {
        throw Error(ErrorKind::InvalidArgument, "analogy decoration needs exactly 2 axes");
    }
    if (!(band_width > 0.0) || !std::isfinite(band_width)) {
        throw Error(ErrorKind::InvalidArgument, "band width must be positive and finite");
    }

    std::set<std::string> atoms;
    for (const auto& axis : projection.axes) atoms.merge(free_labels(axis.formula));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    AnalogyDecoration deco{{inv_sqrt2, inv_sqrt2}, band_width, {}, {}};
    deco.entries.reserve(projection.items.size());
    for (std::size_t i = 0; i < projection.items.size(); ++i) {
        const double s = (projection.coords(i, 0) + projection.coords(i, 1)) / std::sqrt(2.0);
        const auto band = static_cast<std::int64_t>(std::floor(s / band_width));
        deco.entries.push_back({projection.items[i], s, band, atoms.contains(projection.items[i])});
    }
    deco.ranking.resize(deco.entries.size());
    std::iota(deco.ranking.begin(), deco.ranking.end(), std::size_t{0});
    std::stable_sort(deco.ranking.begin(), deco.ranking.end(), [&](std::size_t a, std::size_t b) {
        return deco.entries[a].sum_projection > deco.entries[b].sum_projection;
    });
    return deco;
}

}  // namespace vecaxis
