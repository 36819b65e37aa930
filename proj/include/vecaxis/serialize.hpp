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

// JSON and CSV documents for projection results. Numbers are written so that
// they parse back to the identical double (JSON: shortest round-trip form,
// CSV: %.17g).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "vecaxis/comparison.hpp"
#include "vecaxis/dimreduce.hpp"
#include "vecaxis/projection.hpp"

namespace vecaxis {

using Json = nlohmann::ordered_json;

Json axes_to_json(const std::vector<AxisSpec>& axes);
Json matrix_to_json(const Matrix& m);

Json to_json(const CartesianProjection& projection, const AnalogyDecoration* analogy = nullptr);
Json to_json(const PolarProjection& projection);
Json to_json(const ComparisonResult& result, std::optional<double> min_length = std::nullopt);
Json to_json(const PcaView& view);
Json to_json(const TsneView& view);
Json to_json(const TsneConfig& config);
Json to_json(const std::vector<Neighbor>& neighbors);

/// Parses the keys present in `j` over the defaults. Throws InvalidArgument
/// for unknown keys or wrongly typed values.
TsneConfig tsne_config_from_json(const Json& j, TsneConfig defaults = {});

/// %.17g, with "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double value);
std::string csv_escape(const std::string& field);

/// Header "label,<axis display labels>".
std::string to_csv(const CartesianProjection& projection);
/// Header "label,<axis display labels>"; raw (unmapped) scores.
std::string to_csv(const PolarProjection& projection);
/// Header label,ax,ay,bx,by,len; label,ax,ay,az,bx,by,bz,len for 3 axes.
std::string to_csv(const ComparisonResult& result);
std::string to_csv(const LearnedView& view);
std::string to_csv(const std::vector<Neighbor>& neighbors);

}  // namespace vecaxis
