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

#include "vecaxis/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "vecaxis/error.hpp"

namespace vecaxis {

Json axes_to_json(const std::vector<AxisSpec>& axes) {
    Json out = Json::array();
    for (const auto& axis : axes) {
        out.push_back(Json{{"label", axis.display_label}, {"formula", format(axis.formula)}});
    }
    return out;
}

Json matrix_to_json(const Matrix& m) {
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        out.push_back(Json(std::vector<double>(row.begin(), row.end())));
    }
    return out;
}

namespace {

Json learned_axes(const LearnedView& view) {
    Json out = Json::array();
    for (const auto& label : view.axis_labels) out.push_back(Json{{"label", label}});
    return out;
}

}  // namespace

Json to_json(const CartesianProjection& projection, const AnalogyDecoration* analogy) {
    Json doc{{"kind", "cartesian"},
             {"measure", std::string(to_string(projection.measure))},
             {"axes", axes_to_json(projection.axes)},
             {"items", projection.items},
             {"coords", matrix_to_json(projection.coords)}};
    if (analogy) {
        Json entries = Json::array();
        for (const auto& e : analogy->entries) {
            entries.push_back(Json{{"label", e.label},
                                   {"sum_projection", e.sum_projection},
                                   {"band", e.band},
                                   {"excluded", e.excluded}});
        }
        auto best = analogy->best_candidate();
        doc["analogy"] = Json{{"bisector", analogy->bisector},
                              {"band_width", analogy->band_width},
                              {"entries", std::move(entries)},
                              {"ranking", analogy->ranking},
                              {"best_candidate", best ? Json(*best) : Json(nullptr)}};
    }
    return doc;
}

Json to_json(const PolarProjection& projection) {
    return Json{{"kind", "polar"},
                {"measure", std::string(to_string(projection.measure))},
                {"axes", axes_to_json(projection.axes)},
                {"items", projection.items},
                {"raw", matrix_to_json(projection.raw)},
                {"radial", matrix_to_json(projection.radial)},
                {"radial_mapping",
                 Json{{"lo", projection.mapping.lo},
                      {"hi", projection.mapping.hi},
                      {"floor", projection.mapping.floor},
                      {"ceil", projection.mapping.ceil}}}};
}

Json to_json(const ComparisonResult& result, std::optional<double> min_length) {
    Json items = Json::array();
    for (std::size_t i = 0; i < result.items.size(); ++i) {
        auto a = result.coords_a.row(i);
        auto b = result.coords_b.row(i);
        items.push_back(Json{{"label", result.items[i]},
                             {"a", std::vector<double>(a.begin(), a.end())},
                             {"b", std::vector<double>(b.begin(), b.end())},
                             {"len", result.segment_length[i]}});
    }
    Json dropped = Json::array();
    for (const auto& d : result.dropped) dropped.push_back(Json{{"label", d.label}, {"missing_from", d.missing_from}});
    Json doc{{"kind", "comparison"},
             {"measure", std::string(to_string(result.measure))},
             {"space_a", result.space_a},
             {"space_b", result.space_b},
             {"axes", axes_to_json(result.axes)}};
    doc["min_length"] = min_length ? Json(*min_length) : Json(nullptr);
    doc["items"] = std::move(items);
    doc["dropped"] = std::move(dropped);
    return doc;
}

Json to_json(const PcaView& view) {
    return Json{{"kind", "pca"},
                {"axes", learned_axes(view.view)},
                {"items", view.view.items},
                {"coords", matrix_to_json(view.view.coords)},
                {"explained_variance", view.pca.explained_variance},
                {"components", matrix_to_json(view.pca.components)},
                {"mean", view.pca.mean}};
}

Json to_json(const TsneConfig& c) {
    return Json{{"perplexity", c.perplexity},
                {"iterations", c.iterations},
                {"learning_rate", c.learning_rate},
                {"initial_momentum", c.initial_momentum},
                {"final_momentum", c.final_momentum},
                {"momentum_switch_iteration", c.momentum_switch_iteration},
                {"exaggeration", c.exaggeration},
                {"exaggeration_iterations", c.exaggeration_iterations},
                {"seed", c.seed},
                {"init_stddev", c.init_stddev},
                {"kl_interval", c.kl_interval},
                {"adaptive_gains", c.adaptive_gains}};
}

Json to_json(const TsneView& view) {
    Json trace = Json::array();
    for (const auto& s : view.tsne.kl_trace) trace.push_back(Json{{"iteration", s.iteration}, {"kl", s.kl}});
    return Json{{"kind", "tsne"},
                {"axes", learned_axes(view.view)},
                {"items", view.view.items},
                {"coords", matrix_to_json(view.view.coords)},
                {"config", to_json(view.tsne.config)},
                {"kl_trace", std::move(trace)}};
}

Json to_json(const std::vector<Neighbor>& neighbors) {
    Json out = Json::array();
    for (const auto& n : neighbors) out.push_back(Json{{"label", n.label}, {"score", n.score}});
    return out;
}

namespace {

template <typename T>
void read_field(const Json& j, const char* key, T& out) {
    const auto& v = j.at(key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw Error(ErrorKind::InvalidArgument, std::string("config.") + key + " must be a boolean");
        out = v.template get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_unsigned()) {
            throw Error(ErrorKind::InvalidArgument, std::string("config.") + key + " must be a non-negative integer");
        }
        out = v.template get<T>();
    } else {
        if (!v.is_number()) throw Error(ErrorKind::InvalidArgument, std::string("config.") + key + " must be a number");
        out = v.template get<T>();
    }
}

}  // namespace

TsneConfig tsne_config_from_json(const Json& j, TsneConfig c) {
    if (j.is_null()) return c;
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "t-SNE config must be an object");
    static const std::set<std::string> known{"perplexity",   "iterations",  "learning_rate",
                                             "initial_momentum", "final_momentum", "momentum_switch_iteration",
                                             "exaggeration", "exaggeration_iterations", "seed",
                                             "init_stddev",  "kl_interval", "adaptive_gains"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw Error(ErrorKind::InvalidArgument, "unknown t-SNE config key '" + key + "'");
    }
    auto maybe = [&](const char* key, auto& field) {
        if (j.contains(key)) read_field(j, key, field);
    };
    maybe("perplexity", c.perplexity);
    maybe("iterations", c.iterations);
    maybe("learning_rate", c.learning_rate);
    maybe("initial_momentum", c.initial_momentum);
    maybe("final_momentum", c.final_momentum);
    maybe("momentum_switch_iteration", c.momentum_switch_iteration);
    maybe("exaggeration", c.exaggeration);
    maybe("exaggeration_iterations", c.exaggeration_iterations);
    maybe("seed", c.seed);
    maybe("init_stddev", c.init_stddev);
    maybe("kl_interval", c.kl_interval);
    maybe("adaptive_gains", c.adaptive_gains);
    if (c.kl_interval == 0) throw Error(ErrorKind::InvalidArgument, "config.kl_interval must be positive");
    return c;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::string matrix_csv(const std::vector<std::string>& header, const std::vector<std::string>& items, const Matrix& m) {
    std::ostringstream out;
    out << "label";
    for (const auto& h : header) out << ',' << csv_escape(h);
    out << '\n';
    for (std::size_t i = 0; i < items.size(); ++i) {
        out << csv_escape(items[i]);
        for (double v : m.row(i)) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

std::vector<std::string> axis_labels(const std::vector<AxisSpec>& axes) {
    std::vector<std::string> out;
    for (const auto& a : axes) out.push_back(a.display_label);
    return out;
}

}  // namespace

std::string to_csv(const CartesianProjection& p) { return matrix_csv(axis_labels(p.axes), p.items, p.coords); }

std::string to_csv(const PolarProjection& p) { return matrix_csv(axis_labels(p.axes), p.items, p.raw); }

std::string to_csv(const LearnedView& v) { return matrix_csv(v.axis_labels, v.items, v.coords); }

std::string to_csv(const ComparisonResult& r) {
    static const char* names[] = {"x", "y", "z"};
    const std::size_t cols = r.axes.size();
    std::ostringstream out;
    out << "label";
    for (std::size_t c = 0; c < cols; ++c) out << ",a" << names[c];
    for (std::size_t c = 0; c < cols; ++c) out << ",b" << names[c];
    out << ",len\n";
    for (std::size_t i = 0; i < r.items.size(); ++i) {
        out << csv_escape(r.items[i]);
        for (double v : r.coords_a.row(i)) out << ',' << format_double(v);
        for (double v : r.coords_b.row(i)) out << ',' << format_double(v);
        out << ',' << format_double(r.segment_length[i]) << '\n';
    }
    return out.str();
}

std::string to_csv(const std::vector<Neighbor>& neighbors) {
    std::ostringstream out;
    out << "label,score\n";
    for (const auto& n : neighbors) out << csv_escape(n.label) << ',' << format_double(n.score) << '\n';
    return out.str();
}

}  // namespace vecaxis
