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

#include "vecaxis/embedding_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "vecaxis/error.hpp"

namespace vecaxis {

namespace {

bool is_field_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_field_space(line[i])) ++i;
        if (i == line.size()) break;
        std::size_t start = i;
        while (i < line.size() && !is_field_space(line[i])) ++i;
        fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

std::optional<double> parse_real(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<std::int64_t> parse_integer(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

const std::vector<std::string>& empty_labels() {
    static const std::vector<std::string> empty;
    return empty;
}

}  // namespace

// ---------------------------------------------------------------------------
// measures

std::string_view to_string(Measure measure) noexcept {
    switch (measure) {
        case Measure::Cosine: return "cosine";
        case Measure::Dot: return "dot";
        case Measure::Euclidean: return "euclidean";
    }
    return "cosine";
}

Measure parse_measure(std::string_view name) {
    if (name == "cosine" || name == "cos") return Measure::Cosine;
    if (name == "dot") return Measure::Dot;
    if (name == "euclidean" || name == "euclid" || name == "l2") return Measure::Euclidean;
    throw Error(ErrorKind::InvalidArgument, "unknown measure '" + std::string(name) + "'")
        .about(std::string(name));
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

double norm(std::span<const double> v) noexcept { return std::sqrt(dot(v, v)); }

double euclidean(std::span<const double> a, std::span<const double> b) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

double cosine(std::span<const double> a, std::span<const double> b) {
    double na = norm(a);
    double nb = norm(b);
    if (na == 0.0 || nb == 0.0) {
        throw Error(ErrorKind::ZeroNorm, "cosine similarity is undefined for a zero vector");
    }
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

double apply_measure(Measure measure, std::span<const double> item, std::span<const double> axis) {
    switch (measure) {
        case Measure::Cosine: return cosine(item, axis);
        case Measure::Dot: return dot(item, axis);
        case Measure::Euclidean: return euclidean(item, axis);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// metadata

void MetadataTable::set(const std::string& label, const std::string& field, MetaValue value) {
    records_[label].insert_or_assign(field, std::move(value));
}

const MetaRecord* MetadataTable::find(std::string_view label) const {
    auto it = records_.find(std::string(label));
    return it == records_.end() ? nullptr : &it->second;
}

std::string meta_to_string(const MetaValue& value) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else {
                char buf[32];
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
                return std::string(buf, ptr);
            }
        },
        value);
}

MetadataTable load_metadata(std::istream& in) {
    auto split_tabs = [](const std::string& line) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            cells.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        for (auto& c : cells) {
            if (!c.empty() && c.back() == '\r') c.pop_back();
        }
        return cells;
    };

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        header = split_tabs(line);
        break;
    }
    if (header.empty()) throw Error(ErrorKind::EmptyInput, "metadata file has no header row");
    if (header.front() != "label") {
        throw Error(ErrorKind::ConfigError, "metadata header must start with a 'label' column")
            .at_line(line_no);
    }

    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_tabs(line);
        if (cells.size() > header.size()) {
            throw Error(ErrorKind::DimensionMismatch,
                        "metadata row has " + std::to_string(cells.size()) + " columns, header has " +
                            std::to_string(header.size()))
                .at_line(line_no);
        }
        cells.resize(header.size());
        rows.push_back(std::move(cells));
    }

    enum class ColumnType { Integer, Real, Text };
    std::vector<ColumnType> types(header.size(), ColumnType::Integer);
    for (std::size_t c = 1; c < header.size(); ++c) {
        for (const auto& row : rows) {
            const auto& cell = row[c];
            if (cell.empty()) continue;
            if (types[c] == ColumnType::Integer && !parse_integer(cell)) types[c] = ColumnType::Real;
            if (types[c] == ColumnType::Real && !parse_real(cell)) {
                types[c] = ColumnType::Text;
                break;
            }
        }
    }

    MetadataTable table;
    for (const auto& row : rows) {
        for (std::size_t c = 1; c < header.size(); ++c) {
            const auto& cell = row[c];
            if (cell.empty()) continue;
            switch (types[c]) {
                case ColumnType::Integer: table.set(row[0], header[c], *parse_integer(cell)); break;
                case ColumnType::Real: table.set(row[0], header[c], *parse_real(cell)); break;
                case ColumnType::Text: table.set(row[0], header[c], cell); break;
            }
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// EmbeddingSpace

bool EmbeddingSpace::contains(std::string_view label) const { return index_of(label).has_value(); }

std::optional<std::size_t> EmbeddingSpace::index_of(std::string_view label) const {
    if (!store_) return std::nullopt;
    auto it = store_->index.find(std::string(label));
    if (it == store_->index.end()) return std::nullopt;
    return it->second;
}

std::span<const double> EmbeddingSpace::lookup(std::string_view label) const {
    auto idx = index_of(label);
    if (!idx) {
        throw Error(ErrorKind::UnknownLabel,
                    "label '" + std::string(label) + "' is not in space '" + name_ + "'")
            .about(std::string(label));
    }
    return vector_at(*idx);
}

std::size_t EmbeddingSpace::frequency_rank(std::size_t index) const {
    if (metadata_) {
        if (const auto* rec = metadata_->find(label_at(index))) {
            auto it = rec->find("rank");
            if (it != rec->end()) {
                if (const auto* i = std::get_if<std::int64_t>(&it->second); i && *i > 0) {
                    return static_cast<std::size_t>(*i);
                }
                if (const auto* d = std::get_if<double>(&it->second); d && *d >= 1.0) {
                    return static_cast<std::size_t>(*d);
                }
            }
        }
    }
    return insertion_order(index) + 1;
}

const std::vector<std::string>& EmbeddingSpace::labels() const {
    return store_ ? store_->labels : empty_labels();
}

const MetaRecord* EmbeddingSpace::metadata(std::string_view label) const {
    return metadata_ ? metadata_->find(label) : nullptr;
}

std::optional<MetaValue> EmbeddingSpace::lookup_meta(std::string_view label, std::string_view field) const {
    const auto* rec = metadata(label);
    if (!rec) return std::nullopt;
    auto it = rec->find(field);
    if (it == rec->end()) return std::nullopt;
    return it->second;
}

bool EmbeddingSpace::has_meta_field(std::string_view field) const {
    if (!metadata_) return false;
    for (const auto& [label, rec] : metadata_->records()) {
        if (rec.find(field) != rec.end()) return true;
    }
    return false;
}

EmbeddingSpace EmbeddingSpace::with_name(std::string name) const {
    EmbeddingSpace copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

EmbeddingSpace EmbeddingSpace::with_frequency_sorted(bool sorted) const {
    EmbeddingSpace copy = *this;
    copy.frequency_sorted_ = sorted;
    return copy;
}

EmbeddingSpace::Builder::Builder(std::string name, std::size_t dimension)
    : name_(std::move(name)), store_(std::make_shared<Store>()) {
    if (dimension == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    store_->dimension = dimension;
}

bool EmbeddingSpace::Builder::add(std::string label, std::span<const double> values) {
    return add(std::move(label), values, next_order_);
}

bool EmbeddingSpace::Builder::add(std::string label, std::span<const double> values, std::size_t order) {
    if (values.size() != store_->dimension) {
        throw Error(ErrorKind::DimensionMismatch, "vector for '" + label + "' has " +
                                                      std::to_string(values.size()) + " components, expected " +
                                                      std::to_string(store_->dimension))
            .about(label);
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::NonFinite, "vector for '" + label + "' has a non-finite component")
                .about(label);
        }
    }
    next_order_ = std::max(next_order_, order + 1);
    if (store_->index.contains(label)) {
        warnings_.push_back("duplicate label '" + label + "' ignored; keeping the first occurrence");
        return false;
    }
    store_->index.emplace(label, store_->labels.size());
    store_->labels.push_back(std::move(label));
    store_->data.insert(store_->data.end(), values.begin(), values.end());
    store_->order.push_back(order);
    return true;
}

EmbeddingSpace EmbeddingSpace::Builder::build(bool normalized) && {
    EmbeddingSpace space;
    space.name_ = std::move(name_);
    space.store_ = std::move(store_);
    space.normalized_ = normalized;
    space.warnings_ = std::move(warnings_);
    return space;
}

// ---------------------------------------------------------------------------
// operations

EmbeddingSpace load_space(std::istream& source, std::string name) {
    std::optional<EmbeddingSpace::Builder> builder;
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    std::size_t record = 0;

    while (std::getline(source, line)) {
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() < 2) {
            throw Error(ErrorKind::DimensionMismatch,
                        "line " + std::to_string(line_no) + " has a label but no vector components")
                .at_line(line_no);
        }
        const std::size_t arity = fields.size() - 1;
        if (!builder) builder.emplace(name, arity);
        values.clear();
        for (std::size_t i = 1; i < fields.size(); ++i) {
            auto v = parse_real(fields[i]);
            if (!v) {
                throw Error(ErrorKind::MalformedNumber, "line " + std::to_string(line_no) +
                                                            ": malformed number '" + std::string(fields[i]) +
                                                            "'")
                    .at_line(line_no);
            }
            values.push_back(*v);
        }
        try {
            builder->add(std::string(fields[0]), values, record);
        } catch (Error& e) {
            if (e.kind() == ErrorKind::DimensionMismatch) {
                throw Error(ErrorKind::DimensionMismatch,
                            "line " + std::to_string(line_no) + ": " + e.what())
                    .at_line(line_no)
                    .about(std::string(fields[0]));
            }
            throw;
        }
        ++record;
    }
    if (!builder) throw Error(ErrorKind::EmptyInput, "vector source '" + name + "' has no data lines");
    return std::move(*builder).build(false);
}

EmbeddingSpace load_space_file(const std::string& path, std::string name) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open vector file '" + path + "'").about(path);
    return load_space(in, std::move(name));
}

EmbeddingSpace normalize(const EmbeddingSpace& space) {
    EmbeddingSpace::Builder builder(space.name(), std::max<std::size_t>(space.dimension(), 1));
    for (const auto& w : space.warnings()) builder.warn(w);
    std::vector<double> unit(space.dimension());
    for (std::size_t i = 0; i < space.size(); ++i) {
        auto v = space.vector_at(i);
        double n = norm(v);
        if (n == 0.0) {
            builder.warn("zero vector for '" + space.label_at(i) + "' dropped during normalization");
            continue;
        }
        for (std::size_t j = 0; j < v.size(); ++j) unit[j] = v[j] / n;
        builder.add(space.label_at(i), unit, space.insertion_order(i));
    }
    EmbeddingSpace out = std::move(builder).build(true);
    out.metadata_ = space.metadata_;
    out.frequency_sorted_ = space.frequency_sorted_;
    return out;
}

AttachResult attach_metadata(const EmbeddingSpace& space, const MetadataTable& table) {
    auto merged = space.metadata_ ? std::make_shared<MetadataTable>(*space.metadata_)
                                  : std::make_shared<MetadataTable>();
    std::size_t ignored = 0;
    for (const auto& [label, rec] : table.records()) {
        if (!space.contains(label)) {
            ++ignored;
            continue;
        }
        for (const auto& [field, value] : rec) merged->set(label, field, value);
    }
    AttachResult result{space, ignored};
    result.space.metadata_ = std::move(merged);
    if (ignored > 0) {
        result.space.warnings_.push_back(std::to_string(ignored) +
                                         " metadata label(s) not present in space '" + space.name() +
                                         "' were ignored");
    }
    return result;
}

std::vector<Neighbor> nearest(const EmbeddingSpace& space, std::span<const double> query, std::size_t k,
                              Measure measure) {
    if (query.size() != space.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, "query has " + std::to_string(query.size()) +
                                                      " components, space '" + space.name() + "' has " +
                                                      std::to_string(space.dimension()));
    }
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be positive");

    double query_norm = norm(query);
    if (measure == Measure::Cosine && query_norm == 0.0) {
        throw Error(ErrorKind::ZeroNorm, "cosine nearest-neighbor query is a zero vector");
    }

    struct Scored {
        std::size_t index;
        double score;
    };
    std::vector<Scored> scored;
    scored.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        auto v = space.vector_at(i);
        double s = 0.0;
        switch (measure) {
            case Measure::Cosine: {
                double n = norm(v);
                if (n == 0.0) continue;
                s = std::clamp(dot(v, query) / (n * query_norm), -1.0, 1.0);
                break;
            }
            case Measure::Dot: s = dot(v, query); break;
            case Measure::Euclidean: s = euclidean(v, query); break;
        }
        scored.push_back({i, s});
    }

    const bool ascending = is_distance(measure);
    auto better = [&](const Scored& a, const Scored& b) {
        if (a.score != b.score) return ascending ? a.score < b.score : a.score > b.score;
        return space.insertion_order(a.index) < space.insertion_order(b.index);
    };
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);

    std::vector<Neighbor> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back({space.label_at(scored[i].index), scored[i].score});
    return out;
}

}  // namespace vecaxis
