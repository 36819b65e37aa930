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

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace vecaxis {

using Vector = std::vector<double>;

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

/// Cosine and dot are similarities (larger is closer); euclidean is a distance.
enum class Measure { Cosine, Dot, Euclidean };

std::string_view to_string(Measure measure) noexcept;

/// Accepts "cosine"/"cos", "dot", "euclidean"/"euclid"/"l2". Throws
/// InvalidArgument otherwise.
Measure parse_measure(std::string_view name);

inline bool is_distance(Measure measure) noexcept { return measure == Measure::Euclidean; }

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm(std::span<const double> v) noexcept;
double euclidean(std::span<const double> a, std::span<const double> b) noexcept;

/// Cosine similarity clamped to [-1, 1]. Throws ZeroNorm if either vector is zero.
double cosine(std::span<const double> a, std::span<const double> b);

/// Applies `measure` to (item, axis). Cosine throws ZeroNorm for zero inputs.
double apply_measure(Measure measure, std::span<const double> item, std::span<const double> axis);

// ---------------------------------------------------------------------------
// Metadata
// ---------------------------------------------------------------------------

using MetaValue = std::variant<std::string, std::int64_t, double>;
using MetaRecord = std::map<std::string, MetaValue, std::less<>>;

/// Per-label metadata. Labels without a record are allowed.
class MetadataTable {
public:
    void set(const std::string& label, const std::string& field, MetaValue value);
    const MetaRecord* find(std::string_view label) const;
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    const std::unordered_map<std::string, MetaRecord>& records() const noexcept { return records_; }

private:
    std::unordered_map<std::string, MetaRecord> records_;
};

/// Reads a tab-separated table whose header row starts with "label". A column
/// whose every non-empty cell parses as an integer is stored as integers, one
/// whose every non-empty cell parses as a real number as reals, anything else
/// as strings. Empty cells are left unset.
MetadataTable load_metadata(std::istream& in);

std::string meta_to_string(const MetaValue& value);

// ---------------------------------------------------------------------------
// EmbeddingSpace
// ---------------------------------------------------------------------------

struct Neighbor {
    std::string label;
    double score;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct AttachResult;
class EmbeddingSpace;
EmbeddingSpace normalize(const EmbeddingSpace& space);

/// Immutable label -> vector table. Copies are cheap: vector storage and
/// metadata are shared between a space and the spaces derived from it.
class EmbeddingSpace {
public:
    class Builder;

    EmbeddingSpace() = default;

    const std::string& name() const noexcept { return name_; }
    std::size_t dimension() const noexcept { return store_ ? store_->dimension : 0; }
    std::size_t size() const noexcept { return store_ ? store_->labels.size() : 0; }
    bool normalized() const noexcept { return normalized_; }
    bool frequency_sorted() const noexcept { return frequency_sorted_; }

    bool contains(std::string_view label) const;
    std::optional<std::size_t> index_of(std::string_view label) const;

    /// Throws UnknownLabel.
    std::span<const double> lookup(std::string_view label) const;

    const std::string& label_at(std::size_t index) const { return store_->labels[index]; }
    std::span<const double> vector_at(std::size_t index) const {
        return {store_->data.data() + index * store_->dimension, store_->dimension};
    }
    /// Position of the entry in the source file (0-based); survives normalize().
    std::size_t insertion_order(std::size_t index) const { return store_->order[index]; }

    /// 1-based frequency rank. A numeric "rank" metadata field overrides the
    /// insertion order.
    std::size_t frequency_rank(std::size_t index) const;

    const std::vector<std::string>& labels() const;

    const MetaRecord* metadata(std::string_view label) const;
    std::optional<MetaValue> lookup_meta(std::string_view label, std::string_view field) const;
    bool has_meta_field(std::string_view field) const;
    bool has_metadata() const noexcept { return metadata_ && !metadata_->empty(); }

    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    EmbeddingSpace with_name(std::string name) const;
    EmbeddingSpace with_frequency_sorted(bool sorted) const;

private:
    struct Store {
        std::size_t dimension = 0;
        std::vector<std::string> labels;
        std::vector<double> data;
        std::vector<std::size_t> order;
        std::unordered_map<std::string, std::size_t> index;
    };

    friend EmbeddingSpace normalize(const EmbeddingSpace& space);
    friend AttachResult attach_metadata(const EmbeddingSpace& space, const MetadataTable& table);

    std::string name_;
    std::shared_ptr<const Store> store_;
    std::shared_ptr<const MetadataTable> metadata_;
    bool normalized_ = false;
    bool frequency_sorted_ = true;
    std::vector<std::string> warnings_;
};

/// Accumulates entries in insertion order. Duplicate labels keep the first
/// entry and record a warning.
class EmbeddingSpace::Builder {
public:
    Builder(std::string name, std::size_t dimension);

    /// Returns false (and records a warning) if the label already exists.
    /// Throws DimensionMismatch or NonFinite for a bad vector.
    bool add(std::string label, std::span<const double> values);
    bool add(std::string label, std::span<const double> values, std::size_t order);
    void warn(std::string message) { warnings_.push_back(std::move(message)); }

    std::size_t size() const noexcept { return store_->labels.size(); }
    EmbeddingSpace build(bool normalized = false) &&;

private:
    std::string name_;
    std::shared_ptr<Store> store_;
    std::vector<std::string> warnings_;
    std::size_t next_order_ = 0;
};

/// Parses GloVe-style text: each non-blank line is a label followed by d reals
/// separated by spaces or tabs. The first data line fixes d.
/// Errors: EmptyInput, DimensionMismatch (with line), MalformedNumber (with line).
EmbeddingSpace load_space(std::istream& source, std::string name);
EmbeddingSpace load_space_file(const std::string& path, std::string name);

/// Unit-normalizes every vector; zero vectors are dropped with a warning.
EmbeddingSpace normalize(const EmbeddingSpace& space);

struct AttachResult {
    EmbeddingSpace space;
    std::size_t ignored = 0;  // table labels absent from the space
};

/// Merges metadata per label and field (last write wins).
AttachResult attach_metadata(const EmbeddingSpace& space, const MetadataTable& table);

/// k best entries for `query` under `measure`, sorted by descending similarity
/// (ascending distance for euclidean); ties broken by insertion order. Under
/// cosine, zero vectors in the space are skipped. Throws DimensionMismatch,
/// ZeroNorm (cosine with zero query) or InvalidArgument (k == 0).
std::vector<Neighbor> nearest(const EmbeddingSpace& space, std::span<const double> query,
                              std::size_t k, Measure measure);

}  // namespace vecaxis
