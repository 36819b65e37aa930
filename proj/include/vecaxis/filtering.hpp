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

// Item selection rules.
//
// Text syntax:
//
//   rule     := disj
//   disj     := conj ("or" conj)*
//   conj     := unary ("and" unary)*
//   unary    := "not" unary | "(" rule ")" | leaf
//   leaf     := "rank" OP INTEGER
//             | "sim" "(" MEASURE "," FORMULA ")" OP NUMBER
//             | "in" "(" ("@" NAME | STRING ("," STRING)*) ")"
//             | FIELD OP (STRING | NUMBER)
//   OP       := "==" | "=" | "!=" | "<>" | "<" | "<=" | ">" | ">="
//
// `&&`, `||` and `!` are accepted for and/or/not. FORMULA uses the formula
// grammar. `not in(...)` becomes a NotInLabelSet leaf.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "vecaxis/embedding_store.hpp"
#include "vecaxis/formula.hpp"

namespace vecaxis {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op) noexcept;
bool compare_values(double lhs, CompareOp op, double rhs) noexcept;

using LabelSet = std::unordered_set<std::string>;
using LabelSetPtr = std::shared_ptr<const LabelSet>;
using NamedSets = std::map<std::string, LabelSetPtr, std::less<>>;

/// The bundled English stopword list.
const LabelSet& english_stopwords();

/// {"stopwords": english_stopwords()}.
NamedSets default_named_sets();

class FilterRule {
public:
    enum class Kind { And, Or, Not, MetaCompare, RankAtMost, RankGreaterThan, Similarity, InLabelSet, NotInLabelSet };

    static FilterRule all_of(std::vector<FilterRule> rules);
    static FilterRule any_of(std::vector<FilterRule> rules);
    static FilterRule negate(FilterRule rule);
    static FilterRule meta(std::string field, CompareOp op, MetaValue value);
    static FilterRule rank_at_most(std::size_t n);
    static FilterRule rank_greater_than(std::size_t n);
    /// Throws TypeError for a scalar formula, InvalidArgument for a non-finite threshold.
    static FilterRule similarity(Formula formula, Measure measure, CompareOp op, double threshold);
    static FilterRule in_set(std::string name, LabelSetPtr labels);
    static FilterRule not_in_set(std::string name, LabelSetPtr labels);

    Kind kind() const noexcept { return node_->kind; }
    const std::vector<FilterRule>& children() const noexcept { return node_->children; }
    const std::string& field() const noexcept { return node_->field; }
    CompareOp op() const noexcept { return node_->op; }
    const MetaValue& value() const noexcept { return node_->value; }
    std::size_t rank() const noexcept { return node_->rank; }
    const Formula& formula() const { return *node_->formula; }
    Measure measure() const noexcept { return node_->measure; }
    double threshold() const noexcept { return node_->threshold; }
    const std::string& set_name() const noexcept { return node_->field; }
    const LabelSet& labels() const noexcept { return *node_->labels; }
    const LabelSetPtr& shared_labels() const noexcept { return node_->labels; }

    /// Same tree shape and leaves; label sets compare by content.
    friend bool operator==(const FilterRule& a, const FilterRule& b);

private:
    struct Node {
        Kind kind = Kind::And;
        std::vector<FilterRule> children{};
        std::string field{};  // metadata field or set name
        CompareOp op = CompareOp::Eq;
        MetaValue value{};
        std::size_t rank = 0;
        std::shared_ptr<const Formula> formula{};
        Measure measure = Measure::Cosine;
        double threshold = 0.0;
        LabelSetPtr labels{};
    };

    explicit FilterRule(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct FilterResult {
    std::vector<std::string> labels;  // insertion order
    std::vector<std::string> warnings;
};

/// Labels of `space` satisfying `rule`. Similarity formulae are evaluated once
/// per leaf. A metadata comparison on a label lacking the field (or holding a
/// value of another type) is false and produces a warning.
/// Throws UnknownLabel for formula atoms and ZeroNorm for a zero cosine axis.
FilterResult apply_filter(const EmbeddingSpace& space, const FilterRule& rule);

/// Throws SyntaxError (offset), UnknownSetName (offset), and the formula
/// parser's errors with offsets relative to `text`.
FilterRule parse_filter(std::string_view text, const NamedSets& sets = default_named_sets());

}  // namespace vecaxis
