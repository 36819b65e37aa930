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

#include "vecaxis/filtering.hpp"

#include <charconv>
#include <cmath>
#include <optional>

#include "vecaxis/error.hpp"

namespace vecaxis {

std::string_view to_string(CompareOp op) noexcept {
    switch (op) {
        case CompareOp::Eq: return "==";
        case CompareOp::Ne: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
    }
    return "==";
}

bool compare_values(double lhs, CompareOp op, double rhs) noexcept {
    switch (op) {
        case CompareOp::Eq: return lhs == rhs;
        case CompareOp::Ne: return lhs != rhs;
        case CompareOp::Lt: return lhs < rhs;
        case CompareOp::Le: return lhs <= rhs;
        case CompareOp::Gt: return lhs > rhs;
        case CompareOp::Ge: return lhs >= rhs;
    }
    return false;
}

namespace {

template <typename T>
bool compare_ordered(const T& lhs, CompareOp op, const T& rhs) {
    switch (op) {
        case CompareOp::Eq: return lhs == rhs;
        case CompareOp::Ne: return lhs != rhs;
        case CompareOp::Lt: return lhs < rhs;
        case CompareOp::Le: return lhs <= rhs;
        case CompareOp::Gt: return lhs > rhs;
        case CompareOp::Ge: return lhs >= rhs;
    }
    return false;
}

std::optional<double> as_number(const MetaValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::nullopt;
}

// nullopt when the two values are not comparable (string vs number).
std::optional<bool> compare_meta(const MetaValue& lhs, CompareOp op, const MetaValue& rhs) {
    const auto* ls = std::get_if<std::string>(&lhs);
    const auto* rs = std::get_if<std::string>(&rhs);
    if (ls && rs) return compare_ordered(*ls, op, *rs);
    if (ls || rs) return std::nullopt;
    if (std::holds_alternative<std::int64_t>(lhs) && std::holds_alternative<std::int64_t>(rhs)) {
        return compare_ordered(std::get<std::int64_t>(lhs), op, std::get<std::int64_t>(rhs));
    }
    return compare_values(*as_number(lhs), op, *as_number(rhs));
}

using Mask = std::vector<char>;

class MaskEvaluator {
public:
    MaskEvaluator(const EmbeddingSpace& space, std::vector<std::string>& warnings)
        : space_(space), warnings_(warnings) {}

    Mask eval(const FilterRule& rule) {
        const std::size_t n = space_.size();
        switch (rule.kind()) {
            case FilterRule::Kind::And: {
                Mask m(n, 1);
                for (const auto& child : rule.children()) {
                    Mask c = eval(child);
                    for (std::size_t i = 0; i < n; ++i) m[i] = m[i] && c[i];
                }
                return m;
            }
            case FilterRule::Kind::Or: {
                Mask m(n, 0);
                for (const auto& child : rule.children()) {
                    Mask c = eval(child);
                    for (std::size_t i = 0; i < n; ++i) m[i] = m[i] || c[i];
                }
                return m;
            }
            case FilterRule::Kind::Not: {
                Mask m = eval(rule.children().front());
                for (auto& v : m) v = !v;
                return m;
            }
            case FilterRule::Kind::MetaCompare: return meta(rule);
            case FilterRule::Kind::RankAtMost:
            case FilterRule::Kind::RankGreaterThan: return rank(rule);
            case FilterRule::Kind::Similarity: return similarity(rule);
            case FilterRule::Kind::InLabelSet:
            case FilterRule::Kind::NotInLabelSet: {
                const bool want = rule.kind() == FilterRule::Kind::InLabelSet;
                Mask m(n);
                for (std::size_t i = 0; i < n; ++i) m[i] = rule.labels().contains(space_.label_at(i)) == want;
                return m;
            }
        }
        return Mask(n, 0);
    }

private:
    Mask meta(const FilterRule& rule) {
        const std::size_t n = space_.size();
        Mask m(n, 0);
        if (!space_.has_meta_field(rule.field())) {
            warnings_.push_back("unknown metadata field '" + rule.field() + "'; comparison is false for every label");
            return m;
        }
        std::size_t missing = 0;
        std::size_t mismatched = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto value = space_.lookup_meta(space_.label_at(i), rule.field());
            if (!value) {
                ++missing;
                continue;
            }
            auto r = compare_meta(*value, rule.op(), rule.value());
            if (!r) {
                ++mismatched;
                continue;
            }
            m[i] = *r;
        }
        if (missing > 0) {
            warnings_.push_back("metadata field '" + rule.field() + "' is missing for " + std::to_string(missing) +
                                " label(s); treated as non-matching");
        }
        if (mismatched > 0) {
            warnings_.push_back("metadata field '" + rule.field() + "' has a different type than the compared value for " +
                                std::to_string(mismatched) + " label(s); treated as non-matching");
        }
        return m;
    }

    Mask rank(const FilterRule& rule) {
        if (!space_.frequency_sorted() && !space_.has_meta_field("rank") && !rank_warned_) {
            warnings_.push_back("space '" + space_.name() +
                                "' is not frequency-sorted and has no rank metadata; rank filters use load order");
            rank_warned_ = true;
        }
        const bool at_most = rule.kind() == FilterRule::Kind::RankAtMost;
        Mask m(space_.size());
        for (std::size_t i = 0; i < space_.size(); ++i) {
            const std::size_t r = space_.frequency_rank(i);
            m[i] = at_most ? r <= rule.rank() : r > rule.rank();
        }
        return m;
    }

    Mask similarity(const FilterRule& rule) {
        const Vector axis = evaluate(rule.formula(), space_);
        const bool cos = rule.measure() == Measure::Cosine;
        const double axis_norm = norm(axis);
        if (cos && axis_norm == 0.0) {
            throw Error(ErrorKind::ZeroNorm, "similarity filter formula '" + format(rule.formula()) +
                                                 "' evaluates to a zero vector");
        }
        Mask m(space_.size(), 0);
        std::size_t skipped = 0;
        for (std::size_t i = 0; i < space_.size(); ++i) {
            auto v = space_.vector_at(i);
            if (cos && norm(v) == 0.0) {
                ++skipped;
                continue;
            }
            m[i] = compare_values(apply_measure(rule.measure(), v, axis), rule.op(), rule.threshold());
        }
        if (skipped > 0) {
            warnings_.push_back(std::to_string(skipped) + " zero vector(s) excluded from a cosine similarity filter");
        }
        return m;
    }

    const EmbeddingSpace& space_;
    std::vector<std::string>& warnings_;
    bool rank_warned_ = false;
};

// ---------------------------------------------------------------------------
// text syntax

enum class FTok { End, Ident, Number, String, At, LParen, RParen, Comma, Op, And, Or, Not };

struct FToken {
    FTok kind;
    std::size_t offset;
    std::size_t end;
    std::string text;
    CompareOp op = CompareOp::Eq;
};

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

class FilterParser {
public:
    FilterParser(std::string_view text, const NamedSets& sets) : text_(text), sets_(sets) { advance(); }

    FilterRule parse() {
        FilterRule rule = disjunction();
        if (tok_.kind != FTok::End) fail("'and', 'or' or end of input");
        return rule;
    }

private:
    FilterRule disjunction() {
        std::vector<FilterRule> parts{conjunction()};
        while (tok_.kind == FTok::Or) {
            advance();
            parts.push_back(conjunction());
        }
        return parts.size() == 1 ? parts.front() : FilterRule::any_of(std::move(parts));
    }

    FilterRule conjunction() {
        std::vector<FilterRule> parts{unary()};
        while (tok_.kind == FTok::And) {
            advance();
            parts.push_back(unary());
        }
        return parts.size() == 1 ? parts.front() : FilterRule::all_of(std::move(parts));
    }

    FilterRule unary() {
        if (tok_.kind == FTok::Not) {
            advance();
            if (tok_.kind == FTok::Ident && tok_.text == "in" && peek_is('(')) {
                FilterRule inner = in_leaf();
                return FilterRule::not_in_set(inner.set_name(), inner.shared_labels());
            }
            return FilterRule::negate(unary());
        }
        if (tok_.kind == FTok::LParen) {
            advance();
            FilterRule inner = disjunction();
            expect(FTok::RParen, "')'");
            return inner;
        }
        return leaf();
    }

    FilterRule leaf() {
        if (tok_.kind != FTok::Ident) fail("a filter condition");
        const FToken head = tok_;
        if (head.text == "in" && peek_is('(')) return in_leaf();
        if (head.text == "sim" && peek_is('(')) return sim_leaf();
        advance();
        if (head.text == "rank") return rank_leaf();

        if (tok_.kind != FTok::Op) fail("comparison operator");
        const CompareOp op = tok_.op;
        advance();
        if (tok_.kind == FTok::String) {
            std::string value = tok_.text;
            advance();
            return FilterRule::meta(head.text, op, std::move(value));
        }
        if (tok_.kind == FTok::Number) {
            MetaValue value = parse_number_value(tok_);
            advance();
            return FilterRule::meta(head.text, op, std::move(value));
        }
        fail("string or number");
    }

    FilterRule rank_leaf() {
        if (tok_.kind != FTok::Op) fail("comparison operator");
        const CompareOp op = tok_.op;
        advance();
        if (tok_.kind != FTok::Number) fail("integer rank");
        std::size_t n = 0;
        auto [ptr, ec] = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), n);
        if (ec != std::errc() || ptr != tok_.text.data() + tok_.text.size()) fail("non-negative integer rank");
        advance();
        const std::size_t below = n == 0 ? 0 : n - 1;
        switch (op) {
            case CompareOp::Le: return FilterRule::rank_at_most(n);
            case CompareOp::Lt: return FilterRule::rank_at_most(below);
            case CompareOp::Gt: return FilterRule::rank_greater_than(n);
            case CompareOp::Ge: return FilterRule::rank_greater_than(below);
            case CompareOp::Eq:
                return FilterRule::all_of({FilterRule::rank_at_most(n), FilterRule::rank_greater_than(below)});
            case CompareOp::Ne:
                return FilterRule::negate(
                    FilterRule::all_of({FilterRule::rank_at_most(n), FilterRule::rank_greater_than(below)}));
        }
        fail("comparison operator");
    }

    FilterRule in_leaf() {
        advance();  // in
        expect(FTok::LParen, "'('");
        if (tok_.kind == FTok::At) {
            const std::size_t at = tok_.offset;
            advance();
            if (tok_.kind != FTok::Ident || tok_.offset != at + 1) fail("set name after '@'");
            const std::string name = tok_.text;
            auto it = sets_.find(name);
            if (it == sets_.end()) {
                throw Error(ErrorKind::UnknownSetName, "unknown label set '@" + name + "' at offset " + std::to_string(at))
                    .at_offset(at)
                    .about(name);
            }
            advance();
            expect(FTok::RParen, "')'");
            return FilterRule::in_set(name, it->second);
        }
        auto labels = std::make_shared<LabelSet>();
        if (tok_.kind != FTok::String) fail("'@name' or a quoted label");
        labels->insert(tok_.text);
        advance();
        while (tok_.kind == FTok::Comma) {
            advance();
            if (tok_.kind != FTok::String) fail("quoted label");
            labels->insert(tok_.text);
            advance();
        }
        expect(FTok::RParen, "')'");
        return FilterRule::in_set("", std::move(labels));
    }

    FilterRule sim_leaf() {
        advance();  // sim
        expect(FTok::LParen, "'('");
        if (tok_.kind != FTok::Ident) fail("measure name (cos, dot, euclidean)");
        Measure measure;
        try {
            measure = parse_measure(tok_.text);
        } catch (const Error&) {
            fail("measure name (cos, dot, euclidean)");
        }
        advance();
        if (tok_.kind != FTok::Comma) fail("','");
        PrefixParse formula = parse_formula_prefix(text_, tok_.end);
        pos_ = formula.end;
        advance();
        expect(FTok::RParen, "')'");
        if (tok_.kind != FTok::Op) fail("comparison operator");
        const CompareOp op = tok_.op;
        advance();
        if (tok_.kind != FTok::Number) fail("numeric threshold");
        const double threshold = number_of(tok_);
        advance();
        const std::size_t formula_offset = formula.formula.root().offset;
        try {
            return FilterRule::similarity(std::move(formula.formula), measure, op, threshold);
        } catch (Error& e) {
            if (!e.offset()) e.at_offset(formula_offset);
            throw;
        }
    }

    double number_of(const FToken& t) {
        double v = 0.0;
        std::string_view s = t.text;
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
            throw Error(ErrorKind::SyntaxError, "syntax error at offset " + std::to_string(t.offset) +
                                                    ": malformed number '" + t.text + "'")
                .at_offset(t.offset);
        }
        return v;
    }

    MetaValue parse_number_value(const FToken& t) {
        std::string_view s = t.text;
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        std::int64_t i = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
        if (ec == std::errc() && ptr == s.data() + s.size()) return i;
        return number_of(t);
    }

    bool peek_is(char c) const {
        std::size_t p = tok_.end;
        while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
        return p < text_.size() && text_[p] == c;
    }

    void expect(FTok kind, const char* what) {
        if (tok_.kind != kind) fail(what);
        advance();
    }

    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = tok_.kind == FTok::End ? "end of input" : "'" + std::string(text_.substr(tok_.offset, tok_.end - tok_.offset)) + "'";
        throw Error(ErrorKind::SyntaxError, "syntax error at offset " + std::to_string(tok_.offset) + ": expected " +
                                                expected + ", found " + found)
            .at_offset(tok_.offset);
    }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        auto set = [&](FTok kind, std::size_t len, CompareOp op = CompareOp::Eq) {
            pos_ += len;
            tok_ = FToken{kind, start, pos_, std::string(text_.substr(start, len)), op};
        };
        if (pos_ >= text_.size()) return set(FTok::End, 0);
        const char c = text_[pos_];
        const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
        switch (c) {
            case '(': return set(FTok::LParen, 1);
            case ')': return set(FTok::RParen, 1);
            case ',': return set(FTok::Comma, 1);
            case '@': return set(FTok::At, 1);
            case '=': return next == '=' ? set(FTok::Op, 2, CompareOp::Eq) : set(FTok::Op, 1, CompareOp::Eq);
            case '!':
                if (next == '=') return set(FTok::Op, 2, CompareOp::Ne);
                return set(FTok::Not, 1);
            case '<':
                if (next == '=') return set(FTok::Op, 2, CompareOp::Le);
                if (next == '>') return set(FTok::Op, 2, CompareOp::Ne);
                return set(FTok::Op, 1, CompareOp::Lt);
            case '>': return next == '=' ? set(FTok::Op, 2, CompareOp::Ge) : set(FTok::Op, 1, CompareOp::Gt);
            case '&':
                if (next == '&') return set(FTok::And, 2);
                break;
            case '|':
                if (next == '|') return set(FTok::Or, 2);
                break;
            case '"': return string_token();
            default: break;
        }
        if (is_ident_start(c)) {
            std::size_t end = pos_;
            while (end < text_.size() && is_ident_char(text_[end])) ++end;
            std::string_view word = text_.substr(start, end - start);
            if (word == "and") return set(FTok::And, end - start);
            if (word == "or") return set(FTok::Or, end - start);
            if (word == "not") return set(FTok::Not, end - start);
            return set(FTok::Ident, end - start);
        }
        if ((c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+') {
            std::size_t end = pos_ + 1;
            while (end < text_.size()) {
                const char d = text_[end];
                const bool exp_sign = (d == '-' || d == '+') && (text_[end - 1] == 'e' || text_[end - 1] == 'E');
                if ((d >= '0' && d <= '9') || d == '.' || d == 'e' || d == 'E' || exp_sign) {
                    ++end;
                } else {
                    break;
                }
            }
            return set(FTok::Number, end - start);
        }
        pos_ = start;
        tok_ = FToken{FTok::Ident, start, start + 1, std::string(1, c)};
        fail("a filter token");
    }

    void string_token() {
        const std::size_t start = pos_++;
        std::string out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '"') {
                ++pos_;
                tok_ = FToken{FTok::String, start, pos_, std::move(out)};
                return;
            }
            if (c == '\\' && pos_ + 1 < text_.size()) {
                out.push_back(text_[pos_ + 1]);
                pos_ += 2;
                continue;
            }
            out.push_back(c);
            ++pos_;
        }
        throw Error(ErrorKind::SyntaxError, "syntax error at offset " + std::to_string(text_.size()) +
                                                ": expected closing '\"'")
            .at_offset(text_.size());
    }

    std::string_view text_;
    const NamedSets& sets_;
    std::size_t pos_ = 0;
    FToken tok_{FTok::End, 0, 0, {}};
};

}  // namespace

// ---------------------------------------------------------------------------
// FilterRule

FilterRule FilterRule::all_of(std::vector<FilterRule> rules) {
    if (rules.empty()) throw Error(ErrorKind::InvalidArgument, "and() needs at least one rule");
    return FilterRule(std::make_shared<const Node>(Node{Kind::And, std::move(rules)}));
}

FilterRule FilterRule::any_of(std::vector<FilterRule> rules) {
    if (rules.empty()) throw Error(ErrorKind::InvalidArgument, "or() needs at least one rule");
    return FilterRule(std::make_shared<const Node>(Node{Kind::Or, std::move(rules)}));
}

FilterRule FilterRule::negate(FilterRule rule) {
    return FilterRule(std::make_shared<const Node>(Node{Kind::Not, {std::move(rule)}}));
}

FilterRule FilterRule::meta(std::string field, CompareOp op, MetaValue value) {
    if (const auto* d = std::get_if<double>(&value); d && !std::isfinite(*d)) {
        throw Error(ErrorKind::InvalidArgument, "metadata comparison value must be finite");
    }
    Node node{Kind::MetaCompare};
    node.field = std::move(field);
    node.op = op;
    node.value = std::move(value);
    return FilterRule(std::make_shared<const Node>(std::move(node)));
}

FilterRule FilterRule::rank_at_most(std::size_t n) {
    Node node{Kind::RankAtMost};
    node.rank = n;
    return FilterRule(std::make_shared<const Node>(std::move(node)));
}

FilterRule FilterRule::rank_greater_than(std::size_t n) {
    Node node{Kind::RankGreaterThan};
    node.rank = n;
    return FilterRule(std::make_shared<const Node>(std::move(node)));
}

FilterRule FilterRule::similarity(Formula formula, Measure measure, CompareOp op, double threshold) {
    if (formula.type() != ValueType::Vector) {
        throw Error(ErrorKind::TypeError, "similarity filter formula '" + format(formula) + "' must be vector-valued");
    }
    if (!std::isfinite(threshold)) throw Error(ErrorKind::InvalidArgument, "similarity threshold must be finite");
    Node node{Kind::Similarity};
    node.formula = std::make_shared<const Formula>(std::move(formula));
    node.measure = measure;
    node.op = op;
    node.threshold = threshold;
    return FilterRule(std::make_shared<const Node>(std::move(node)));
}

FilterRule FilterRule::in_set(std::string name, LabelSetPtr labels) {
    Node node{Kind::InLabelSet};
    node.field = std::move(name);
    node.labels = labels ? std::move(labels) : std::make_shared<const LabelSet>();
    return FilterRule(std::make_shared<const Node>(std::move(node)));
}

FilterRule FilterRule::not_in_set(std::string name, LabelSetPtr labels) {
    Node node{Kind::NotInLabelSet};
    node.field = std::move(name);
    node.labels = labels ? std::move(labels) : std::make_shared<const LabelSet>();
    return FilterRule(std::make_shared<const Node>(std::move(node)));
}

bool operator==(const FilterRule& a, const FilterRule& b) {
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind || x.children != y.children) return false;
    switch (x.kind) {
        case FilterRule::Kind::And:
        case FilterRule::Kind::Or:
        case FilterRule::Kind::Not: return true;
        case FilterRule::Kind::MetaCompare: return x.field == y.field && x.op == y.op && x.value == y.value;
        case FilterRule::Kind::RankAtMost:
        case FilterRule::Kind::RankGreaterThan: return x.rank == y.rank;
        case FilterRule::Kind::Similarity:
            return *x.formula == *y.formula && x.measure == y.measure && x.op == y.op && x.threshold == y.threshold;
        case FilterRule::Kind::InLabelSet:
        case FilterRule::Kind::NotInLabelSet: return x.field == y.field && *x.labels == *y.labels;
    }
    return false;
}

FilterResult apply_filter(const EmbeddingSpace& space, const FilterRule& rule) {
    FilterResult result;
    MaskEvaluator evaluator(space, result.warnings);
    const Mask mask = evaluator.eval(rule);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) result.labels.push_back(space.label_at(i));
    }
    return result;
}

FilterRule parse_filter(std::string_view text, const NamedSets& sets) { return FilterParser(text, sets).parse(); }

NamedSets default_named_sets() {
    static const LabelSetPtr stopwords = std::make_shared<const LabelSet>(english_stopwords());
    return NamedSets{{"stopwords", stopwords}};
}

}  // namespace vecaxis
