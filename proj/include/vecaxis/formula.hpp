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

// Vector-algebra formulae over embedding labels.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := NUMBER | LABEL | STRING | CALL | '(' expr ')'
//   CALL    := LABEL '(' [expr (',' expr)*] ')'     no space before '('
//
// LABEL is a maximal run of bytes that are not whitespace, not one of
// + - * / and not one of ( ) , ".  A run that reads as an unsigned decimal
// number is a NUMBER instead.  STRING is a double-quoted label; a backslash
// escapes the next byte.  Use it for labels containing operators or that look like numbers.
// '-' is always an operator, so `king-man` is a subtraction.
//
// Builtins: avg(v, ...) nqnot(a, b) unit(v) -> vector; norm(v) dot(a, b) -> scalar.

#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vecaxis/embedding_store.hpp"

namespace vecaxis {

enum class ValueType { Scalar, Vector };

enum class NodeKind { Label, Scalar, Add, Sub, Mul, Div, Negate, Call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    ValueType type;
    std::string name;  // label text or function name
    double value = 0.0;
    std::vector<NodePtr> args;
    std::size_t offset = 0;  // byte offset of the node in the source text
};

/// Equality of kind, name, value and children; offsets and types are ignored.
bool structurally_equal(const Node& a, const Node& b) noexcept;

struct Builtin {
    std::string_view name;
    std::size_t min_arity;
    std::size_t max_arity;  // SIZE_MAX for variadic
    ValueType result;
};

/// Builtin function table; new functions are added here and in evaluate().
std::span<const Builtin> builtins() noexcept;
const Builtin* find_builtin(std::string_view name) noexcept;

/// Typed constructors. Each checks operand types and throws TypeError,
/// UnknownFunction or BadArity.
namespace ast {
NodePtr label(std::string text, std::size_t offset = 0);
NodePtr scalar(double value, std::size_t offset = 0);
NodePtr add(NodePtr lhs, NodePtr rhs, std::size_t offset = 0);
NodePtr sub(NodePtr lhs, NodePtr rhs, std::size_t offset = 0);
NodePtr mul(NodePtr lhs, NodePtr rhs, std::size_t offset = 0);
NodePtr div(NodePtr lhs, NodePtr rhs, std::size_t offset = 0);
NodePtr negate(NodePtr operand, std::size_t offset = 0);
NodePtr call(std::string function, std::vector<NodePtr> args, std::size_t offset = 0);
}  // namespace ast

class Formula {
public:
    explicit Formula(NodePtr root);

    const Node& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }
    ValueType type() const noexcept { return root_->type; }

    friend bool operator==(const Formula& a, const Formula& b) noexcept {
        return structurally_equal(*a.root_, *b.root_);
    }

private:
    NodePtr root_;
};

/// Throws SyntaxError (with byte offset), TypeError, UnknownFunction, BadArity.
Formula parse_formula(std::string_view text);

struct PrefixParse {
    Formula formula;
    std::size_t end;  // offset of the first byte not consumed
};

/// Parses one expression starting at `pos` and stops before a token that
/// cannot continue it (a ')' or ',' at nesting depth zero, or end of input).
/// Offsets in errors are relative to the start of `text`.
PrefixParse parse_formula_prefix(std::string_view text, std::size_t pos);

/// Canonical text with minimal parentheses. Never simplifies.
std::string format(const Formula& formula);
std::string format(const Node& node);

/// Labels used as atoms, deduplicated.
std::set<std::string> free_labels(const Formula& formula);

using Value = std::variant<double, Vector>;

/// Throws UnknownLabel (offset = atom position), ZeroNorm, DivisionByZero.
Value evaluate_value(const Formula& formula, const EmbeddingSpace& space);

/// Like evaluate_value, but the formula must be vector-valued (TypeError otherwise).
Vector evaluate(const Formula& formula, const EmbeddingSpace& space);

/// a - ((a.b) / |b|^2) b. Throws ZeroNorm when |b| = 0.
Vector nqnot(std::span<const double> a, std::span<const double> b);

}  // namespace vecaxis
