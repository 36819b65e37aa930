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

#include "vecaxis/formula.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "vecaxis/error.hpp"

namespace vecaxis {

namespace {

constexpr std::size_t kVariadic = std::numeric_limits<std::size_t>::max();

constexpr std::array<Builtin, 5> kBuiltins{{
    {"avg", 1, kVariadic, ValueType::Vector},
    {"nqnot", 2, 2, ValueType::Vector},
    {"unit", 1, 1, ValueType::Vector},
    {"norm", 1, 1, ValueType::Scalar},
    {"dot", 2, 2, ValueType::Scalar},
}};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_operator(char c) { return c == '+' || c == '-' || c == '*' || c == '/'; }
bool is_delimiter(char c) { return c == '(' || c == ')' || c == ',' || c == '"'; }
bool is_label_char(char c) { return !is_space(c) && !is_operator(c) && !is_delimiter(c); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// [digits][.digits][e digits], at least one digit in the mantissa.
bool is_number_literal(std::string_view s) {
    std::size_t i = 0;
    std::size_t mantissa_digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++mantissa_digits;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i, ++mantissa_digits;
    }
    if (mantissa_digits == 0) return false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        std::size_t exp_digits = 0;
        while (i < s.size() && is_digit(s[i])) ++i, ++exp_digits;
        if (exp_digits == 0) return false;
    }
    return i == s.size();
}

const char* type_name(ValueType t) { return t == ValueType::Scalar ? "scalar" : "vector"; }

[[noreturn]] void type_error(std::size_t offset, const std::string& message) {
    throw Error(ErrorKind::TypeError, "type error at offset " + std::to_string(offset) + ": " + message)
        .at_offset(offset);
}

NodePtr make(NodeKind kind, ValueType type, std::string name, double value, std::vector<NodePtr> args,
             std::size_t offset) {
    return std::make_shared<const Node>(Node{kind, type, std::move(name), value, std::move(args), offset});
}

// ---------------------------------------------------------------------------
// lexer

enum class Tok { End, Number, Label, String, Plus, Minus, Star, Slash, LParen, RParen, Comma };

struct Token {
    Tok kind;
    std::size_t offset;
    std::size_t end;
    std::string text;  // decoded label/string text
    double number = 0.0;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Number: return "number '" + t.text + "'";
        case Tok::Label: return "label '" + t.text + "'";
        case Tok::String: return "string \"" + t.text + "\"";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
    }
    return "token";
}

class Parser {
public:
    Parser(std::string_view text, std::size_t pos) : text_(text), pos_(pos) { advance(); }

    NodePtr expression() {
        NodePtr lhs = term();
        while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
            const bool plus = tok_.kind == Tok::Plus;
            const std::size_t at = tok_.offset;
            advance();
            NodePtr rhs = term();
            lhs = plus ? ast::add(lhs, rhs, at) : ast::sub(lhs, rhs, at);
        }
        return lhs;
    }

    const Token& current() const { return tok_; }

    [[noreturn]] void fail(const std::string& expected) const {
        throw Error(ErrorKind::SyntaxError, "syntax error at offset " + std::to_string(tok_.offset) +
                                                ": expected " + expected + ", found " + describe(tok_))
            .at_offset(tok_.offset);
    }

private:
    NodePtr term() {
        NodePtr lhs = unary();
        while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
            const bool star = tok_.kind == Tok::Star;
            const std::size_t at = tok_.offset;
            advance();
            NodePtr rhs = unary();
            lhs = star ? ast::mul(lhs, rhs, at) : ast::div(lhs, rhs, at);
        }
        return lhs;
    }

    NodePtr unary() {
        if (tok_.kind == Tok::Minus) {
            const std::size_t at = tok_.offset;
            advance();
            return ast::negate(unary(), at);
        }
        return primary();
    }

    NodePtr primary() {
        Token t = tok_;
        switch (t.kind) {
            case Tok::Number:
                advance();
                return ast::scalar(t.number, t.offset);
            case Tok::String:
                advance();
                return ast::label(std::move(t.text), t.offset);
            case Tok::Label: {
                advance();
                // A call needs '(' directly after the name.
                if (tok_.kind == Tok::LParen && tok_.offset == t.end) {
                    advance();
                    std::vector<NodePtr> args;
                    if (tok_.kind != Tok::RParen) {
                        args.push_back(expression());
                        while (tok_.kind == Tok::Comma) {
                            advance();
                            args.push_back(expression());
                        }
                    }
                    if (tok_.kind != Tok::RParen) fail("',' or ')'");
                    advance();
                    return ast::call(std::move(t.text), std::move(args), t.offset);
                }
                return ast::label(std::move(t.text), t.offset);
            }
            case Tok::LParen: {
                advance();
                NodePtr inner = expression();
                if (tok_.kind != Tok::RParen) fail("')'");
                advance();
                return inner;
            }
            default:
                fail("expression");
        }
    }

    void advance() {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
        tok_ = Token{Tok::End, pos_, pos_, {}, 0.0};
        if (pos_ >= text_.size()) return;

        const char c = text_[pos_];
        const std::size_t start = pos_;
        auto single = [&](Tok kind) {
            ++pos_;
            tok_ = Token{kind, start, pos_, {}, 0.0};
        };
        switch (c) {
            case '+': return single(Tok::Plus);
            case '-': return single(Tok::Minus);
            case '*': return single(Tok::Star);
            case '/': return single(Tok::Slash);
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case ',': return single(Tok::Comma);
            case '"': return string_literal();
            default: break;
        }
        while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
        std::string_view run = text_.substr(start, pos_ - start);
        if (is_number_literal(run)) {
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(run.data(), run.data() + run.size(), value);
            if (ec != std::errc() || !std::isfinite(value)) {
                throw Error(ErrorKind::SyntaxError, "syntax error at offset " + std::to_string(start) +
                                                        ": number '" + std::string(run) + "' is out of range")
                    .at_offset(start);
            }
            tok_ = Token{Tok::Number, start, pos_, std::string(run), value};
        } else {
            tok_ = Token{Tok::Label, start, pos_, std::string(run), 0.0};
        }
    }

    void string_literal() {
        const std::size_t start = pos_++;
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '"') {
                ++pos_;
                tok_ = Token{Tok::String, start, pos_, std::move(out), 0.0};
                return;
            }
            if (c == '\\') {
                if (pos_ + 1 < text_.size() && (text_[pos_ + 1] == '"' || text_[pos_ + 1] == '\\')) {
                    out.push_back(text_[pos_ + 1]);
                    pos_ += 2;
                    continue;
                }
                throw Error(ErrorKind::SyntaxError, "syntax error at offset " + std::to_string(pos_) +
                                                        ": expected '\\\"' or '\\\\' escape")
                    .at_offset(pos_);
            }
            out.push_back(c);
            ++pos_;
        }
        throw Error(ErrorKind::SyntaxError, "syntax error at offset " + std::to_string(text_.size()) +
                                                ": expected closing '\"' for string starting at offset " +
                                                std::to_string(start))
            .at_offset(text_.size());
    }

    std::string_view text_;
    std::size_t pos_;
    Token tok_{Tok::End, 0, 0, {}, 0.0};
};

// ---------------------------------------------------------------------------
// formatting

int precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Negate: return 3;
        default: return 4;
    }
}

std::string format_label(const std::string& label) {
    bool bare = !label.empty() && !is_number_literal(label);
    for (char c : label) bare = bare && is_label_char(c);
    if (bare) return label;
    std::string out = "\"";
    for (char c : label) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_scalar(double v) {
    // Fixed notation only: an exponent sign would read back as an operator.
    std::array<char, 400> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    return std::string(buf.data(), ptr);
}

void format_into(const Node& n, std::string& out) {
    auto child = [&](const Node& c, bool parens) {
        if (parens) out.push_back('(');
        format_into(c, out);
        if (parens) out.push_back(')');
    };
    switch (n.kind) {
        case NodeKind::Label: out += format_label(n.name); return;
        case NodeKind::Scalar: out += format_scalar(n.value); return;
        case NodeKind::Negate:
            out.push_back('-');
            child(*n.args[0], precedence(*n.args[0]) < 3);
            return;
        case NodeKind::Call:
            out += n.name;
            out.push_back('(');
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i > 0) out += ", ";
                format_into(*n.args[i], out);
            }
            out.push_back(')');
            return;
        default: break;
    }
    const int p = precedence(n);
    const char* op = n.kind == NodeKind::Add ? " + " : n.kind == NodeKind::Sub ? " - " : n.kind == NodeKind::Mul ? " * " : " / ";
    child(*n.args[0], precedence(*n.args[0]) < p);
    out += op;
    child(*n.args[1], precedence(*n.args[1]) <= p);
}

void collect_labels(const Node& n, std::set<std::string>& out) {
    if (n.kind == NodeKind::Label) out.insert(n.name);
    for (const auto& a : n.args) collect_labels(*a, out);
}

// ---------------------------------------------------------------------------
// evaluation

Vector& as_vector(Value& v) { return std::get<Vector>(v); }

class Evaluator {
public:
    explicit Evaluator(const EmbeddingSpace& space) : space_(space) {}

    Value eval(const Node& n) const {
        switch (n.kind) {
            case NodeKind::Label: {
                auto idx = space_.index_of(n.name);
                if (!idx) {
                    throw Error(ErrorKind::UnknownLabel, "label '" + n.name + "' at offset " +
                                                             std::to_string(n.offset) + " is not in space '" +
                                                             space_.name() + "'")
                        .at_offset(n.offset)
                        .about(n.name);
                }
                auto v = space_.vector_at(*idx);
                return Vector(v.begin(), v.end());
            }
            case NodeKind::Scalar: return n.value;
            case NodeKind::Negate: {
                Value v = eval(*n.args[0]);
                if (auto* s = std::get_if<double>(&v)) return -*s;
                for (double& x : as_vector(v)) x = -x;
                return v;
            }
            case NodeKind::Add:
            case NodeKind::Sub: {
                Value a = eval(*n.args[0]);
                Value b = eval(*n.args[1]);
                const double sign = n.kind == NodeKind::Add ? 1.0 : -1.0;
                if (auto* s = std::get_if<double>(&a)) return *s + sign * std::get<double>(b);
                Vector& va = as_vector(a);
                const Vector& vb = std::get<Vector>(b);
                for (std::size_t i = 0; i < va.size(); ++i) va[i] += sign * vb[i];
                return a;
            }
            case NodeKind::Mul: {
                Value a = eval(*n.args[0]);
                Value b = eval(*n.args[1]);
                if (std::holds_alternative<double>(a) && std::holds_alternative<double>(b)) {
                    return std::get<double>(a) * std::get<double>(b);
                }
                const bool scalar_first = std::holds_alternative<double>(a);
                const double s = scalar_first ? std::get<double>(a) : std::get<double>(b);
                Vector v = scalar_first ? std::move(as_vector(b)) : std::move(as_vector(a));
                for (double& x : v) x *= s;
                return v;
            }
            case NodeKind::Div: {
                Value a = eval(*n.args[0]);
                const double d = std::get<double>(eval(*n.args[1]));
                if (d == 0.0) {
                    throw Error(ErrorKind::DivisionByZero,
                                "division by zero at offset " + std::to_string(n.offset))
                        .at_offset(n.offset);
                }
                if (auto* s = std::get_if<double>(&a)) return *s / d;
                for (double& x : as_vector(a)) x /= d;
                return a;
            }
            case NodeKind::Call: return call(n);
        }
        return 0.0;
    }

private:
    Value call(const Node& n) const {
        std::vector<Value> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args) args.push_back(eval(*a));

        if (n.name == "avg") {
            Vector sum = std::move(as_vector(args[0]));
            for (std::size_t k = 1; k < args.size(); ++k) {
                const Vector& v = std::get<Vector>(args[k]);
                for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
            }
            const double count = static_cast<double>(args.size());
            for (double& x : sum) x /= count;
            return sum;
        }
        if (n.name == "nqnot") {
            try {
                return nqnot(std::get<Vector>(args[0]), std::get<Vector>(args[1]));
            } catch (Error& e) {
                e.at_offset(n.offset);
                throw;
            }
        }
        if (n.name == "unit") {
            Vector v = std::move(as_vector(args[0]));
            const double len = norm(v);
            if (len == 0.0) {
                throw Error(ErrorKind::ZeroNorm, "unit() of a zero vector at offset " + std::to_string(n.offset))
                    .at_offset(n.offset);
            }
            for (double& x : v) x /= len;
            return v;
        }
        if (n.name == "norm") return norm(std::get<Vector>(args[0]));
        if (n.name == "dot") return dot(std::get<Vector>(args[0]), std::get<Vector>(args[1]));
        throw Error(ErrorKind::UnknownFunction, "unknown function '" + n.name + "'").at_offset(n.offset);
    }

    const EmbeddingSpace& space_;
};

}  // namespace

// ---------------------------------------------------------------------------
// public API

bool structurally_equal(const Node& a, const Node& b) noexcept {
    if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) return false;
    if (a.kind == NodeKind::Scalar && !(a.value == b.value)) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    }
    return true;
}

std::span<const Builtin> builtins() noexcept { return kBuiltins; }

const Builtin* find_builtin(std::string_view name) noexcept {
    for (const auto& b : kBuiltins) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

namespace ast {

NodePtr label(std::string text, std::size_t offset) {
    return make(NodeKind::Label, ValueType::Vector, std::move(text), 0.0, {}, offset);
}

NodePtr scalar(double value, std::size_t offset) {
    return make(NodeKind::Scalar, ValueType::Scalar, {}, value, {}, offset);
}

NodePtr add(NodePtr lhs, NodePtr rhs, std::size_t offset) {
    if (lhs->type != rhs->type) {
        type_error(offset, std::string("cannot add ") + type_name(lhs->type) + " and " + type_name(rhs->type));
    }
    ValueType t = lhs->type;
    return make(NodeKind::Add, t, {}, 0.0, {std::move(lhs), std::move(rhs)}, offset);
}

NodePtr sub(NodePtr lhs, NodePtr rhs, std::size_t offset) {
    if (lhs->type != rhs->type) {
        type_error(offset,
                   std::string("cannot subtract ") + type_name(rhs->type) + " from " + type_name(lhs->type));
    }
    ValueType t = lhs->type;
    return make(NodeKind::Sub, t, {}, 0.0, {std::move(lhs), std::move(rhs)}, offset);
}

NodePtr mul(NodePtr lhs, NodePtr rhs, std::size_t offset) {
    if (lhs->type == ValueType::Vector && rhs->type == ValueType::Vector) {
        type_error(offset, "cannot multiply two vectors; use dot(a, b)");
    }
    ValueType t = (lhs->type == ValueType::Vector || rhs->type == ValueType::Vector) ? ValueType::Vector
                                                                                     : ValueType::Scalar;
    return make(NodeKind::Mul, t, {}, 0.0, {std::move(lhs), std::move(rhs)}, offset);
}

NodePtr div(NodePtr lhs, NodePtr rhs, std::size_t offset) {
    if (rhs->type == ValueType::Vector) type_error(offset, "cannot divide by a vector");
    ValueType t = lhs->type;
    return make(NodeKind::Div, t, {}, 0.0, {std::move(lhs), std::move(rhs)}, offset);
}

NodePtr negate(NodePtr operand, std::size_t offset) {
    ValueType t = operand->type;
    return make(NodeKind::Negate, t, {}, 0.0, {std::move(operand)}, offset);
}

NodePtr call(std::string function, std::vector<NodePtr> args, std::size_t offset) {
    const Builtin* b = find_builtin(function);
    if (!b) {
        throw Error(ErrorKind::UnknownFunction,
                    "unknown function '" + function + "' at offset " + std::to_string(offset))
            .at_offset(offset)
            .about(function);
    }
    if (args.size() < b->min_arity || args.size() > b->max_arity) {
        std::string expected = b->max_arity == kVariadic ? "at least " + std::to_string(b->min_arity)
                                                         : std::to_string(b->min_arity);
        throw Error(ErrorKind::BadArity, function + "() takes " + expected + " argument(s), got " +
                                             std::to_string(args.size()) + " at offset " + std::to_string(offset))
            .at_offset(offset)
            .about(function);
    }
    for (const auto& a : args) {
        if (a->type != ValueType::Vector) {
            type_error(a->offset, "argument of " + function + "() must be a vector, got a scalar");
        }
    }
    return make(NodeKind::Call, b->result, std::move(function), 0.0, std::move(args), offset);
}

}  // namespace ast

Formula::Formula(NodePtr root) : root_(std::move(root)) {
    if (!root_) throw Error(ErrorKind::InvalidArgument, "formula root is null");
}

Formula parse_formula(std::string_view text) {
    Parser parser(text, 0);
    NodePtr root = parser.expression();
    if (parser.current().kind != Tok::End) parser.fail("operator or end of input");
    return Formula(std::move(root));
}

PrefixParse parse_formula_prefix(std::string_view text, std::size_t pos) {
    Parser parser(text, pos);
    NodePtr root = parser.expression();
    const Token& next = parser.current();
    if (next.kind != Tok::End && next.kind != Tok::RParen && next.kind != Tok::Comma) {
        parser.fail("operator, ',' or ')'");
    }
    return {Formula(std::move(root)), next.offset};
}

std::string format(const Node& node) {
    std::string out;
    format_into(node, out);
    return out;
}

std::string format(const Formula& formula) { return format(formula.root()); }

std::set<std::string> free_labels(const Formula& formula) {
    std::set<std::string> out;
    collect_labels(formula.root(), out);
    return out;
}

Value evaluate_value(const Formula& formula, const EmbeddingSpace& space) {
    return Evaluator(space).eval(formula.root());
}

Vector evaluate(const Formula& formula, const EmbeddingSpace& space) {
    if (formula.type() != ValueType::Vector) {
        type_error(formula.root().offset, "formula '" + format(formula) + "' is a scalar, expected a vector");
    }
    return std::get<Vector>(evaluate_value(formula, space));
}

Vector nqnot(std::span<const double> a, std::span<const double> b) {
    const double bb = dot(b, b);
    if (bb == 0.0) throw Error(ErrorKind::ZeroNorm, "nqnot(a, b) is undefined for |b| = 0");
    const double coeff = dot(a, b) / bb;
    Vector out(a.begin(), a.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= coeff * b[i];
    return out;
}

}  // namespace vecaxis
