// Copyright 2026 The depspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Textual Boolean function specifications.
//
//   spec   := body ('@' nat)?
//   body   := 'hex:' hexdigits | 'family:' id (':' args)? | expr
//   expr   := term ('|' term)*
//   term   := xfac ('&' xfac)*
//   xfac   := unary ('^' unary)*
//   unary  := '!' unary | 'x' nat | '0' | '1' | '(' expr ')'
//   args   := nat (',' nat)* | '{' nat (',' nat)* '}'
//
// Precedence is '!' > '^' > '&' > '|', all binary operators left associative.
// A bare expression takes n = largest variable index; '@n' may only enlarge it.
// Hex and family bodies need '@n'. Families also accept the arguments after the
// arity: "family:dictator@3:1" is the same as "family:dictator:1@3". For tribes
// the number after '@' is the block width and the argument is the block count.
//
// A hex literal of value V sets table bit i to bit i of V and has exactly
// ceil(2^n / 4) digits.

#include <cctype>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "depspec/core.hpp"

namespace depspec {

enum class ParseErrorKind { syntax, unknown_family, bad_arity, var_index_zero, n_mismatch, bad_hex_length };

inline std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::syntax:
            return "syntax";
        case ParseErrorKind::unknown_family:
            return "unknown-family";
        case ParseErrorKind::bad_arity:
            return "bad-arity";
        case ParseErrorKind::var_index_zero:
            return "var-index-zero";
        case ParseErrorKind::n_mismatch:
            return "n-mismatch";
        case ParseErrorKind::bad_hex_length:
            return "bad-hex-length";
    }
    return "unknown";
}

class ParseError : public std::runtime_error {
   public:
    ParseError(ParseErrorKind kind, size_t position, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + " at offset " + std::to_string(position) + ": " +
                             message),
          kind_(kind),
          position_(position) {}

    ParseErrorKind kind() const { return kind_; }
    /// Byte offset into the input.
    size_t position() const { return position_; }

   private:
    ParseErrorKind kind_;
    size_t position_;
};

namespace detail {

class SpecParser {
   public:
    explicit SpecParser(std::string_view text) : text_(text) {}

    BooleanFunction run() {
        skip_ws();
        if (consume_literal("hex:")) {
            return parse_hex();
        }
        if (consume_literal("family:")) {
            return parse_family();
        }
        return parse_expression_spec();
    }

   private:
    struct Node {
        enum class Op { var, constant, negate, conj, disj, exclusive } op;
        int var = 0;
        bool value = false;
        std::unique_ptr<Node> lhs, rhs;
    };
    using NodePtr = std::unique_ptr<Node>;

    [[noreturn]] void fail(ParseErrorKind kind, size_t pos, const std::string &message) const {
        if (!text_.empty() && pos >= text_.size()) {
            pos = text_.size() - 1;
        }
        throw ParseError(kind, pos, message);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool consume_literal(std::string_view lit) {
        if (text_.substr(pos_, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    bool consume(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    long parse_nat() {
        skip_ws();
        const size_t start = pos_;
        long value = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + (peek() - '0');
            if (value > 1'000'000'000) {
                fail(ParseErrorKind::syntax, start, "number too large");
            }
            ++pos_;
        }
        if (pos_ == start) {
            fail(ParseErrorKind::syntax, start, "expected a number");
        }
        return value;
    }

    void expect_end() {
        skip_ws();
        if (!at_end()) {
            fail(ParseErrorKind::syntax, pos_, std::string("unexpected '") + peek() + "'");
        }
    }

    /// Parses '@' nat, returning the number and recording where the '@' was.
    std::optional<int> parse_arity() {
        skip_ws();
        if (peek() != '@') {
            return std::nullopt;
        }
        arity_pos_ = pos_;
        ++pos_;
        const long n = parse_nat();
        if (n < 1) {
            fail(ParseErrorKind::n_mismatch, arity_pos_, "n must be at least 1");
        }
        return static_cast<int>(n);
    }

    BooleanFunction parse_hex() {
        const size_t start = pos_;
        while (!at_end() && std::isxdigit(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
        const std::string_view digits = text_.substr(start, pos_ - start);
        if (digits.empty()) {
            fail(ParseErrorKind::syntax, start, "expected hex digits");
        }
        const auto n = parse_arity();
        if (!n) {
            fail(ParseErrorKind::syntax, pos_, "hex literal needs '@n'");
        }
        expect_end();
        BooleanFunction probe(*n);  // validates n against the cap
        const uint64_t expected = probe.size() >= 4 ? probe.size() / 4 : 1;
        if (digits.size() != expected) {
            fail(ParseErrorKind::bad_hex_length, start,
                 "expected " + std::to_string(expected) + " hex digits for n = " + std::to_string(*n) + ", got " +
                     std::to_string(digits.size()));
        }
        std::vector<uint64_t> words(probe.words().size(), 0);
        for (size_t k = 0; k < digits.size(); ++k) {
            const char c = digits[digits.size() - 1 - k];
            const uint64_t nibble = std::isdigit(static_cast<unsigned char>(c))
                                        ? uint64_t(c - '0')
                                        : uint64_t(std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
            words[k / 16] |= nibble << (4 * (k % 16));
        }
        if (probe.size() < 4 && (words[0] >> probe.size()) != 0) {
            fail(ParseErrorKind::bad_hex_length, start, "hex value has bits past 2^n");
        }
        return BooleanFunction::from_words(*n, std::move(words));
    }

    std::vector<int> parse_args() {
        std::vector<int> args;
        const bool braced = consume('{');
        do {
            args.push_back(static_cast<int>(parse_nat()));
        } while (consume(','));
        if (braced && !consume('}')) {
            fail(ParseErrorKind::syntax, pos_, "expected '}'");
        }
        return args;
    }

    BooleanFunction parse_family() {
        const size_t id_pos = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            ++pos_;
        }
        const std::string id(text_.substr(id_pos, pos_ - id_pos));
        if (id.empty()) {
            fail(ParseErrorKind::syntax, id_pos, "expected a family name");
        }
        if (!is_known_family(id)) {
            fail(ParseErrorKind::unknown_family, id_pos, "unknown family '" + id + "'");
        }
        std::vector<int> args;
        bool have_args = false;
        if (consume(':')) {
            args = parse_args();
            have_args = true;
        }
        const auto n = parse_arity();
        if (!n) {
            fail(ParseErrorKind::syntax, pos_, "family needs '@n'");
        }
        if (!have_args && consume(':')) {
            args = parse_args();
        }
        expect_end();
        std::vector<int> params{*n};
        params.insert(params.end(), args.begin(), args.end());
        try {
            return make_family(id, params);
        } catch (const std::invalid_argument &e) {
            fail(ParseErrorKind::bad_arity, id_pos, e.what());
        }
    }

    BooleanFunction parse_expression_spec() {
        NodePtr root = parse_or();
        const auto n = parse_arity();
        expect_end();
        int nvars = max_var_;
        if (n) {
            if (*n < max_var_) {
                fail(ParseErrorKind::n_mismatch, arity_pos_,
                     "'@" + std::to_string(*n) + "' is smaller than the largest variable index x" +
                         std::to_string(max_var_));
            }
            nvars = *n;
        }
        if (nvars == 0) {
            fail(ParseErrorKind::n_mismatch, pos_, "constant expression needs '@n'");
        }
        return evaluate(*root, nvars);
    }

    NodePtr binary(typename Node::Op op, NodePtr lhs, NodePtr rhs) {
        auto node = std::make_unique<Node>();
        node->op = op;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        return node;
    }

    NodePtr parse_or() {
        NodePtr lhs = parse_and();
        while (consume('|')) {
            lhs = binary(Node::Op::disj, std::move(lhs), parse_and());
        }
        return lhs;
    }

    NodePtr parse_and() {
        NodePtr lhs = parse_xor();
        while (consume('&')) {
            lhs = binary(Node::Op::conj, std::move(lhs), parse_xor());
        }
        return lhs;
    }

    NodePtr parse_xor() {
        NodePtr lhs = parse_unary();
        while (consume('^')) {
            lhs = binary(Node::Op::exclusive, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    NodePtr parse_unary() {
        skip_ws();
        const size_t start = pos_;
        auto node = std::make_unique<Node>();
        switch (peek()) {
            case '!':
                ++pos_;
                node->op = Node::Op::negate;
                node->lhs = parse_unary();
                return node;
            case 'x': {
                ++pos_;
                if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                    fail(ParseErrorKind::syntax, pos_, "expected a variable index after 'x'");
                }
                const long idx = parse_nat();
                if (idx == 0) {
                    fail(ParseErrorKind::var_index_zero, start, "variables are numbered from x1");
                }
                if (idx > kMaxVars) {
                    throw CapacityError("variable x" + std::to_string(idx) + " exceeds the supported maximum of " +
                                        std::to_string(kMaxVars));
                }
                node->op = Node::Op::var;
                node->var = static_cast<int>(idx);
                max_var_ = std::max(max_var_, node->var);
                return node;
            }
            case '0':
            case '1':
                node->op = Node::Op::constant;
                node->value = peek() == '1';
                ++pos_;
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    fail(ParseErrorKind::syntax, start, "constants are 0 or 1");
                }
                return node;
            case '(': {
                ++pos_;
                NodePtr inner = parse_or();
                if (!consume(')')) {
                    fail(ParseErrorKind::syntax, pos_, "expected ')'");
                }
                return inner;
            }
            default:
                if (at_end()) {
                    fail(ParseErrorKind::syntax, pos_, "unexpected end of input");
                }
                fail(ParseErrorKind::syntax, pos_, std::string("unexpected '") + peek() + "'");
        }
    }

    static BooleanFunction evaluate(const Node &node, int n) {
        switch (node.op) {
            case Node::Op::var:
                return BooleanFunction::variable(n, node.var);
            case Node::Op::constant:
                return BooleanFunction::constant(n, node.value);
            case Node::Op::negate:
                return ~evaluate(*node.lhs, n);
            case Node::Op::conj:
                return evaluate(*node.lhs, n) & evaluate(*node.rhs, n);
            case Node::Op::disj:
                return evaluate(*node.lhs, n) | evaluate(*node.rhs, n);
            case Node::Op::exclusive:
                return evaluate(*node.lhs, n) ^ evaluate(*node.rhs, n);
        }
        throw std::logic_error("unreachable");
    }

    std::string_view text_;
    size_t pos_ = 0;
    size_t arity_pos_ = 0;
    int max_var_ = 0;
};

}  // namespace detail

/// Parses a function specification; throws ParseError on malformed input.
inline BooleanFunction parse(std::string_view spec) { return detail::SpecParser(spec).run(); }

/// Canonical form "hex:<DIGITS>@n" with ceil(2^n/4) uppercase digits.
inline std::string format(const BooleanFunction &f) {
    static constexpr char kDigits[] = "0123456789ABCDEF";
    const uint64_t ndigits = f.size() >= 4 ? f.size() / 4 : 1;
    std::string out = "hex:";
    out.reserve(out.size() + ndigits + 4);
    const auto words = f.words();
    for (uint64_t k = ndigits; k-- > 0;) {
        out.push_back(kDigits[(words[k / 16] >> (4 * (k % 16))) & 0xF]);
    }
    out += "@" + std::to_string(f.n());
    return out;
}

}  // namespace depspec
