/*
 * Copyright 2026 the contracalc authors
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

#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "contracalc/errors.hpp"
#include "contracalc/rational.hpp"

namespace contracalc {

// ---------------------------------------------------------------------------
// Chart and Point
// ---------------------------------------------------------------------------

/// A single coordinate chart: a dimension and n distinct coordinate names.
struct Chart {
    int dim = 0;
    std::vector<std::string> coords;

    static Chart make(std::vector<std::string> names) {
        Chart c;
        c.dim = static_cast<int>(names.size());
        c.coords = std::move(names);
        if (c.dim < 1) throw ValidationError("coords", "chart needs at least one coordinate");
        std::unordered_set<std::string> seen;
        for (const auto& name : c.coords) {
            if (!is_identifier(name))
                throw ValidationError("coords", "'" + name + "' is not a valid identifier");
            if (!seen.insert(name).second)
                throw ValidationError("coords", "duplicate coordinate '" + name + "'");
        }
        return c;
    }

    /// 1-based index of a coordinate name, 0 if unknown.
    int index_of(const std::string& name) const {
        for (int i = 0; i < dim; ++i)
            if (coords[static_cast<std::size_t>(i)] == name) return i + 1;
        return 0;
    }

    const std::string& name(int i) const { return coords[static_cast<std::size_t>(i - 1)]; }

    friend bool operator==(const Chart& a, const Chart& b) {
        return a.dim == b.dim && a.coords == b.coords;
    }
    friend bool operator!=(const Chart& a, const Chart& b) { return !(a == b); }

    static bool is_identifier(const std::string& s) {
        if (s.empty()) return false;
        if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
        for (char ch : s)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
        return true;
    }
};

inline void require_same_chart(const Chart& a, const Chart& b) {
    if (a != b) throw ChartMismatchError("operands live on different charts");
}

/// An evaluation site: one exact rational per coordinate.
struct Point {
    std::vector<Rational> coords;

    const Rational& at(int i) const {
        if (i < 1 || i > static_cast<int>(coords.size()))
            throw Error("point has no coordinate " + std::to_string(i));
        return coords[static_cast<std::size_t>(i - 1)];
    }
};

// ---------------------------------------------------------------------------
// ScalarExpr: immutable expression trees over a chart's coordinates
// ---------------------------------------------------------------------------

enum class ExprKind : std::uint8_t { Const, Coord, Neg, Add, Sub, Mul, Div, Pow };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    Rational value;    // Const
    int coord = 0;     // Coord, 1-based
    int exponent = 0;  // Pow, >= 0
    ExprPtr a, b;
};

/// Value-semantics handle to an immutable expression tree. All arithmetic
/// goes through the folding constructors below, so the reachable tree set
/// never contains Neg(Const), Pow(_, const-base), x*1, x+0 and friends.
class ScalarExpr {
  public:
    ScalarExpr() : ScalarExpr(constant(Rational(0))) {}

    static ScalarExpr constant(Rational r) {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Const;
        n->value = std::move(r);
        return ScalarExpr(std::move(n));
    }
    static ScalarExpr integer(long v) { return constant(Rational(v)); }
    static ScalarExpr coordinate(int i) {
        if (i < 1) throw Error("coordinate index must be >= 1");
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Coord;
        n->coord = i;
        return ScalarExpr(std::move(n));
    }

    ExprKind kind() const { return n_->kind; }
    const Rational& value() const { return n_->value; }
    int coord() const { return n_->coord; }
    int exponent() const { return n_->exponent; }
    ScalarExpr lhs() const { return ScalarExpr(n_->a); }
    ScalarExpr rhs() const { return ScalarExpr(n_->b); }
    const ExprNode* node() const { return n_.get(); }

    bool is_const() const { return n_->kind == ExprKind::Const; }
    bool is_zero_literal() const { return is_const() && n_->value.is_zero(); }
    bool is_one_literal() const { return is_const() && n_->value.is_one(); }

    friend ScalarExpr operator-(const ScalarExpr& e) {
        if (e.is_const()) return constant(-e.value());
        if (e.kind() == ExprKind::Neg) return e.lhs();
        return unary(ExprKind::Neg, e);
    }
    friend ScalarExpr operator+(const ScalarExpr& x, const ScalarExpr& y) {
        if (x.is_zero_literal()) return y;
        if (y.is_zero_literal()) return x;
        if (x.is_const() && y.is_const()) return constant(x.value() + y.value());
        return binary(ExprKind::Add, x, y);
    }
    friend ScalarExpr operator-(const ScalarExpr& x, const ScalarExpr& y) {
        if (y.is_zero_literal()) return x;
        if (x.is_zero_literal()) return -y;
        if (x.is_const() && y.is_const()) return constant(x.value() - y.value());
        return binary(ExprKind::Sub, x, y);
    }
    friend ScalarExpr operator*(const ScalarExpr& x, const ScalarExpr& y) {
        if (x.is_zero_literal() || y.is_zero_literal()) return constant(Rational(0));
        if (x.is_one_literal()) return y;
        if (y.is_one_literal()) return x;
        if (x.is_const() && y.is_const()) return constant(x.value() * y.value());
        return binary(ExprKind::Mul, x, y);
    }
    friend ScalarExpr operator/(const ScalarExpr& x, const ScalarExpr& y) {
        if (y.is_one_literal()) return x;
        if (x.is_zero_literal() && !y.is_zero_literal()) return constant(Rational(0));
        if (x.is_const() && y.is_const()) return constant(x.value() / y.value());
        return binary(ExprKind::Div, x, y);
    }
    friend ScalarExpr pow(const ScalarExpr& base, int e) {
        if (e < 0) throw Error("integer power with negative exponent");
        if (e > 9999) throw Error("exponent too large");
        if (e == 0) return constant(Rational(1));
        if (e == 1) return base;
        if (base.is_const()) return constant(base.value().pow(static_cast<unsigned>(e)));
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Pow;
        n->exponent = e;
        n->a = base.n_;
        return ScalarExpr(std::move(n));
    }

    /// Structural (tree) identity, not mathematical equality.
    bool identical_to(const ScalarExpr& o) const { return identical(n_.get(), o.n_.get()); }

  private:
    explicit ScalarExpr(ExprPtr n) : n_(std::move(n)) {}

    static ScalarExpr unary(ExprKind k, const ScalarExpr& x) {
        auto n = std::make_shared<ExprNode>();
        n->kind = k;
        n->a = x.n_;
        return ScalarExpr(std::move(n));
    }
    static ScalarExpr binary(ExprKind k, const ScalarExpr& x, const ScalarExpr& y) {
        auto n = std::make_shared<ExprNode>();
        n->kind = k;
        n->a = x.n_;
        n->b = y.n_;
        return ScalarExpr(std::move(n));
    }
    static bool identical(const ExprNode* x, const ExprNode* y) {
        if (x == y) return true;
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case ExprKind::Const: return x->value == y->value;
            case ExprKind::Coord: return x->coord == y->coord;
            case ExprKind::Neg: return identical(x->a.get(), y->a.get());
            case ExprKind::Pow:
                return x->exponent == y->exponent && identical(x->a.get(), y->a.get());
            default:
                return identical(x->a.get(), y->a.get()) && identical(x->b.get(), y->b.get());
        }
    }

    ExprPtr n_;
};

// ---------------------------------------------------------------------------
// Evaluation and differentiation
// ---------------------------------------------------------------------------

namespace detail {

inline const Rational& eval_node(const ExprNode* n, const Point& p,
                                 std::unordered_map<const ExprNode*, Rational>& memo) {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    Rational r;
    switch (n->kind) {
        case ExprKind::Const: r = n->value; break;
        case ExprKind::Coord: r = p.at(n->coord); break;
        case ExprKind::Neg: r = -eval_node(n->a.get(), p, memo); break;
        case ExprKind::Add: r = eval_node(n->a.get(), p, memo) + eval_node(n->b.get(), p, memo); break;
        case ExprKind::Sub: r = eval_node(n->a.get(), p, memo) - eval_node(n->b.get(), p, memo); break;
        case ExprKind::Mul: r = eval_node(n->a.get(), p, memo) * eval_node(n->b.get(), p, memo); break;
        case ExprKind::Div: {
            const Rational& den = eval_node(n->b.get(), p, memo);
            if (den.is_zero()) throw DivisionByZeroError("denominator vanishes at sample point");
            r = eval_node(n->a.get(), p, memo) / den;
            break;
        }
        case ExprKind::Pow:
            r = eval_node(n->a.get(), p, memo).pow(static_cast<unsigned>(n->exponent));
            break;
    }
    return memo.emplace(n, std::move(r)).first->second;
}

inline ScalarExpr partial_expr(const ScalarExpr& e, int i,
                               std::unordered_map<const ExprNode*, ScalarExpr>& memo) {
    auto it = memo.find(e.node());
    if (it != memo.end()) return it->second;
    ScalarExpr r;
    switch (e.kind()) {
        case ExprKind::Const: r = ScalarExpr::integer(0); break;
        case ExprKind::Coord: r = ScalarExpr::integer(e.coord() == i ? 1 : 0); break;
        case ExprKind::Neg: r = -partial_expr(e.lhs(), i, memo); break;
        case ExprKind::Add: r = partial_expr(e.lhs(), i, memo) + partial_expr(e.rhs(), i, memo); break;
        case ExprKind::Sub: r = partial_expr(e.lhs(), i, memo) - partial_expr(e.rhs(), i, memo); break;
        case ExprKind::Mul:
            r = partial_expr(e.lhs(), i, memo) * e.rhs() + e.lhs() * partial_expr(e.rhs(), i, memo);
            break;
        case ExprKind::Div:
            r = (partial_expr(e.lhs(), i, memo) * e.rhs() - e.lhs() * partial_expr(e.rhs(), i, memo)) /
                pow(e.rhs(), 2);
            break;
        case ExprKind::Pow:
            r = ScalarExpr::integer(e.exponent()) * pow(e.lhs(), e.exponent() - 1) *
                partial_expr(e.lhs(), i, memo);
            break;
    }
    memo.emplace(e.node(), r);
    return r;
}

}  // namespace detail

/// Exact evaluation by structural recursion; shared subtrees evaluate once.
inline Rational eval(const ScalarExpr& e, const Point& p) {
    std::unordered_map<const ExprNode*, Rational> memo;
    return detail::eval_node(e.node(), p, memo);
}

/// Symbolic partial derivative with respect to the i-th coordinate.
inline ScalarExpr partial(const ScalarExpr& e, int i) {
    if (i < 1) throw Error("partial: coordinate index must be >= 1");
    std::unordered_map<const ExprNode*, ScalarExpr> memo;
    return detail::partial_expr(e, i, memo);
}

// ---------------------------------------------------------------------------
// Grammar: parsing and canonical printing
//
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := base ('^' uint)?
//   base     := rational | identifier | '(' expr ')' | '-' factor
//   rational := int ('/' uint)?        (folded to a Const by construction)
//
// Whitespace is insignificant. Printing is canonical: parse(print(e))
// rebuilds e node for node.
// ---------------------------------------------------------------------------

namespace detail {

class ExprParser {
  public:
    ExprParser(const std::string& text, const Chart& chart) : text_(text), chart_(chart) {}

    ScalarExpr run() {
        ScalarExpr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    ScalarExpr parse_expr() {
        ScalarExpr e = parse_term();
        for (;;) {
            skip_ws();
            if (match('+')) e = e + parse_term();
            else if (match('-')) e = e - parse_term();
            else return e;
        }
    }

    ScalarExpr parse_term() {
        ScalarExpr e = parse_factor();
        for (;;) {
            skip_ws();
            if (match('*')) e = e * parse_factor();
            else if (match('/')) e = e / parse_factor();
            else return e;
        }
    }

    ScalarExpr parse_factor() {
        skip_ws();
        if (match('-')) return -parse_factor();
        ScalarExpr base = parse_base();
        skip_ws();
        if (match('^')) {
            skip_ws();
            return pow(base, static_cast<int>(parse_uint(9999)));
        }
        return base;
    }

    ScalarExpr parse_base() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ScalarExpr e = parse_expr();
            skip_ws();
            if (!match(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            BigInt n = parse_int();
            return ScalarExpr::constant(Rational(std::move(n), BigInt(1)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string name = text_.substr(start, pos_ - start);
            const int idx = chart_.index_of(name);
            if (idx == 0) throw ParseError("unknown identifier '" + name + "'", start);
            return ScalarExpr::coordinate(idx);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    BigInt parse_int() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected a number", start);
        return BigInt(text_.substr(start, pos_ - start));
    }

    unsigned long parse_uint(unsigned long max) {
        const std::size_t start = pos_;
        BigInt n = parse_int();
        if (n > max) throw ParseError("integer too large", start);
        return n.get_ui();
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool match(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    const std::string& text_;
    const Chart& chart_;
    std::size_t pos_ = 0;
};

// Precedence levels for the canonical printer. A node prints bare when its
// intrinsic level is at least the level its context requires.
//   0: sums (and negative constants, which must reach the parser as '-' factor)
//   1: products, 2: unary minus / powers, 3: atoms
inline int print_level(const ScalarExpr& e) {
    switch (e.kind()) {
        case ExprKind::Const:
            // "p/q" literals re-parse as a division, "-p" as a negation.
            if (e.value().sign() < 0) return 0;
            return e.value().is_integer() ? 3 : 1;
        case ExprKind::Coord: return 3;
        case ExprKind::Neg:
        case ExprKind::Pow: return 2;
        case ExprKind::Mul:
        case ExprKind::Div: return 1;
        default: return 0;
    }
}

inline void print_expr(const ScalarExpr& e, const Chart& chart, int min_level, std::string& out) {
    if (print_level(e) < min_level) {
        out += '(';
        print_expr(e, chart, 0, out);
        out += ')';
        return;
    }
    switch (e.kind()) {
        case ExprKind::Const: {
            // "p/q" re-parses as Div(p,q) and folds back to this constant.
            out += e.value().to_string();
            break;
        }
        case ExprKind::Coord: out += chart.name(e.coord()); break;
        case ExprKind::Neg:
            out += '-';
            print_expr(e.lhs(), chart, 2, out);
            break;
        case ExprKind::Add:
            print_expr(e.lhs(), chart, 0, out);
            out += " + ";
            print_expr(e.rhs(), chart, 1, out);
            break;
        case ExprKind::Sub:
            print_expr(e.lhs(), chart, 0, out);
            out += " - ";
            print_expr(e.rhs(), chart, 1, out);
            break;
        case ExprKind::Mul:
            print_expr(e.lhs(), chart, 1, out);
            out += '*';
            print_expr(e.rhs(), chart, 2, out);
            break;
        case ExprKind::Div:
            print_expr(e.lhs(), chart, 1, out);
            out += '/';
            print_expr(e.rhs(), chart, 2, out);
            break;
        case ExprKind::Pow:
            print_expr(e.lhs(), chart, 3, out);
            out += '^';
            out += std::to_string(e.exponent());
            break;
    }
}

}  // namespace detail

inline ScalarExpr parse_expr(const std::string& text, const Chart& chart) {
    return detail::ExprParser(text, chart).run();
}

inline std::string to_text(const ScalarExpr& e, const Chart& chart) {
    std::string out;
    detail::print_expr(e, chart, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Deterministic pseudo-randomness and probabilistic exact equality
// ---------------------------------------------------------------------------

/// splitmix64; fully specified, so identical seeds give identical streams
/// on every platform and compiler.
struct Rng {
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    long range(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    /// Independent deterministic substream.
    Rng fork(std::uint64_t salt) const {
        Rng r(state ^ (0xA0761D6478BD642FULL + salt * 0xE7037ED1A0B428DBULL));
        r.next();
        return r;
    }

    std::uint64_t state;
};

/// Sampling and retry policy for probabilistic exact equality.
struct ProbEq {
    int trials = 8;
    std::uint64_t seed = 0;
    int retry_budget = 100;  // resamples allowed per trial on vanishing denominators
    long numerator_abs_max = 100;
    long denominator_max = 20;

    ProbEq with_seed(std::uint64_t s) const {
        ProbEq o = *this;
        o.seed = s;
        return o;
    }
};

inline Point random_point(const Chart& chart, Rng& rng, const ProbEq& opts) {
    Point p;
    p.coords.reserve(static_cast<std::size_t>(chart.dim));
    for (int i = 0; i < chart.dim; ++i)
        p.coords.emplace_back(rng.range(-opts.numerator_abs_max, opts.numerator_abs_max),
                              rng.range(1, opts.denominator_max));
    return p;
}

/// Schwartz–Zippel style equality: e1 == e2 iff e1 - e2 vanishes at every
/// sampled rational point. Deterministic given (trials, seed). Points where
/// a denominator vanishes are discarded and redrawn within the retry budget.
inline bool equal_probabilistic(const Chart& chart, const ScalarExpr& e1, const ScalarExpr& e2,
                                const ProbEq& opts = {}) {
    if (opts.trials < 1) throw Error("equal_probabilistic: trials must be >= 1");
    const ScalarExpr diff = e1 - e2;
    if (diff.is_const()) return diff.value().is_zero();
    Rng rng = Rng(opts.seed).fork(0x5ca1ab1e);
    for (int t = 0; t < opts.trials; ++t) {
        bool evaluated = false;
        for (int retry = 0; retry <= opts.retry_budget && !evaluated; ++retry) {
            const Point p = random_point(chart, rng, opts);
            try {
                if (!eval(diff, p).is_zero()) return false;
                evaluated = true;
            } catch (const DivisionByZeroError&) {
                // resample
            }
        }
        if (!evaluated)
            throw RetriesExhaustedError(
                "no valid sample point found; a denominator vanishes on too large a set");
    }
    return true;
}

inline bool is_identically_zero(const Chart& chart, const ScalarExpr& e, const ProbEq& opts = {}) {
    return equal_probabilistic(chart, e, ScalarExpr::integer(0), opts);
}

}  // namespace contracalc
