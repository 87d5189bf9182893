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

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "contracalc/scalar.hpp"

namespace contracalc {

/// Strictly increasing 1-based coordinate indices; the empty list is the
/// grade-0 basis element.
using IndexList = std::vector<int>;

// ---------------------------------------------------------------------------
// Index bookkeeping. Every sign in the exterior algebra flows through
// merge_sign, which is the single normalization point.
// ---------------------------------------------------------------------------

/// Concatenates two strictly increasing lists and sorts the result, counting
/// transpositions. Returns 0 on a repeated index, else +/-1; `out` receives
/// the merged sorted list.
inline int merge_sign(const IndexList& a, const IndexList& b, IndexList& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    // Merge of two sorted runs: each time an element of b passes over a tail
    // of a, it contributes that many transpositions.
    std::size_t i = 0, j = 0;
    long inversions = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            inversions += static_cast<long>(a.size() - i);
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return inversions % 2 == 0 ? 1 : -1;
}

/// Sign needed to sort an arbitrary list of distinct indices; 0 on duplicates.
inline int sort_sign(IndexList& indices) {
    int sign = 1;
    for (std::size_t i = 1; i < indices.size(); ++i)
        for (std::size_t j = i; j > 0 && indices[j - 1] >= indices[j]; --j) {
            if (indices[j - 1] == indices[j]) return 0;
            std::swap(indices[j - 1], indices[j]);
            sign = -sign;
        }
    return sign;
}

/// All strictly increasing index tuples of the given size from {1..n}.
inline std::vector<IndexList> index_tuples(int n, int size) {
    std::vector<IndexList> out;
    if (size < 0 || size > n) return out;
    IndexList cur;
    const auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(cur.size()) == size) {
            out.push_back(cur);
            return;
        }
        for (int i = next; i <= n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);
    return out;
}

// ---------------------------------------------------------------------------
// Antisymmetric tensors: multivector fields and differential forms share the
// same coefficient layout; the tag keeps them apart at the type level.
// ---------------------------------------------------------------------------

struct VectorBasisTag {};  // e_i = d/dx_i
struct FormBasisTag {};    // dx^i

template <typename Tag>
class AltTensor {
  public:
    AltTensor(Chart chart, int grade) : chart_(std::move(chart)), grade_(grade) {}

    static AltTensor scalar(const Chart& chart, ScalarExpr f) {
        AltTensor t(chart, 0);
        t.add_term({}, std::move(f));
        return t;
    }
    static AltTensor basis(const Chart& chart, int i) {
        AltTensor t(chart, 1);
        t.add_term({i}, ScalarExpr::integer(1));
        return t;
    }
    static AltTensor zero(const Chart& chart, int grade) { return AltTensor(chart, grade); }

    const Chart& chart() const { return chart_; }
    int grade() const { return grade_; }
    const std::map<IndexList, ScalarExpr>& coeffs() const { return coeffs_; }

    /// Coefficient of a sorted index tuple (zero if absent).
    ScalarExpr coefficient(const IndexList& sorted) const {
        auto it = coeffs_.find(sorted);
        return it == coeffs_.end() ? ScalarExpr::integer(0) : it->second;
    }
    /// Grade-0 value.
    ScalarExpr scalar_part() const { return coefficient({}); }

    bool is_zero_literal() const { return coeffs_.empty(); }

    /// Accumulates `f` on an arbitrary tuple of distinct indices, sorting and
    /// signing as needed. Duplicate indices contribute nothing.
    void add_term(IndexList indices, const ScalarExpr& f) {
        if (f.is_zero_literal()) return;
        if (static_cast<int>(indices.size()) != grade_)
            throw GradeMismatchError("term arity does not match tensor grade");
        if (grade_ < 0 || grade_ > chart_.dim) return;  // representable zero
        const int sign = sort_sign(indices);
        if (sign == 0) return;
        for (int idx : indices)
            if (idx < 1 || idx > chart_.dim) throw Error("tensor index out of range");
        const ScalarExpr signed_f = sign > 0 ? f : -f;
        auto it = coeffs_.find(indices);
        if (it == coeffs_.end()) {
            coeffs_.emplace(std::move(indices), signed_f);
        } else {
            it->second = it->second + signed_f;
            if (it->second.is_zero_literal()) coeffs_.erase(it);
        }
    }

    friend AltTensor operator+(const AltTensor& x, const AltTensor& y) {
        require_same_chart(x.chart_, y.chart_);
        if (x.grade_ != y.grade_ && !x.coeffs_.empty() && !y.coeffs_.empty())
            throw GradeMismatchError("cannot add tensors of different grades");
        AltTensor out(x.chart_, x.coeffs_.empty() && !y.coeffs_.empty() ? y.grade_ : x.grade_);
        for (const auto& [k, v] : x.coeffs_) out.add_term(k, v);
        for (const auto& [k, v] : y.coeffs_) out.add_term(k, v);
        return out;
    }
    friend AltTensor operator-(const AltTensor& x, const AltTensor& y) { return x + (-y); }
    friend AltTensor operator-(const AltTensor& x) {
        AltTensor out(x.chart_, x.grade_);
        for (const auto& [k, v] : x.coeffs_) out.coeffs_.emplace(k, -v);
        return out;
    }
    friend AltTensor operator*(const ScalarExpr& f, const AltTensor& x) {
        AltTensor out(x.chart_, x.grade_);
        if (f.is_zero_literal()) return out;
        for (const auto& [k, v] : x.coeffs_) {
            ScalarExpr c = f * v;
            if (!c.is_zero_literal()) out.coeffs_.emplace(k, std::move(c));
        }
        return out;
    }

  private:
    Chart chart_;
    int grade_;
    std::map<IndexList, ScalarExpr> coeffs_;
};

using MultiVectorField = AltTensor<VectorBasisTag>;
using DifferentialForm = AltTensor<FormBasisTag>;

inline MultiVectorField basis_vector(const Chart& chart, int i) {
    return MultiVectorField::basis(chart, i);
}
inline DifferentialForm basis_form(const Chart& chart, int i) {
    return DifferentialForm::basis(chart, i);
}

// ---------------------------------------------------------------------------
// Exterior algebra operations
// ---------------------------------------------------------------------------

/// Wedge product. Bilinear, associative, graded-commutative; the sign comes
/// from merging the two sorted index tuples.
template <typename Tag>
AltTensor<Tag> wedge(const AltTensor<Tag>& a, const AltTensor<Tag>& b) {
    require_same_chart(a.chart(), b.chart());
    AltTensor<Tag> out(a.chart(), a.grade() + b.grade());
    IndexList merged;
    for (const auto& [ia, fa] : a.coeffs())
        for (const auto& [ib, fb] : b.coeffs()) {
            const int sign = merge_sign(ia, ib, merged);
            if (sign == 0) continue;
            ScalarExpr c = fa * fb;
            if (sign < 0) c = -c;
            out.add_term(merged, c);
        }
    return out;
}

/// Determinant pairing <dx^I, e_J> = delta_{I,J} extended bilinearly; no 1/k!.
inline ScalarExpr pairing(const DifferentialForm& eta, const MultiVectorField& a) {
    require_same_chart(eta.chart(), a.chart());
    if (eta.grade() != a.grade()) throw GradeMismatchError("pairing needs equal grades");
    ScalarExpr out = ScalarExpr::integer(0);
    for (const auto& [idx, f] : eta.coeffs()) {
        const ScalarExpr g = a.coefficient(idx);
        if (!g.is_zero_literal()) out = out + f * g;
    }
    return out;
}

/// i(A)eta, the (p-a)-form with <i(A)eta, B> = <eta, A wedge B>.
inline DifferentialForm interior_by_vector(const MultiVectorField& a, const DifferentialForm& eta) {
    require_same_chart(a.chart(), eta.chart());
    DifferentialForm out(eta.chart(), eta.grade() - a.grade());
    if (eta.grade() < a.grade()) return out;
    IndexList merged;
    for (const auto& [ifull, f] : eta.coeffs())
        for (const auto& [ia, g] : a.coeffs()) {
            // component L with J = ia, J u L = ifull
            if (!std::includes(ifull.begin(), ifull.end(), ia.begin(), ia.end())) continue;
            IndexList rest;
            std::set_difference(ifull.begin(), ifull.end(), ia.begin(), ia.end(),
                                std::back_inserter(rest));
            const int sign = merge_sign(ia, rest, merged);
            ScalarExpr c = g * f;
            if (sign < 0) c = -c;
            out.add_term(rest, c);
        }
    return out;
}

/// i(eta)A, the (a-p)-vector with <tau, i(eta)A> = <tau wedge eta, A>.
inline MultiVectorField interior_by_form(const DifferentialForm& eta, const MultiVectorField& a) {
    require_same_chart(a.chart(), eta.chart());
    MultiVectorField out(a.chart(), a.grade() - eta.grade());
    if (a.grade() < eta.grade()) return out;
    IndexList merged;
    for (const auto& [ifull, f] : a.coeffs())
        for (const auto& [ie, g] : eta.coeffs()) {
            if (!std::includes(ifull.begin(), ifull.end(), ie.begin(), ie.end())) continue;
            IndexList rest;
            std::set_difference(ifull.begin(), ifull.end(), ie.begin(), ie.end(),
                                std::back_inserter(rest));
            // component L = rest: sign of tau wedge eta ordering (L, then ie)
            const int sign = merge_sign(rest, ie, merged);
            ScalarExpr c = g * f;
            if (sign < 0) c = -c;
            out.add_term(rest, c);
        }
    return out;
}

/// d(f dx^I) = sum_i (d_i f) dx^i wedge dx^I, extended linearly.
inline DifferentialForm exterior_derivative(const DifferentialForm& eta) {
    DifferentialForm out(eta.chart(), eta.grade() + 1);
    const int n = eta.chart().dim;
    IndexList merged;
    for (const auto& [idx, f] : eta.coeffs())
        for (int i = 1; i <= n; ++i) {
            const ScalarExpr df = partial(f, i);
            if (df.is_zero_literal()) continue;
            const IndexList single{i};
            const int sign = merge_sign(single, idx, merged);
            if (sign == 0) continue;
            out.add_term(merged, sign > 0 ? df : -df);
        }
    return out;
}

/// The differential of a function as a 1-form.
inline DifferentialForm differential(const Chart& chart, const ScalarExpr& f) {
    DifferentialForm out(chart, 1);
    for (int i = 1; i <= chart.dim; ++i) out.add_term({i}, partial(f, i));
    return out;
}

/// X(f) for a vector field X (grade 1).
inline ScalarExpr apply_vector(const MultiVectorField& x, const ScalarExpr& f) {
    if (x.grade() != 1) throw GradeMismatchError("apply_vector needs a vector field");
    ScalarExpr out = ScalarExpr::integer(0);
    for (const auto& [idx, g] : x.coeffs()) out = out + g * partial(f, idx[0]);
    return out;
}

/// Cartan formula: L_X eta = i(X) d eta + d(i(X) eta).
inline DifferentialForm lie_derivative_by_vector(const MultiVectorField& x,
                                                 const DifferentialForm& eta) {
    return interior_by_vector(x, exterior_derivative(eta)) +
           exterior_derivative(interior_by_vector(x, eta));
}

/// Generalized Lie derivative by a bivector: L_W = i(W) d - d i(W).
inline DifferentialForm lie_derivative_by_bivector(const MultiVectorField& w,
                                                   const DifferentialForm& eta) {
    if (w.grade() != 2) throw GradeMismatchError("lie_derivative_by_bivector needs a bivector");
    return interior_by_vector(w, exterior_derivative(eta)) -
           exterior_derivative(interior_by_vector(w, eta));
}

// ---------------------------------------------------------------------------
// Probabilistic equality on tensors
// ---------------------------------------------------------------------------

template <typename Tag>
bool equal_probabilistic(const AltTensor<Tag>& a, const AltTensor<Tag>& b, const ProbEq& opts = {}) {
    require_same_chart(a.chart(), b.chart());
    if (a.grade() != b.grade() && !a.is_zero_literal() && !b.is_zero_literal()) return false;
    std::uint64_t salt = 1;
    for (const auto& [idx, f] : a.coeffs()) {
        if (!equal_probabilistic(a.chart(), f, b.coefficient(idx), opts.with_seed(opts.seed + salt)))
            return false;
        ++salt;
    }
    for (const auto& [idx, f] : b.coeffs()) {
        if (a.coeffs().count(idx)) continue;
        if (!is_identically_zero(a.chart(), f, opts.with_seed(opts.seed + salt))) return false;
        ++salt;
    }
    return true;
}

template <typename Tag>
bool is_zero_probabilistic(const AltTensor<Tag>& a, const ProbEq& opts = {}) {
    return equal_probabilistic(a, AltTensor<Tag>::zero(a.chart(), a.grade()), opts);
}

// ---------------------------------------------------------------------------
// Text syntax: sum of `<expr> * e[i1,...,ia]` (vectors) or
// `<expr> * dx[i1,...,ik]` (forms); a bare expression is grade 0.
// ---------------------------------------------------------------------------

namespace detail {

template <typename Tag>
const char* basis_token();
template <>
inline const char* basis_token<VectorBasisTag>() {
    return "e";
}
template <>
inline const char* basis_token<FormBasisTag>() {
    return "dx";
}

inline bool needs_parens_as_coefficient(const std::string& printed) {
    // A top-level '+'/'-' would change how the term text splits.
    int depth = 0;
    for (const char c : printed) {
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (depth == 0 && (c == '+' || c == '-')) return true;
    }
    return false;
}

}  // namespace detail

template <typename Tag>
std::string to_text(const AltTensor<Tag>& t) {
    if (t.coeffs().empty()) return "0";
    if (t.grade() == 0) return to_text(t.scalar_part(), t.chart());
    std::string out;
    bool first = true;
    for (const auto& [idx, f] : t.coeffs()) {
        std::string coeff = to_text(f, t.chart());
        if (!first) out += " + ";
        first = false;
        if (detail::needs_parens_as_coefficient(coeff)) coeff = "(" + coeff + ")";
        if (coeff != "1") {
            out += coeff;
            out += "*";
        }
        out += detail::basis_token<Tag>();
        out += "[";
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(idx[i]);
        }
        out += "]";
    }
    return out;
}

namespace detail {

/// Splits tensor text into signed terms at top-level '+'/'-' that occur
/// after a complete basis token or at the very start.
template <typename Tag>
AltTensor<Tag> parse_tensor_impl(const std::string& text, const Chart& chart) {
    const std::string tok = basis_token<Tag>();
    struct RawTerm {
        std::string coeff;
        IndexList indices;
        bool has_basis = false;
        int sign = 1;
    };
    std::vector<RawTerm> terms;

    std::size_t pos = 0;
    const auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    if (pos == text.size()) throw ParseError("empty tensor text", pos);

    while (pos < text.size()) {
        RawTerm term;
        skip_ws();
        if (text[pos] == '+') { ++pos; }
        else if (text[pos] == '-') { term.sign = -1; ++pos; }
        // scan the term: ends either after a basis bracket or at end of input
        int depth = 0;
        std::string body;
        bool done = false;
        while (pos < text.size() && !done) {
            const char c = text[pos];
            if (c == '(') ++depth;
            if (c == ')') --depth;
            // detect basis token at depth 0: tok followed by '['
            if (depth == 0 && c == tok[0] && text.compare(pos, tok.size(), tok) == 0 &&
                pos + tok.size() < text.size() && text[pos + tok.size()] == '[') {
                // make sure this is a standalone token (not part of an identifier)
                const bool prev_ok = body.empty() ||
                                     !(std::isalnum(static_cast<unsigned char>(body.back())) ||
                                       body.back() == '_');
                if (prev_ok) {
                    pos += tok.size() + 1;  // past '['
                    term.has_basis = true;
                    // parse comma separated indices
                    for (;;) {
                        skip_ws();
                        std::size_t start = pos;
                        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                            ++pos;
                        if (pos == start) throw ParseError("expected index", pos);
                        term.indices.push_back(std::stoi(text.substr(start, pos - start)));
                        skip_ws();
                        if (pos < text.size() && text[pos] == ',') { ++pos; continue; }
                        if (pos < text.size() && text[pos] == ']') { ++pos; break; }
                        throw ParseError("expected ',' or ']'", pos);
                    }
                    done = true;
                    continue;
                }
            }
            body += c;
            ++pos;
        }
        // strip a trailing '*' before the basis token
        while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
        if (term.has_basis && !body.empty() && body.back() == '*') body.pop_back();
        term.coeff = body;
        terms.push_back(std::move(term));
        skip_ws();
        if (pos < text.size() && text[pos] != '+' && text[pos] != '-')
            throw ParseError("expected '+' or '-' between terms", pos);
    }

    // Determine the grade: all basis terms must agree; bare terms are grade 0.
    int grade = -1;
    for (const auto& t : terms) {
        const int g = t.has_basis ? static_cast<int>(t.indices.size()) : 0;
        if (grade == -1) grade = g;
        else if (grade != g) throw ParseError("mixed grades in tensor text", 0);
    }
    AltTensor<Tag> out(chart, grade);
    for (const auto& t : terms) {
        ScalarExpr f = t.coeff.empty() ? ScalarExpr::integer(1) : parse_expr(t.coeff, chart);
        if (t.sign < 0) f = -f;
        out.add_term(t.indices, f);
    }
    return out;
}

}  // namespace detail

inline MultiVectorField parse_multivector(const std::string& text, const Chart& chart) {
    return detail::parse_tensor_impl<VectorBasisTag>(text, chart);
}
inline DifferentialForm parse_form(const std::string& text, const Chart& chart) {
    return detail::parse_tensor_impl<FormBasisTag>(text, chart);
}

}  // namespace contracalc
