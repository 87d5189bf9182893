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

#include <vector>

#include "contracalc/tensor.hpp"

namespace contracalc {

/// Knobs for the deterministic input generators used by the verification
/// suites and property tests.
struct GenOptions {
    int max_degree = 3;
    int max_terms = 3;
    long coeff_abs_max = 9;
    long coeff_den_max = 4;
    bool allow_division = false;  // adds a 1/(positive) factor when set
};

/// Random polynomial of total degree <= max_degree with small rational
/// coefficients; never the zero polynomial.
inline ScalarExpr random_polynomial(const Chart& chart, Rng& rng, const GenOptions& g = {}) {
    const int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(g.max_terms)));
    ScalarExpr out = ScalarExpr::integer(0);
    for (int t = 0; t < terms; ++t) {
        long num = rng.range(-g.coeff_abs_max, g.coeff_abs_max);
        if (num == 0) num = 1;
        ScalarExpr term = ScalarExpr::constant(Rational(num, rng.range(1, g.coeff_den_max)));
        const int degree = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.max_degree + 1)));
        for (int d = 0; d < degree; ++d)
            term = term * ScalarExpr::coordinate(static_cast<int>(rng.below(
                              static_cast<std::uint64_t>(chart.dim))) + 1);
        out = out + term;
    }
    return out;
}

/// Positive-valued expression: c + p^2 with c > 0, so it never vanishes at
/// any rational point. Used for safe denominators and volume coefficients.
inline ScalarExpr random_positive(const Chart& chart, Rng& rng, const GenOptions& g = {}) {
    GenOptions inner = g;
    inner.max_degree = std::max(1, g.max_degree / 2);
    inner.max_terms = 2;
    const ScalarExpr c = ScalarExpr::constant(Rational(rng.range(1, 5), rng.range(1, 3)));
    return c + pow(random_polynomial(chart, rng, inner), 2);
}

/// Polynomial or, when allowed, polynomial plus a rational-function tail
/// whose denominator is positive everywhere.
inline ScalarExpr random_scalar(const Chart& chart, Rng& rng, const GenOptions& g = {}) {
    ScalarExpr out = random_polynomial(chart, rng, g);
    if (g.allow_division && rng.below(3) == 0)
        out = out + random_polynomial(chart, rng, g) / random_positive(chart, rng, g);
    return out;
}

namespace detail {

template <typename Tag>
AltTensor<Tag> random_tensor(const Chart& chart, int grade, Rng& rng, const GenOptions& g) {
    AltTensor<Tag> out(chart, grade);
    bool any = false;
    for (const auto& idx : index_tuples(chart.dim, grade)) {
        if (rng.below(4) == 3 && grade > 0) continue;  // keep some sparsity
        out.add_term(idx, random_scalar(chart, rng, g));
        any = true;
    }
    if (!any && grade >= 0 && grade <= chart.dim) {
        auto tuples = index_tuples(chart.dim, grade);
        out.add_term(tuples[rng.below(tuples.size())], random_scalar(chart, rng, g));
    }
    return out;
}

}  // namespace detail

inline MultiVectorField random_multivector(const Chart& chart, int grade, Rng& rng,
                                           const GenOptions& g = {}) {
    return detail::random_tensor<VectorBasisTag>(chart, grade, rng, g);
}
inline DifferentialForm random_form(const Chart& chart, int grade, Rng& rng,
                                    const GenOptions& g = {}) {
    return detail::random_tensor<FormBasisTag>(chart, grade, rng, g);
}

/// Invertible rational matrix built as L*U with unit diagonals, det = +/-1.
inline std::vector<std::vector<Rational>> random_invertible_matrix(int n, Rng& rng) {
    std::vector<std::vector<Rational>> l(n, std::vector<Rational>(n, Rational(0)));
    std::vector<std::vector<Rational>> u(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) {
        l[i][i] = Rational(1);
        u[i][i] = Rational(rng.below(2) == 0 ? 1 : -1);
        for (int j = 0; j < i; ++j) l[i][j] = Rational(rng.range(-2, 2));
        for (int j = i + 1; j < n; ++j) u[i][j] = Rational(rng.range(-2, 2));
    }
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) m[i][j] += l[i][k] * u[k][j];
    return m;
}

}  // namespace contracalc
