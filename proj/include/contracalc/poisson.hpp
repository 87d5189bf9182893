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

#include <utility>
#include <vector>

#include "contracalc/tensor.hpp"

namespace contracalc {

// ---------------------------------------------------------------------------
// Schouten-Nijenhuis bracket
// ---------------------------------------------------------------------------

namespace detail {

/// Outer(g, x_{k_2}, ..., x_{k_q+1}) where g is a function and the remaining
/// arguments are coordinates: sum_m d_m(g) * sign * Outer_{sorted(m, tail)}.
inline ScalarExpr multiderivation_with_function(const MultiVectorField& outer, const ScalarExpr& g,
                                                const IndexList& tail) {
    ScalarExpr acc = ScalarExpr::integer(0);
    const int n = outer.chart().dim;
    IndexList merged;
    for (int m = 1; m <= n; ++m) {
        const ScalarExpr dg = partial(g, m);
        if (dg.is_zero_literal()) continue;
        IndexList one{m};
        const int sign = merge_sign(one, tail, merged);
        if (sign == 0) continue;
        const ScalarExpr c = outer.coefficient(merged);
        if (c.is_zero_literal()) continue;
        acc = sign > 0 ? acc + dg * c : acc - dg * c;
    }
    return acc;
}

/// sum over (p,q)-shuffles sigma of sgn(sigma) Outer(Inner(F_{s(1..p)}), F_rest)
/// with F_t = x_{I_t}; p = Inner.grade, q = Outer.grade - 1.
inline ScalarExpr shuffle_block(const MultiVectorField& outer, const MultiVectorField& inner,
                                const IndexList& I) {
    const int p = inner.grade();
    const int total = static_cast<int>(I.size());
    ScalarExpr acc = ScalarExpr::integer(0);
    // enumerate ascending position subsets S of size p
    IndexList positions(static_cast<std::size_t>(p));
    const auto rec = [&](auto&& self, int next, int chosen) -> void {
        if (chosen == p) {
            long inversions = 0;
            for (int k = 0; k < p; ++k) inversions += positions[static_cast<std::size_t>(k)] - k;
            const int sgn = inversions % 2 == 0 ? 1 : -1;
            IndexList inner_idx, tail;
            std::size_t s = 0;
            for (int t = 0; t < total; ++t) {
                if (s < positions.size() && positions[s] == t) {
                    inner_idx.push_back(I[static_cast<std::size_t>(t)]);
                    ++s;
                } else {
                    tail.push_back(I[static_cast<std::size_t>(t)]);
                }
            }
            const ScalarExpr g = inner.coefficient(inner_idx);
            if (g.is_zero_literal()) return;
            const ScalarExpr term = multiderivation_with_function(outer, g, tail);
            acc = sgn > 0 ? acc + term : acc - term;
            return;
        }
        for (int t = next; t <= total - (p - chosen); ++t) {
            positions[static_cast<std::size_t>(chosen)] = t;
            self(self, t + 1, chosen + 1);
        }
    };
    rec(rec, 0, 0);
    return acc;
}

}  // namespace detail

/// Schouten-Nijenhuis bracket via the shuffle-sum definition evaluated on
/// coordinate functions. For vector fields this is the Lie bracket; the
/// degenerate grade-0 blocks follow the convention that a 0-vector applied
/// to no arguments is its coefficient and a shuffle class with a negative
/// part is empty.
inline MultiVectorField schouten(const MultiVectorField& a, const MultiVectorField& b) {
    require_same_chart(a.chart(), b.chart());
    const int ga = a.grade(), gb = b.grade();
    MultiVectorField out(a.chart(), ga + gb >= 1 ? ga + gb - 1 : 0);
    if (ga + gb < 1) return out;
    const int sign2 = ((ga - 1) * (gb - 1)) % 2 == 0 ? -1 : 1;  // -(-1)^{(a-1)(b-1)}
    for (const auto& I : index_tuples(a.chart().dim, ga + gb - 1)) {
        ScalarExpr acc = ScalarExpr::integer(0);
        if (ga >= 1) acc = acc + detail::shuffle_block(a, b, I);
        if (gb >= 1) {
            const ScalarExpr second = detail::shuffle_block(b, a, I);
            acc = sign2 > 0 ? acc + second : acc - second;
        }
        out.add_term(I, acc);
    }
    return out;
}

namespace detail {

/// [f e_i, e_J] by repeated Leibniz splitting of e_J.
inline MultiVectorField bracket_vector_basis(const Chart& chart, const ScalarExpr& f, int i,
                                             const IndexList& J) {
    if (J.empty()) return MultiVectorField::zero(chart, 0);
    if (J.size() == 1) {
        // [f e_i, e_j] = -(d_j f) e_i
        MultiVectorField out(chart, 1);
        out.add_term({i}, -partial(f, J[0]));
        return out;
    }
    const int j1 = J[0];
    const IndexList rest(J.begin() + 1, J.end());
    MultiVectorField e_j1 = basis_vector(chart, j1);
    MultiVectorField e_rest(chart, static_cast<int>(rest.size()));
    e_rest.add_term(rest, ScalarExpr::integer(1));
    return wedge(e_j1, bracket_vector_basis(chart, f, i, rest)) +
           wedge(bracket_vector_basis(chart, f, i, {j1}), e_rest);
}

/// [f e_I, g e_J] by (S3)/(S4) reduction to Lie brackets, directional
/// derivatives and interior products.
inline MultiVectorField bracket_monomials(const Chart& chart, const ScalarExpr& f,
                                          const IndexList& I, const ScalarExpr& g,
                                          const IndexList& J) {
    const int a = static_cast<int>(I.size());
    const int b = static_cast<int>(J.size());
    if (a == 0 && b == 0) return MultiVectorField::zero(chart, 0);
    if (a == 0) {
        // [f, C] = -i(df) C
        MultiVectorField c(chart, b);
        c.add_term(J, g);
        return -interior_by_form(differential(chart, f), c);
    }
    if (b == 0) {
        // [A, g] = (-1)^{a-1} i(dg) A
        MultiVectorField aa(chart, a);
        aa.add_term(I, f);
        const MultiVectorField r = interior_by_form(differential(chart, g), aa);
        return (a - 1) % 2 == 0 ? r : -r;
    }
    if (a == 1) {
        // [X, g e_J] = g [X, e_J] + X(g) e_J
        MultiVectorField base = bracket_vector_basis(chart, f, I[0], J);
        MultiVectorField e_j(chart, b);
        e_j.add_term(J, ScalarExpr::integer(1));
        return g * base + (f * partial(g, I[0])) * e_j;
    }
    // a >= 2: [U ^ V, C] = [U, C] ^ V + (-1)^{b-1} U ^ [V, C] with U = f e_{i1}
    const IndexList rest(I.begin() + 1, I.end());
    MultiVectorField e_rest(chart, a - 1);
    e_rest.add_term(rest, ScalarExpr::integer(1));
    MultiVectorField u(chart, 1);
    u.add_term({I[0]}, f);
    const MultiVectorField t1 =
        wedge(bracket_monomials(chart, f, {I[0]}, g, J), e_rest);
    const MultiVectorField t2 =
        wedge(u, bracket_monomials(chart, ScalarExpr::integer(1), rest, g, J));
    return (b - 1) % 2 == 0 ? t1 + t2 : t1 - t2;
}

}  // namespace detail

/// Second, independent Schouten implementation: recursive (S3)/(S4)
/// reduction. Cross-checked against the shuffle-sum definition in the test
/// and verification suites.
inline MultiVectorField schouten_leibniz(const MultiVectorField& a, const MultiVectorField& b) {
    require_same_chart(a.chart(), b.chart());
    const int ga = a.grade(), gb = b.grade();
    MultiVectorField out(a.chart(), ga + gb >= 1 ? ga + gb - 1 : 0);
    for (const auto& [ia, fa] : a.coeffs())
        for (const auto& [ib, fb] : b.coeffs())
            out = out + detail::bracket_monomials(a.chart(), fa, ia, fb, ib);
    return out;
}

// ---------------------------------------------------------------------------
// Poisson bivectors
// ---------------------------------------------------------------------------

/// Jacobi identity as the vanishing of the Schouten self-bracket.
inline bool jacobi_check(const MultiVectorField& w, const ProbEq& opts = {}) {
    if (w.grade() != 2) throw GradeMismatchError("jacobi_check needs a bivector");
    return is_zero_probabilistic(schouten(w, w), opts);
}

/// The displayed scalar Jacobi condition for W = f dx^dy + g dy^dz + h dz^dx
/// on a 3-chart: f(h_x - g_y) + g(f_y - h_z) + h(g_z - f_x).
inline ScalarExpr r3_jacobi_condition(const MultiVectorField& w) {
    if (w.chart().dim != 3 || w.grade() != 2)
        throw GradeMismatchError("r3_jacobi_condition needs a bivector on a 3-chart");
    const ScalarExpr f = w.coefficient({1, 2});
    const ScalarExpr g = w.coefficient({2, 3});
    const ScalarExpr h = -w.coefficient({1, 3});
    return f * (partial(h, 1) - partial(g, 2)) + g * (partial(f, 2) - partial(h, 3)) +
           h * (partial(g, 3) - partial(f, 1));
}

/// A validated grade-2 multivector. Construction via `checked` runs the
/// probabilistic Jacobi test; `unchecked` is for deliberately near-Poisson
/// inputs in tests.
class PoissonBivector {
  public:
    static PoissonBivector checked(MultiVectorField w, const ProbEq& opts = {}) {
        if (w.grade() != 2) throw GradeMismatchError("Poisson bivector must have grade 2");
        if (!jacobi_check(w, opts))
            throw ValidationError("jacobi", "Schouten self-bracket does not vanish");
        return PoissonBivector(std::move(w), true);
    }
    static PoissonBivector unchecked(MultiVectorField w) {
        if (w.grade() != 2) throw GradeMismatchError("Poisson bivector must have grade 2");
        return PoissonBivector(std::move(w), false);
    }

    const MultiVectorField& bivector() const { return w_; }
    const Chart& chart() const { return w_.chart(); }
    bool jacobi_checked() const { return jacobi_checked_; }

    /// Full antisymmetric coefficient matrix: entry(i,j) = {x_i, x_j}.
    ScalarExpr entry(int i, int j) const {
        if (i == j) return ScalarExpr::integer(0);
        return i < j ? w_.coefficient({i, j}) : -w_.coefficient({j, i});
    }

  private:
    PoissonBivector(MultiVectorField w, bool checked) : w_(std::move(w)), jacobi_checked_(checked) {}
    MultiVectorField w_;
    bool jacobi_checked_;
};

// ---------------------------------------------------------------------------
// Sharp maps, brackets and the two chain operators
// ---------------------------------------------------------------------------

/// The vector field with beta(sharp alpha) = <beta ^ alpha, Pi>.
inline MultiVectorField sharp1(const PoissonBivector& pi, const DifferentialForm& alpha) {
    if (alpha.grade() != 1) throw GradeMismatchError("sharp1 needs a 1-form");
    require_same_chart(pi.chart(), alpha.chart());
    const int n = pi.chart().dim;
    MultiVectorField out(pi.chart(), 1);
    for (const auto& [idx, fa] : alpha.coeffs()) {
        const int a = idx[0];
        for (int b = 1; b <= n; ++b) {
            const ScalarExpr p = pi.entry(b, a);
            if (!p.is_zero_literal()) out.add_term({b}, p * fa);
        }
    }
    return out;
}

/// sharp_k(alpha_1 ^ ... ^ alpha_k) = sharp(alpha_1) ^ ... ^ sharp(alpha_k),
/// applied columnwise to the coefficient expansion; identity on scalars.
inline MultiVectorField sharp_k(const PoissonBivector& pi, const DifferentialForm& eta) {
    require_same_chart(pi.chart(), eta.chart());
    const int k = eta.grade();
    if (k == 0) return MultiVectorField::scalar(pi.chart(), eta.scalar_part());
    MultiVectorField out(pi.chart(), k);
    std::vector<MultiVectorField> sharp_basis;
    sharp_basis.reserve(static_cast<std::size_t>(pi.chart().dim));
    for (int i = 1; i <= pi.chart().dim; ++i)
        sharp_basis.push_back(sharp1(pi, basis_form(pi.chart(), i)));
    for (const auto& [idx, f] : eta.coeffs()) {
        MultiVectorField prod = sharp_basis[static_cast<std::size_t>(idx[0] - 1)];
        for (std::size_t t = 1; t < idx.size(); ++t)
            prod = wedge(prod, sharp_basis[static_cast<std::size_t>(idx[t] - 1)]);
        out = out + f * prod;
    }
    return out;
}

namespace detail {

inline ScalarExpr expr_det(std::vector<std::vector<ScalarExpr>>& m, std::vector<int>& cols, int row) {
    const int k = static_cast<int>(m.size());
    if (row == k) return ScalarExpr::integer(1);
    ScalarExpr acc = ScalarExpr::integer(0);
    int parity = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const int col = cols[c];
        if (col < 0) continue;
        const ScalarExpr& v = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        if (!v.is_zero_literal()) {
            cols[c] = -1;
            const ScalarExpr sub = expr_det(m, cols, row + 1);
            cols[c] = col;
            const ScalarExpr term = v * sub;
            acc = parity % 2 == 0 ? acc + term : acc - term;
        }
        ++parity;
    }
    return acc;
}

}  // namespace detail

/// Determinant of a small matrix of expressions (Laplace expansion).
inline ScalarExpr expr_determinant(std::vector<std::vector<ScalarExpr>> m) {
    std::vector<int> cols;
    for (int i = 0; i < static_cast<int>(m.size()); ++i) cols.push_back(i);
    return detail::expr_det(m, cols, 0);
}

/// Pi_k(alpha, beta) = det(<alpha_i ^ beta_j, Pi>), extended bilinearly;
/// Pi_0(f, g) = f g.
inline ScalarExpr pi_k(const PoissonBivector& pi, const DifferentialForm& alpha,
                       const DifferentialForm& beta) {
    if (alpha.grade() != beta.grade()) throw GradeMismatchError("pi_k needs equal grades");
    const int k = alpha.grade();
    if (k == 0) return alpha.scalar_part() * beta.scalar_part();
    ScalarExpr acc = ScalarExpr::integer(0);
    for (const auto& [ia, fa] : alpha.coeffs())
        for (const auto& [ib, fb] : beta.coeffs()) {
            std::vector<std::vector<ScalarExpr>> m(static_cast<std::size_t>(k),
                                                   std::vector<ScalarExpr>(static_cast<std::size_t>(k)));
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q)
                    m[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] =
                        pi.entry(ia[static_cast<std::size_t>(p)], ib[static_cast<std::size_t>(q)]);
            acc = acc + fa * fb * expr_determinant(std::move(m));
        }
    return acc;
}

/// {f, g} = <df ^ dg, Pi>.
inline ScalarExpr poisson_bracket(const PoissonBivector& pi, const ScalarExpr& f,
                                  const ScalarExpr& g) {
    ScalarExpr acc = ScalarExpr::integer(0);
    for (const auto& [idx, p] : pi.bivector().coeffs()) {
        const int i = idx[0], j = idx[1];
        acc = acc + p * (partial(f, i) * partial(g, j) - partial(f, j) * partial(g, i));
    }
    return acc;
}

/// Hamiltonian vector field H_f = sharp(df).
inline MultiVectorField hamiltonian(const PoissonBivector& pi, const ScalarExpr& f) {
    return sharp1(pi, differential(pi.chart(), f));
}

/// Poisson coboundary: the degree +1 operator A -> -[A, Pi]_S.
inline MultiVectorField coboundary(const PoissonBivector& pi, const MultiVectorField& a) {
    return -schouten(a, pi.bivector());
}

/// Brylinski's degree -1 operator on forms, computed from its definition on
/// monomials f dx^{i_1} ^ ... ^ dx^{i_k} (phi_0 = f, phi_p = x_{i_p}).
inline DifferentialForm delta_brylinski(const PoissonBivector& pi, const DifferentialForm& eta) {
    require_same_chart(pi.chart(), eta.chart());
    const Chart& chart = pi.chart();
    const int k = eta.grade();
    DifferentialForm out(chart, k >= 1 ? k - 1 : 0);
    if (k == 0) return out;
    for (const auto& [idx, f] : eta.coeffs()) {
        // first block: sum_p (-1)^{p+1} {f, x_{i_p}} dx^{... hat p ...}
        for (int p = 0; p < k; ++p) {
            ScalarExpr br = ScalarExpr::integer(0);
            for (int m = 1; m <= chart.dim; ++m) {
                const ScalarExpr df = partial(f, m);
                if (!df.is_zero_literal()) br = br + df * pi.entry(m, idx[static_cast<std::size_t>(p)]);
            }
            if (br.is_zero_literal()) continue;
            IndexList rest;
            for (int t = 0; t < k; ++t)
                if (t != p) rest.push_back(idx[static_cast<std::size_t>(t)]);
            out.add_term(rest, p % 2 == 0 ? br : -br);
        }
        // second block: sum_{p<q} (-1)^{p+q} f d{x_{i_p}, x_{i_q}} ^ dx^{... hat p, hat q ...}
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) {
                const ScalarExpr b = pi.entry(idx[static_cast<std::size_t>(p)],
                                              idx[static_cast<std::size_t>(q)]);
                const DifferentialForm db = differential(chart, b);
                if (db.is_zero_literal()) continue;
                IndexList rest;
                for (int t = 0; t < k; ++t)
                    if (t != p && t != q) rest.push_back(idx[static_cast<std::size_t>(t)]);
                DifferentialForm mono(chart, k - 2);
                mono.add_term(rest, ScalarExpr::integer(1));
                DifferentialForm w = wedge(db, mono);
                // 1-based signs: (-1)^{(p+1)+(q+1)} = (-1)^{p+q}
                const ScalarExpr factor = (p + q) % 2 == 0 ? f : -f;
                out = out + factor * w;
            }
    }
    return out;
}

}  // namespace contracalc
