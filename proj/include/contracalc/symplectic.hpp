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

#include <optional>
#include <utility>
#include <vector>

#include "contracalc/connection.hpp"

namespace contracalc {

// ---------------------------------------------------------------------------
// Exact inversion of small expression matrices (adjugate over determinant)
// ---------------------------------------------------------------------------

inline std::vector<std::vector<ScalarExpr>> expr_matrix_inverse(
    const std::vector<std::vector<ScalarExpr>>& m, const ScalarExpr& det) {
    const int n = static_cast<int>(m.size());
    std::vector<std::vector<ScalarExpr>> inv(static_cast<std::size_t>(n),
                                             std::vector<ScalarExpr>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<std::vector<ScalarExpr>> minor;
            minor.reserve(static_cast<std::size_t>(n - 1));
            for (int r = 0; r < n; ++r) {
                if (r == j) continue;  // cofactor of (j, i) for the adjugate transpose
                std::vector<ScalarExpr> row;
                row.reserve(static_cast<std::size_t>(n - 1));
                for (int c = 0; c < n; ++c)
                    if (c != i) row.push_back(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
                minor.push_back(std::move(row));
            }
            ScalarExpr cof = expr_determinant(std::move(minor));
            if ((i + j) % 2 == 1) cof = -cof;
            inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cof / det;
        }
    return inv;
}

// ---------------------------------------------------------------------------
// Symplectic structures
// ---------------------------------------------------------------------------

/// A symplectic chart: the 2-form omega, its inverse Poisson bivector
/// Pi = -(omega matrix)^{-1}, and the Liouville volume (1/m!) omega^m,
/// which satisfies Pi_{2m}(mu, mu) = 1.
class SymplecticStructure {
  public:
    static SymplecticStructure from_omega(DifferentialForm omega, const ProbEq& opts = {}) {
        validate_shape(omega, opts);
        const auto w = coefficient_matrix(omega);
        const ScalarExpr det = expr_determinant(w);
        if (is_identically_zero(omega.chart(), det, opts))
            throw ValidationError("omega-nondegenerate", "omega has identically zero determinant");
        const auto winv = expr_matrix_inverse(w, det);
        MultiVectorField pw(omega.chart(), 2);
        const int n = omega.chart().dim;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                pw.add_term({i, j},
                            -winv[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
        PoissonBivector pi = PoissonBivector::checked(std::move(pw), opts);
        return SymplecticStructure(std::move(omega), std::move(pi), opts);
    }

    static SymplecticStructure from_pi(PoissonBivector pi, const ProbEq& opts = {}) {
        const Chart& chart = pi.chart();
        const int n = chart.dim;
        if (n % 2 != 0)
            throw ValidationError("symplectic-dimension", "chart dimension must be even");
        std::vector<std::vector<ScalarExpr>> p(static_cast<std::size_t>(n),
                                               std::vector<ScalarExpr>(static_cast<std::size_t>(n)));
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                p[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = pi.entry(i, j);
        const ScalarExpr det = expr_determinant(p);
        if (is_identically_zero(chart, det, opts))
            throw ValidationError("omega-nondegenerate", "bivector has identically zero determinant");
        const auto pinv = expr_matrix_inverse(p, det);
        DifferentialForm omega(chart, 2);
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                omega.add_term({i, j},
                               -pinv[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
        validate_shape(omega, opts);
        return SymplecticStructure(std::move(omega), std::move(pi), opts);
    }

    const Chart& chart() const { return omega_.chart(); }
    const DifferentialForm& omega() const { return omega_; }
    const PoissonBivector& pi() const { return pi_; }
    const VolumeForm& liouville() const { return *liouville_; }
    int half_dim() const { return chart().dim / 2; }

    /// omega(e_i, e_j), the full antisymmetric coefficient matrix.
    ScalarExpr omega_entry(int i, int j) const {
        if (i == j) return ScalarExpr::integer(0);
        return i < j ? omega_.coefficient({i, j}) : -omega_.coefficient({j, i});
    }

  private:
    SymplecticStructure(DifferentialForm omega, PoissonBivector pi, const ProbEq& opts)
        : omega_(std::move(omega)), pi_(std::move(pi)) {
        // Liouville volume (1/m!) omega^m
        const int m = half_dim();
        DifferentialForm top = omega_;
        Rational factorial(1);
        for (int t = 2; t <= m; ++t) {
            top = wedge(top, omega_);
            factorial = factorial * Rational(t);
        }
        IndexList full;
        for (int i = 1; i <= chart().dim; ++i) full.push_back(i);
        const ScalarExpr coeff =
            ScalarExpr::constant(Rational(BigInt(1), factorial.numerator())) * top.coefficient(full);
        liouville_.emplace(VolumeForm::make(chart(), coeff, opts));
        // normalization Pi_{2m}(mu, mu) = 1, cf. the two definitions of mu
        if (!equal_probabilistic(chart(), pi_k(pi_, liouville_->mu(), liouville_->mu()),
                                 ScalarExpr::integer(1), opts))
            throw ValidationError("liouville-normalization",
                                  "Pi_{2m}(mu, mu) != 1 for the Liouville volume");
    }

    static void validate_shape(const DifferentialForm& omega, const ProbEq& opts) {
        if (omega.grade() != 2) throw GradeMismatchError("omega must be a 2-form");
        if (omega.chart().dim % 2 != 0)
            throw ValidationError("symplectic-dimension", "chart dimension must be even");
        if (!is_zero_probabilistic(exterior_derivative(omega), opts))
            throw ValidationError("omega-closed", "d omega != 0");
    }

    static std::vector<std::vector<ScalarExpr>> coefficient_matrix(const DifferentialForm& omega) {
        const int n = omega.chart().dim;
        std::vector<std::vector<ScalarExpr>> w(static_cast<std::size_t>(n),
                                               std::vector<ScalarExpr>(static_cast<std::size_t>(n)));
        for (const auto& [idx, f] : omega.coeffs()) {
            w[static_cast<std::size_t>(idx[0] - 1)][static_cast<std::size_t>(idx[1] - 1)] = f;
            w[static_cast<std::size_t>(idx[1] - 1)][static_cast<std::size_t>(idx[0] - 1)] = -f;
        }
        return w;
    }

    DifferentialForm omega_;
    PoissonBivector pi_;
    std::optional<VolumeForm> liouville_;
};

// ---------------------------------------------------------------------------
// Flat maps and omega_k
// ---------------------------------------------------------------------------

/// flat(X) = i(X) omega.
inline DifferentialForm flat1(const SymplecticStructure& s, const MultiVectorField& x) {
    if (x.grade() != 1) throw GradeMismatchError("flat1 needs a vector field");
    return interior_by_vector(x, s.omega());
}

/// flat_k(X_1 ^ ... ^ X_k) = flat(X_1) ^ ... ^ flat(X_k), columnwise.
inline DifferentialForm flat_k(const SymplecticStructure& s, const MultiVectorField& k) {
    const int g = k.grade();
    if (g == 0) return DifferentialForm::scalar(s.chart(), k.scalar_part());
    DifferentialForm out(s.chart(), g);
    std::vector<DifferentialForm> flat_basis;
    for (int i = 1; i <= s.chart().dim; ++i)
        flat_basis.push_back(flat1(s, basis_vector(s.chart(), i)));
    for (const auto& [idx, f] : k.coeffs()) {
        DifferentialForm prod = flat_basis[static_cast<std::size_t>(idx[0] - 1)];
        for (std::size_t t = 1; t < idx.size(); ++t)
            prod = wedge(prod, flat_basis[static_cast<std::size_t>(idx[t] - 1)]);
        out = out + f * prod;
    }
    return out;
}

/// omega_k(X, Y) = det(omega(X_p, Y_q)), extended bilinearly.
inline ScalarExpr omega_k(const SymplecticStructure& s, const MultiVectorField& x,
                          const MultiVectorField& y) {
    if (x.grade() != y.grade()) throw GradeMismatchError("omega_k needs equal grades");
    const int k = x.grade();
    if (k == 0) return x.scalar_part() * y.scalar_part();
    ScalarExpr acc = ScalarExpr::integer(0);
    for (const auto& [ix, fx] : x.coeffs())
        for (const auto& [iy, fy] : y.coeffs()) {
            std::vector<std::vector<ScalarExpr>> m(static_cast<std::size_t>(k),
                                                   std::vector<ScalarExpr>(static_cast<std::size_t>(k)));
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q)
                    m[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] =
                        s.omega_entry(ix[static_cast<std::size_t>(p)], iy[static_cast<std::size_t>(q)]);
            acc = acc + fx * fy * expr_determinant(std::move(m));
        }
    return acc;
}

// ---------------------------------------------------------------------------
// The star operator
// ---------------------------------------------------------------------------

/// star(eta) = i(sharp_k eta) mu with mu the Liouville volume.
inline DifferentialForm star(const SymplecticStructure& s, const DifferentialForm& eta) {
    return interior_by_vector(sharp_k(s.pi(), eta), s.liouville().mu());
}

/// Brylinski's operator through the star: delta = (-1)^{k+1} star d star.
inline DifferentialForm delta_via_star(const SymplecticStructure& s, const DifferentialForm& eta) {
    const int k = eta.grade();
    if (k == 0) return DifferentialForm::zero(s.chart(), 0);
    const DifferentialForm r = star(s, exterior_derivative(star(s, eta)));
    return (k + 1) % 2 == 0 ? r : -r;
}

// ---------------------------------------------------------------------------
// The induced covariant derivative nabla
// ---------------------------------------------------------------------------

/// nabla_X Y = (sharp . D_{flat X} . flat)(Y).
inline MultiVectorField nabla_vector(const SymplecticStructure& s, const ContravariantConnection& d,
                                     const MultiVectorField& x, const MultiVectorField& y) {
    return sharp1(s.pi(), d_form(d, flat1(s, x), flat1(s, y)));
}

/// nabla_X eta = (flat_k . D_{flat X} . sharp_k)(eta) on k-forms.
inline DifferentialForm nabla_form(const SymplecticStructure& s, const ContravariantConnection& d,
                                   const MultiVectorField& x, const DifferentialForm& eta) {
    return flat_k(s, d_multivector(d, flat1(s, x), sharp_k(s.pi(), eta)));
}

// ---------------------------------------------------------------------------
// Local formulas for curl and delta on a symplectic chart
// ---------------------------------------------------------------------------

/// Local curl formula: -sum_i i(flat(e_i)) D_{dx^i} K; equals the
/// definitional curl with respect to the Liouville volume.
inline MultiVectorField curl_local(const SymplecticStructure& s, const ContravariantConnection& d,
                                   const MultiVectorField& k, const ConnectionChecks& checks) {
    require_admissible(checks);
    const Chart& chart = s.chart();
    MultiVectorField out(chart, k.grade() - 1);
    for (int i = 1; i <= chart.dim; ++i)
        out = out + -interior_by_form(flat1(s, basis_vector(chart, i)),
                                      d_multivector(d, basis_form(chart, i), k));
    return out;
}

/// Local Brylinski formula: sum_i i(e_i) nabla_{sharp dx^i} eta.
inline DifferentialForm delta_local(const SymplecticStructure& s, const ContravariantConnection& d,
                                    const DifferentialForm& eta, const ConnectionChecks& checks) {
    require_admissible(checks);
    const Chart& chart = s.chart();
    DifferentialForm out(chart, eta.grade() - 1);
    for (int i = 1; i <= chart.dim; ++i) {
        // nabla_{sharp dx^i} eta = flat_k(D_{dx^i}(sharp_k eta))
        const DifferentialForm nab =
            flat_k(s, d_multivector(d, basis_form(chart, i), sharp_k(s.pi(), eta)));
        out = out + interior_by_vector(basis_vector(chart, i), nab);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The curvature identity and the changed-volume modular formula
// ---------------------------------------------------------------------------

/// Both sides of the curvature identity
///   (-1)^a sum_{i<j} omega(e_i,e_j) R_D(dx^i,dx^j) A
///     = sum_{i,j} e_i ^ i(flat(e_j)) R_D(dx^i,dx^j) A,
/// computed independently.
struct CurvatureIdentitySides {
    MultiVectorField lhs;
    MultiVectorField rhs;
};

inline CurvatureIdentitySides curvature_identity_sides(const SymplecticStructure& s,
                                                       const ContravariantConnection& d,
                                                       const MultiVectorField& a,
                                                       const ConnectionChecks& checks) {
    require_admissible(checks);
    const Chart& chart = s.chart();
    const int n = chart.dim;
    const int grade = a.grade();
    // R(dx^i, dx^j) A for i < j; antisymmetric in (i, j)
    std::vector<std::vector<MultiVectorField>> r(
        static_cast<std::size_t>(n + 1),
        std::vector<MultiVectorField>(static_cast<std::size_t>(n + 1),
                                      MultiVectorField::zero(chart, grade)));
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                curvature(d, basis_form(chart, i), basis_form(chart, j), a);

    const auto r_at = [&](int i, int j) -> MultiVectorField {
        if (i == j) return MultiVectorField::zero(chart, grade);
        if (i < j) return r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        return -r[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    };

    MultiVectorField lhs(chart, grade);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            const ScalarExpr w = s.omega_entry(i, j);
            if (w.is_zero_literal()) continue;
            lhs = lhs + w * r_at(i, j);
        }
    if (grade % 2 == 1) lhs = -lhs;

    MultiVectorField rhs(chart, grade);
    for (int i = 1; i <= n; ++i) {
        const MultiVectorField e_i = basis_vector(chart, i);
        for (int j = 1; j <= n; ++j) {
            const DifferentialForm fl = flat1(s, basis_vector(chart, j));
            rhs = rhs + wedge(e_i, interior_by_form(fl, r_at(i, j)));
        }
    }
    return {std::move(lhs), std::move(rhs)};
}

/// Checks the curvature identity and, as part of the same statement, that
/// the modular operator with respect to the Liouville volume vanishes.
inline bool main_identity_check(const SymplecticStructure& s, const ContravariantConnection& d,
                                const MultiVectorField& a, const ConnectionChecks& checks,
                                const ProbEq& opts = {}) {
    const auto sides = curvature_identity_sides(s, d, a, checks);
    if (!equal_probabilistic(sides.lhs, sides.rhs, opts)) return false;
    const MultiVectorField lam = modular_operator(s.pi(), s.liouville(), a);
    return is_zero_probabilistic(lam, opts.with_seed(opts.seed + 0xD15C));
}

/// Explicit local formula for the modular operator with respect to the
/// volume nu = f mu (mu Liouville), with the logarithmic derivatives
/// realized rationally as L_{sharp dx^i} log|f| = ((sharp dx^i) f) / f:
///   Lambda_nu A = (-1)^a sum_{i,j} F_i omega(e_i,e_j) D_{dx^j} A
///     + sum_{i,j} { sum_k F_k Gamma^{ij}_k - L_{sharp dx^i} F_j } e_i ^ i(flat(e_j)) A.
inline MultiVectorField modular_changed_volume(const SymplecticStructure& s,
                                               const ContravariantConnection& d, const ScalarExpr& f,
                                               const MultiVectorField& a,
                                               const ConnectionChecks& checks,
                                               const ProbEq& opts = {}) {
    require_admissible(checks);
    const Chart& chart = s.chart();
    const int n = chart.dim;
    if (is_identically_zero(chart, f, opts))
        throw ValidationError("volume-nonvanishing", "volume factor is identically zero");

    std::vector<MultiVectorField> sharp_basis;
    std::vector<ScalarExpr> log_deriv;  // F_i
    sharp_basis.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        sharp_basis.push_back(sharp1(s.pi(), basis_form(chart, i)));
        log_deriv.push_back(apply_vector(sharp_basis.back(), f) / f);
    }

    const int grade = a.grade();
    MultiVectorField term1(chart, grade);
    for (int j = 1; j <= n; ++j) {
        ScalarExpr coeff = ScalarExpr::integer(0);
        for (int i = 1; i <= n; ++i) {
            const ScalarExpr w = s.omega_entry(i, j);
            if (!w.is_zero_literal()) coeff = coeff + log_deriv[static_cast<std::size_t>(i - 1)] * w;
        }
        if (coeff.is_zero_literal()) continue;
        term1 = term1 + coeff * d_multivector(d, basis_form(chart, j), a);
    }
    if (grade % 2 == 1) term1 = -term1;

    MultiVectorField term2(chart, grade);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            ScalarExpr coeff = ScalarExpr::integer(0);
            for (int k = 1; k <= n; ++k) {
                const ScalarExpr& g = d.gamma(i, j, k);
                if (!g.is_zero_literal())
                    coeff = coeff + log_deriv[static_cast<std::size_t>(k - 1)] * g;
            }
            coeff = coeff - apply_vector(sharp_basis[static_cast<std::size_t>(i - 1)],
                                         log_deriv[static_cast<std::size_t>(j - 1)]);
            if (coeff.is_zero_literal()) continue;
            term2 = term2 + coeff * wedge(basis_vector(chart, i),
                                          interior_by_form(flat1(s, basis_vector(chart, j)), a));
        }
    return term1 + term2;
}

}  // namespace contracalc
