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

#include <tuple>
#include <utility>
#include <vector>

#include "contracalc/volume.hpp"

namespace contracalc {

// ---------------------------------------------------------------------------
// Rational matrix helpers (constant frame changes, Darboux data)
// ---------------------------------------------------------------------------

using RationalMatrix = std::vector<std::vector<Rational>>;

inline RationalMatrix rational_identity(int n) {
    RationalMatrix m(static_cast<std::size_t>(n),
                     std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rational(1);
    return m;
}

/// Gauss-Jordan inverse; throws when the matrix is singular.
inline RationalMatrix rational_inverse(RationalMatrix m) {
    const int n = static_cast<int>(m.size());
    RationalMatrix inv = rational_identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (!m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw Error("matrix is singular");
        std::swap(m[static_cast<std::size_t>(pivot)], m[static_cast<std::size_t>(col)]);
        std::swap(inv[static_cast<std::size_t>(pivot)], inv[static_cast<std::size_t>(col)]);
        const Rational lead = m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int c = 0; c < n; ++c) {
            m[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] =
                m[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] / lead;
            inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] =
                inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] / lead;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const Rational factor = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (factor.is_zero()) continue;
            for (int c = 0; c < n; ++c) {
                m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -
                    factor * m[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
                inv[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    inv[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -
                    factor * inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            }
        }
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Contravariant connections
// ---------------------------------------------------------------------------

/// Christoffel sections on the coordinate coframe:
/// D_{dx^i} dx^j = sum_k Gamma^{ij}_k dx^k. No structural constraint is
/// imposed at construction; the Poisson and torsion-free properties are
/// checked, not assumed.
class ContravariantConnection {
  public:
    ContravariantConnection(PoissonBivector pi, std::vector<ScalarExpr> gamma)
        : pi_(std::move(pi)), gamma_(std::move(gamma)) {
        const int n = chart().dim;
        if (static_cast<int>(gamma_.size()) != n * n * n)
            throw Error("christoffel array size does not match the chart dimension");
    }

    static ContravariantConnection zero(PoissonBivector pi) {
        const int n = pi.chart().dim;
        return ContravariantConnection(
            std::move(pi), std::vector<ScalarExpr>(static_cast<std::size_t>(n * n * n)));
    }

    const Chart& chart() const { return pi_.chart(); }
    const PoissonBivector& pi() const { return pi_; }

    const ScalarExpr& gamma(int i, int j, int k) const {
        return gamma_[flat_index(i, j, k)];
    }
    void set_gamma(int i, int j, int k, ScalarExpr v) { gamma_[flat_index(i, j, k)] = std::move(v); }

    /// Sparse list of nonzero entries (i, j, k, expr), for serialization.
    std::vector<std::tuple<int, int, int, ScalarExpr>> entries() const {
        std::vector<std::tuple<int, int, int, ScalarExpr>> out;
        const int n = chart().dim;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                for (int k = 1; k <= n; ++k)
                    if (!gamma(i, j, k).is_zero_literal()) out.emplace_back(i, j, k, gamma(i, j, k));
        return out;
    }

  private:
    std::size_t flat_index(int i, int j, int k) const {
        const int n = chart().dim;
        if (i < 1 || j < 1 || k < 1 || i > n || j > n || k > n)
            throw Error("christoffel index out of range");
        return static_cast<std::size_t>(((i - 1) * n + (j - 1)) * n + (k - 1));
    }

    PoissonBivector pi_;
    std::vector<ScalarExpr> gamma_;  // n^3, zero-filled by default
};

/// D_eta f = (sharp eta) f.
inline ScalarExpr d_scalar(const ContravariantConnection& d, const DifferentialForm& eta,
                           const ScalarExpr& f) {
    return apply_vector(sharp1(d.pi(), eta), f);
}

/// D_eta alpha for 1-forms:
/// D_eta(alpha_j dx^j) = ((sharp eta) alpha_j) dx^j + eta_i alpha_j Gamma^{ij}_k dx^k.
inline DifferentialForm d_form(const ContravariantConnection& d, const DifferentialForm& eta,
                               const DifferentialForm& alpha) {
    if (eta.grade() != 1 || alpha.grade() != 1)
        throw GradeMismatchError("d_form needs 1-form arguments");
    require_same_chart(eta.chart(), alpha.chart());
    const Chart& chart = d.chart();
    const MultiVectorField sharp_eta = sharp1(d.pi(), eta);
    DifferentialForm out(chart, 1);
    for (const auto& [ja, fa] : alpha.coeffs()) out.add_term(ja, apply_vector(sharp_eta, fa));
    for (const auto& [ie, fe] : eta.coeffs())
        for (const auto& [ja, fa] : alpha.coeffs())
            for (int k = 1; k <= chart.dim; ++k) {
                const ScalarExpr& g = d.gamma(ie[0], ja[0], k);
                if (!g.is_zero_literal()) out.add_term({k}, fe * fa * g);
            }
    return out;
}

/// The extension of D to multivectors of any grade:
/// <a_1 ^...^ a_k, D_eta A> = (sharp eta)<..., A> - sum_i <a_1 ^ .. D_eta a_i .. , A>.
inline MultiVectorField d_multivector(const ContravariantConnection& d, const DifferentialForm& eta,
                                      const MultiVectorField& a) {
    if (eta.grade() != 1) throw GradeMismatchError("d_multivector needs a 1-form direction");
    require_same_chart(eta.chart(), a.chart());
    const Chart& chart = d.chart();
    const int n = chart.dim;
    const int grade = a.grade();
    const MultiVectorField sharp_eta = sharp1(d.pi(), eta);
    if (grade == 0) return MultiVectorField::scalar(chart, apply_vector(sharp_eta, a.scalar_part()));

    // coefficients of D_eta dx^j
    std::vector<std::vector<ScalarExpr>> deta(
        static_cast<std::size_t>(n + 1), std::vector<ScalarExpr>(static_cast<std::size_t>(n + 1)));
    for (const auto& [ie, fe] : eta.coeffs())
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                const ScalarExpr& g = d.gamma(ie[0], j, k);
                if (!g.is_zero_literal())
                    deta[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                        deta[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] + fe * g;
            }

    MultiVectorField out(chart, grade);
    for (const auto& tuple : index_tuples(n, grade)) {
        ScalarExpr acc = apply_vector(sharp_eta, a.coefficient(tuple));
        for (std::size_t p = 0; p < tuple.size(); ++p)
            for (int k = 1; k <= n; ++k) {
                const ScalarExpr& c =
                    deta[static_cast<std::size_t>(tuple[p])][static_cast<std::size_t>(k)];
                if (c.is_zero_literal()) continue;
                IndexList replaced = tuple;
                replaced[p] = k;
                const int sign = sort_sign(replaced);
                if (sign == 0) continue;
                const ScalarExpr av = a.coefficient(replaced);
                if (av.is_zero_literal()) continue;
                acc = sign > 0 ? acc - c * av : acc + c * av;
            }
        out.add_term(tuple, acc);
    }
    return out;
}

/// D_alpha Pi as a bivector.
inline MultiVectorField d_pi(const ContravariantConnection& d, const DifferentialForm& alpha) {
    return d_multivector(d, alpha, d.pi().bivector());
}

/// D Pi = 0 in every coordinate direction (probabilistic).
inline bool is_poisson_connection(const ContravariantConnection& d, const ProbEq& opts = {}) {
    for (int i = 1; i <= d.chart().dim; ++i)
        if (!is_zero_probabilistic(d_pi(d, basis_form(d.chart(), i)),
                                   opts.with_seed(opts.seed + static_cast<std::uint64_t>(i))))
            return false;
    return true;
}

/// Koszul bracket on 1-forms:
/// [alpha, beta]_Pi = L_{sharp alpha} beta - L_{sharp beta} alpha + d<alpha^beta, Pi>.
inline DifferentialForm koszul_bracket(const PoissonBivector& pi, const DifferentialForm& alpha,
                                       const DifferentialForm& beta) {
    if (alpha.grade() != 1 || beta.grade() != 1)
        throw GradeMismatchError("koszul_bracket needs 1-forms");
    const ScalarExpr paired = pairing(wedge(alpha, beta), pi.bivector());
    return lie_derivative_by_vector(sharp1(pi, alpha), beta) -
           lie_derivative_by_vector(sharp1(pi, beta), alpha) +
           differential(pi.chart(), paired);
}

/// T_D(alpha, beta) = D_alpha beta - D_beta alpha - [alpha, beta]_Pi.
inline DifferentialForm torsion(const ContravariantConnection& d, const DifferentialForm& alpha,
                                const DifferentialForm& beta) {
    return d_form(d, alpha, beta) - d_form(d, beta, alpha) - koszul_bracket(d.pi(), alpha, beta);
}

inline bool is_torsion_free(const ContravariantConnection& d, const ProbEq& opts = {}) {
    const Chart& chart = d.chart();
    std::uint64_t salt = 0;
    for (int i = 1; i <= chart.dim; ++i)
        for (int j = i + 1; j <= chart.dim; ++j)
            if (!is_zero_probabilistic(torsion(d, basis_form(chart, i), basis_form(chart, j)),
                                       opts.with_seed(opts.seed + ++salt)))
                return false;
    return true;
}

/// Curvature 2-section applied to a multivector:
/// R_D(alpha, beta) = D_alpha D_beta - D_beta D_alpha - D_{[alpha,beta]_Pi}.
inline MultiVectorField curvature(const ContravariantConnection& d, const DifferentialForm& alpha,
                                  const DifferentialForm& beta, const MultiVectorField& a) {
    return d_multivector(d, alpha, d_multivector(d, beta, a)) -
           d_multivector(d, beta, d_multivector(d, alpha, a)) -
           d_multivector(d, koszul_bracket(d.pi(), alpha, beta), a);
}

/// Cached result of the two admissibility checks.
struct ConnectionChecks {
    bool poisson = false;
    bool torsion_free = false;
    bool ok() const { return poisson && torsion_free; }
};

inline ConnectionChecks check_connection(const ContravariantConnection& d, const ProbEq& opts = {}) {
    return ConnectionChecks{is_poisson_connection(d, opts),
                            is_torsion_free(d, opts.with_seed(opts.seed + 0x70FF))};
}

inline void require_admissible(const ConnectionChecks& checks) {
    if (!checks.poisson)
        throw PreconditionError("connection does not satisfy D Pi = 0", "connection-poisson");
    if (!checks.torsion_free)
        throw PreconditionError("connection has non-vanishing torsion", "connection-torsion-free");
}

/// Local coboundary formula: -sum_i e_i ^ D_{dx^i} A. Valid for Poisson
/// torsion-free connections; equals the Schouten-defined coboundary.
inline MultiVectorField coboundary_via_connection(const ContravariantConnection& d,
                                                  const MultiVectorField& a,
                                                  const ConnectionChecks& checks) {
    require_admissible(checks);
    const Chart& chart = d.chart();
    MultiVectorField out(chart, a.grade() + 1);
    for (int i = 1; i <= chart.dim; ++i)
        out = out + -wedge(basis_vector(chart, i), d_multivector(d, basis_form(chart, i), a));
    return out;
}

inline MultiVectorField coboundary_via_connection(const ContravariantConnection& d,
                                                  const MultiVectorField& a,
                                                  const ProbEq& opts = {}) {
    return coboundary_via_connection(d, a, check_connection(d, opts));
}

/// Same local formula over a constant frame f_j = sum_i M[i][j] e_i with its
/// dual coframe; for admissible connections the result is frame independent.
inline MultiVectorField coboundary_via_connection_frame(const ContravariantConnection& d,
                                                        const MultiVectorField& a,
                                                        const RationalMatrix& frame,
                                                        const ConnectionChecks& checks) {
    require_admissible(checks);
    const Chart& chart = d.chart();
    const int n = chart.dim;
    const RationalMatrix dual = rational_inverse(frame);  // coframe rows
    MultiVectorField out(chart, a.grade() + 1);
    for (int j = 0; j < n; ++j) {
        MultiVectorField f_j(chart, 1);
        DifferentialForm xi_j(chart, 1);
        for (int i = 0; i < n; ++i) {
            const Rational& m = frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!m.is_zero()) f_j.add_term({i + 1}, ScalarExpr::constant(m));
            const Rational& b = dual[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            if (!b.is_zero()) xi_j.add_term({i + 1}, ScalarExpr::constant(b));
        }
        out = out + -wedge(f_j, d_multivector(d, xi_j, a));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Builders for the three chart families used by the verification suites
// ---------------------------------------------------------------------------

/// Gamma = 0. Poisson and torsion-free exactly when Pi has constant
/// coefficients.
inline ContravariantConnection build_trivial(PoissonBivector pi) {
    return ContravariantConnection::zero(std::move(pi));
}

/// The documented canonical solution for Pi = phi dx^dy on a 2-chart:
///   Gamma^{11}_1 = -phi_y, Gamma^{12}_1 = -phi_x,
///   Gamma^{21}_2 =  phi_y, Gamma^{22}_2 =  phi_x,
/// all other entries zero. One point of the underdetermined family; chosen
/// so the remaining entries vanish.
inline ContravariantConnection build_2d_canonical(PoissonBivector pi, const ProbEq& opts = {}) {
    if (pi.chart().dim != 2) throw Error("build_2d_canonical needs a 2-dimensional chart");
    const ScalarExpr phi = pi.entry(1, 2);
    if (is_identically_zero(pi.chart(), phi, opts))
        throw ValidationError("phi-nonvanishing", "bivector coefficient is identically zero");
    const ScalarExpr phi_x = partial(phi, 1);
    const ScalarExpr phi_y = partial(phi, 2);
    auto d = ContravariantConnection::zero(std::move(pi));
    d.set_gamma(1, 1, 1, -phi_y);
    d.set_gamma(1, 2, 1, -phi_x);
    d.set_gamma(2, 1, 2, phi_y);
    d.set_gamma(2, 2, 2, phi_x);
    return d;
}

/// Symplectic connections on a chart with a constant nondegenerate 2-form,
/// parametrized by a totally symmetric S_{abc}: the covariant Christoffels
/// are obtained by raising the last index of S with the inverse of omega,
/// then converted to the contravariant side via D_alpha beta = flat(nabla_
/// {sharp alpha} sharp beta). S = 0 gives Gamma = 0.
inline ContravariantConnection build_darboux_symmetric(const DifferentialForm& omega,
                                                       const std::vector<ScalarExpr>& s,
                                                       const ProbEq& opts = {}) {
    const Chart& chart = omega.chart();
    const int n = chart.dim;
    if (omega.grade() != 2) throw GradeMismatchError("omega must be a 2-form");
    if (n % 2 != 0) throw ValidationError("symplectic-dimension", "chart dimension must be even");
    if (static_cast<int>(s.size()) != n * n * n)
        throw Error("symmetric tensor array size does not match the chart dimension");
    const auto sidx = [n](int a, int b, int c) {
        return static_cast<std::size_t>(((a - 1) * n + (b - 1)) * n + (c - 1));
    };
    const auto s_at = [&](int a, int b, int c) -> const ScalarExpr& { return s[sidx(a, b, c)]; };

    // symmetry of S, checked probabilistically on the two generating swaps
    std::uint64_t salt = 0;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int c = 1; c <= n; ++c) {
                if (!equal_probabilistic(chart, s_at(a, b, c), s_at(b, a, c),
                                         opts.with_seed(opts.seed + ++salt)) ||
                    !equal_probabilistic(chart, s_at(a, b, c), s_at(a, c, b),
                                         opts.with_seed(opts.seed + ++salt)))
                    throw ValidationError("symmetric-tensor", "S is not totally symmetric");
            }

    // constant coefficient matrix of omega
    RationalMatrix w(static_cast<std::size_t>(n),
                     std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
    for (const auto& [idx, f] : omega.coeffs()) {
        if (!f.is_const())
            throw ValidationError("omega-constant", "builder needs constant omega coefficients");
        w[static_cast<std::size_t>(idx[0] - 1)][static_cast<std::size_t>(idx[1] - 1)] = f.value();
        w[static_cast<std::size_t>(idx[1] - 1)][static_cast<std::size_t>(idx[0] - 1)] = -f.value();
    }
    const RationalMatrix winv = rational_inverse(w);

    // covariant Christoffels: omega(nabla_{e_a} e_b, e_c) = S_{abc}
    std::vector<ScalarExpr> nabla(static_cast<std::size_t>(n * n * n));
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int dd = 1; dd <= n; ++dd) {
                ScalarExpr acc = ScalarExpr::integer(0);
                for (int c = 1; c <= n; ++c) {
                    const Rational& q =
                        winv[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(dd - 1)];
                    if (!q.is_zero()) acc = acc + ScalarExpr::constant(q) * s_at(a, b, c);
                }
                nabla[sidx(a, b, dd)] = acc;
            }

    // Pi = -(omega matrix)^{-1}; constant, hence Poisson
    MultiVectorField pw(chart, 2);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            const Rational p = -winv[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
            if (!p.is_zero()) pw.add_term({i, j}, ScalarExpr::constant(p));
        }
    PoissonBivector pi = PoissonBivector::checked(std::move(pw), opts);

    // Gamma^{ij}_k = sum_{p,q,d} P_{pi} P_{qj} nabla^d_{pq} W_{dk}
    const auto p_at = [&](int row, int col) {
        return -winv[static_cast<std::size_t>(row - 1)][static_cast<std::size_t>(col - 1)];
    };
    auto d = ContravariantConnection::zero(std::move(pi));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                ScalarExpr acc = ScalarExpr::integer(0);
                for (int p = 1; p <= n; ++p) {
                    const Rational pi_p = p_at(p, i);
                    if (pi_p.is_zero()) continue;
                    for (int q = 1; q <= n; ++q) {
                        const Rational pi_q = p_at(q, j);
                        if (pi_q.is_zero()) continue;
                        for (int dd = 1; dd <= n; ++dd) {
                            const Rational& wdk =
                                w[static_cast<std::size_t>(dd - 1)][static_cast<std::size_t>(k - 1)];
                            if (wdk.is_zero()) continue;
                            const ScalarExpr& nb = nabla[sidx(p, q, dd)];
                            if (nb.is_zero_literal()) continue;
                            acc = acc + ScalarExpr::constant(pi_p * pi_q * wdk) * nb;
                        }
                    }
                }
                if (!acc.is_zero_literal()) d.set_gamma(i, j, k, acc);
            }
    return d;
}

}  // namespace contracalc
