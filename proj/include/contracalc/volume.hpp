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

#include "contracalc/poisson.hpp"

namespace contracalc {

/// A non-vanishing top-degree form mu = m(x) dx^1 ^ ... ^ dx^n together with
/// its dual top multivector mu_hat = (1/m) e_1 ^ ... ^ e_n, normalized so
/// that <mu, mu_hat> = 1 identically.
class VolumeForm {
  public:
    static VolumeForm make(const Chart& chart, ScalarExpr coefficient, const ProbEq& opts = {}) {
        if (is_identically_zero(chart, coefficient, opts))
            throw ValidationError("volume-nonvanishing", "volume coefficient is identically zero");
        return VolumeForm(chart, std::move(coefficient));
    }
    /// The coordinate volume dx^1 ^ ... ^ dx^n.
    static VolumeForm standard(const Chart& chart) {
        return VolumeForm(chart, ScalarExpr::integer(1));
    }

    const Chart& chart() const { return mu_.chart(); }
    const DifferentialForm& mu() const { return mu_; }
    const MultiVectorField& mu_hat() const { return mu_hat_; }
    const ScalarExpr& coefficient() const { return m_; }

    /// Volume scaled by a (non-vanishing) function.
    VolumeForm scaled(const ScalarExpr& f, const ProbEq& opts = {}) const {
        return make(chart(), f * m_, opts);
    }

  private:
    VolumeForm(const Chart& chart, ScalarExpr m)
        : m_(std::move(m)), mu_(chart, chart.dim), mu_hat_(chart, chart.dim) {
        IndexList top;
        for (int i = 1; i <= chart.dim; ++i) top.push_back(i);
        mu_.add_term(top, m_);
        mu_hat_.add_term(top, ScalarExpr::integer(1) / m_);
    }

    ScalarExpr m_;
    DifferentialForm mu_;
    MultiVectorField mu_hat_;
};

/// mu_flat(A) = i(A) mu, an (n-a)-form.
inline DifferentialForm mu_flat(const VolumeForm& vol, const MultiVectorField& a) {
    return interior_by_vector(a, vol.mu());
}

/// The inverse isomorphism: <beta, mu_sharp(alpha)> = <beta ^ alpha, mu_hat>.
inline MultiVectorField mu_sharp(const VolumeForm& vol, const DifferentialForm& alpha) {
    return interior_by_form(alpha, vol.mu_hat());
}

/// The a-th curl operator with respect to mu: mu_sharp . d . mu_flat.
inline MultiVectorField curl(const VolumeForm& vol, const MultiVectorField& a) {
    if (a.grade() == 0) return MultiVectorField::zero(vol.chart(), 0);
    return mu_sharp(vol, exterior_derivative(mu_flat(vol, a)));
}

/// The modular vector field with respect to mu: the unique Xi with
/// L_Pi mu = i(Xi) mu; computed as -curl(Pi).
inline MultiVectorField modular_vector_field(const PoissonBivector& pi, const VolumeForm& vol) {
    require_same_chart(pi.chart(), vol.chart());
    return -curl(vol, pi.bivector());
}

/// The a-th modular operator: (curl . coboundary - coboundary . curl) A,
/// which also equals (-1)^a [Xi_mu, A]_S.
inline MultiVectorField modular_operator(const PoissonBivector& pi, const VolumeForm& vol,
                                         const MultiVectorField& a) {
    require_same_chart(pi.chart(), vol.chart());
    return curl(vol, coboundary(pi, a)) - coboundary(pi, curl(vol, a));
}

/// Checks the curl/Schouten compatibility displays:
///   (-1)^{(a-1)(b-1)} [A,B]_S = (-1)^b curl(A^B) - curl(A)^B - (-1)^b A^curl(B)
///   curl[A,B]_S = [curl A, B]_S + (-1)^{a-1} [A, curl B]_S
inline bool koszul_curl_identity_check(const VolumeForm& vol, const MultiVectorField& a,
                                       const MultiVectorField& b, const ProbEq& opts = {}) {
    const int ga = a.grade(), gb = b.grade();
    const auto sgn = [](int e) { return e % 2 == 0 ? 1 : -1; };

    const MultiVectorField bracket = schouten(a, b);
    MultiVectorField lhs = bracket;
    if (sgn((ga - 1) * (gb - 1)) < 0) lhs = -lhs;
    MultiVectorField rhs = curl(vol, wedge(a, b)) - wedge(a, curl(vol, b));
    if (sgn(gb) < 0) rhs = -rhs;
    rhs = rhs - wedge(curl(vol, a), b);
    if (!equal_probabilistic(lhs, rhs, opts)) return false;

    MultiVectorField lhs2 = curl(vol, bracket);
    MultiVectorField tail = schouten(a, curl(vol, b));
    if (sgn(ga - 1) < 0) tail = -tail;
    MultiVectorField rhs2 = schouten(curl(vol, a), b) + tail;
    return equal_probabilistic(lhs2, rhs2, opts.with_seed(opts.seed + 0x9127));
}

}  // namespace contracalc
