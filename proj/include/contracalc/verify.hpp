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

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contracalc/chartspec.hpp"
#include "contracalc/random_gen.hpp"

namespace contracalc {

// ---------------------------------------------------------------------------
// Named identity suites driven by deterministic random inputs. These are the
// machine-checkable statements behind `contracalc verify`.
// ---------------------------------------------------------------------------

struct VerifyOptions {
    int trials = 8;
    std::uint64_t seed = 0;
    int max_degree = 3;
    int cases = 8;  // per identity

    ProbEq eq(std::uint64_t salt) const {
        ProbEq p;
        p.trials = trials;
        p.seed = seed ^ (salt * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL);
        return p;
    }
    GenOptions gen() const {
        GenOptions g;
        g.max_degree = max_degree;
        return g;
    }
};

struct IdentityResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    bool skipped = false;
    std::string skip_reason;
    std::vector<std::string> failure_notes;

    bool ok() const { return skipped || failures == 0; }
};

struct SuiteReport {
    std::string suite;
    bool skipped = false;
    std::string skip_reason;
    std::vector<IdentityResult> identities;

    bool ok() const {
        if (skipped) return true;
        for (const auto& r : identities)
            if (!r.ok()) return false;
        return true;
    }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    return h;
}

/// One identity: run `cases` deterministic instances. The callback returns
/// true on success and may fill `note` with the failing operands.
class SuiteBuilder {
  public:
    SuiteBuilder(std::string suite, const VerifyOptions& opts) : opts_(opts) {
        report_.suite = std::move(suite);
    }

    using CaseFn = std::function<bool(int, Rng&, const ProbEq&, std::string& note)>;

    void identity(const std::string& name, const CaseFn& fn, int cases_override = 0) {
        IdentityResult r;
        r.name = name;
        r.cases = cases_override > 0 ? cases_override : opts_.cases;
        const std::uint64_t base = fnv1a(report_.suite + "/" + name) ^ opts_.seed;
        for (int c = 0; c < r.cases; ++c) {
            Rng rng = Rng(base).fork(static_cast<std::uint64_t>(c));
            std::string note;
            bool pass = false;
            try {
                pass = fn(c, rng, opts_.eq(base + static_cast<std::uint64_t>(c)), note);
            } catch (const Error& e) {
                note = std::string("exception: ") + e.what();
            }
            if (!pass) {
                ++r.failures;
                if (r.failure_notes.size() < 3)
                    r.failure_notes.push_back("case " + std::to_string(c) +
                                              (note.empty() ? "" : ": " + note));
            }
        }
        report_.identities.push_back(std::move(r));
    }

    void skipped(const std::string& name, const std::string& reason) {
        IdentityResult r;
        r.name = name;
        r.skipped = true;
        r.skip_reason = reason;
        report_.identities.push_back(std::move(r));
    }

    SuiteReport take() { return std::move(report_); }

  private:
    SuiteReport report_;
    const VerifyOptions& opts_;
};

inline int pick_grade(Rng& rng, int n, int lo = 0) {
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - lo + 1)));
}

inline int sign_pow(int e) { return e % 2 == 0 ? 1 : -1; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Suite implementations
// ---------------------------------------------------------------------------

inline SuiteReport suite_exterior(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("exterior", opts);
    const Chart& chart = lc.chart;
    const int n = chart.dim;
    const GenOptions g = opts.gen();

    b.identity("wedge-graded-commutativity", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % (n + 1);
        const int bb = detail::pick_grade(rng, n - a);
        const auto A = random_multivector(chart, a, rng, g);
        const auto B = random_multivector(chart, bb, rng, g);
        auto rhs = wedge(B, A);
        if ((a * bb) % 2 == 1) rhs = -rhs;
        if (equal_probabilistic(wedge(A, B), rhs, eq)) return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B);
        return false;
    });
    b.identity("wedge-associativity", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = detail::pick_grade(rng, 2);
        const int bb = detail::pick_grade(rng, 2);
        const int cc = detail::pick_grade(rng, 1);
        const auto A = random_multivector(chart, std::min(a, n), rng, g);
        const auto B = random_multivector(chart, std::min(bb, n), rng, g);
        const auto C = random_multivector(chart, std::min(cc, n), rng, g);
        if (equal_probabilistic(wedge(wedge(A, B), C), wedge(A, wedge(B, C)), eq)) return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B) + "; C = " + to_text(C);
        return false;
    });
    b.identity("interior-vector-adjunction", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % (n + 1);
        const int p = a + detail::pick_grade(rng, n - a);
        const auto A = random_multivector(chart, a, rng, g);
        const auto eta = random_form(chart, p, rng, g);
        const auto B = random_multivector(chart, p - a, rng, g);
        if (equal_probabilistic(chart, pairing(interior_by_vector(A, eta), B),
                                pairing(eta, wedge(A, B)), eq))
            return true;
        note = "A = " + to_text(A) + "; eta = " + to_text(eta) + "; B = " + to_text(B);
        return false;
    });
    b.identity("interior-form-adjunction", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int p = cs % (n + 1);
        const int a = p + detail::pick_grade(rng, n - p);
        const auto eta = random_form(chart, p, rng, g);
        const auto A = random_multivector(chart, a, rng, g);
        const auto tau = random_form(chart, a - p, rng, g);
        if (equal_probabilistic(chart, pairing(tau, interior_by_form(eta, A)),
                                pairing(wedge(tau, eta), A), eq))
            return true;
        note = "eta = " + to_text(eta) + "; A = " + to_text(A) + "; tau = " + to_text(tau);
        return false;
    });
    b.identity("interior-wedge-composition", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = 1;
        const int bb = 1 + detail::pick_grade(rng, n - 2);
        const auto A = random_multivector(chart, a, rng, g);
        const auto B = random_multivector(chart, bb, rng, g);
        const auto eta = random_form(chart, n, rng, g);
        if (equal_probabilistic(interior_by_vector(wedge(A, B), eta),
                                interior_by_vector(B, interior_by_vector(A, eta)), eq))
            return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B) + "; eta = " + to_text(eta);
        return false;
    });
    b.identity("interior-of-wedged-vector", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        if (n < 2) return true;
        const int a = n >= 2 ? 1 + cs % (n - 1) : 1;
        const auto alpha = random_form(chart, 1, rng, g);
        const auto X = random_multivector(chart, 1, rng, g);
        const auto A = random_multivector(chart, a, rng, g);
        const ScalarExpr ax = pairing(alpha, X);
        auto rhs = wedge(X, interior_by_form(alpha, A)) +
                   (a % 2 == 0 ? ax : -ax) * A;
        if (equal_probabilistic(interior_by_form(alpha, wedge(X, A)), rhs, eq)) return true;
        note = "alpha = " + to_text(alpha) + "; X = " + to_text(X) + "; A = " + to_text(A);
        return false;
    });
    b.identity("d-squared", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        GenOptions gd = g;
        gd.allow_division = true;
        const auto eta = random_form(chart, k, rng, gd);
        if (is_zero_probabilistic(exterior_derivative(exterior_derivative(eta)), eq)) return true;
        note = "eta = " + to_text(eta);
        return false;
    });
    b.identity("pairing-bilinearity", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto eta = random_form(chart, k, rng, g);
        const auto eta2 = random_form(chart, k, rng, g);
        const auto A = random_multivector(chart, k, rng, g);
        const ScalarExpr f = random_polynomial(chart, rng, g);
        if (equal_probabilistic(chart, pairing(f * eta + eta2, A),
                                f * pairing(eta, A) + pairing(eta2, A), eq))
            return true;
        note = "eta = " + to_text(eta) + "; A = " + to_text(A);
        return false;
    });
    return b.take();
}

inline SuiteReport suite_schouten(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("schouten", opts);
    const Chart& chart = lc.chart;
    const PoissonBivector& pi = lc.pi;
    const int n = chart.dim;
    const GenOptions g = opts.gen();

    const auto rand_graded = [&](Rng& rng, int maxg) {
        return random_multivector(chart, detail::pick_grade(rng, std::min(maxg, n)), rng, g);
    };

    b.identity("s1-antisymmetry", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto A = rand_graded(rng, 2);
        const auto B = rand_graded(rng, 2);
        if (A.grade() + B.grade() < 1) return true;
        auto rhs = schouten(B, A);
        if (detail::sign_pow((A.grade() - 1) * (B.grade() - 1)) > 0) rhs = -rhs;
        if (equal_probabilistic(schouten(A, B), rhs, eq)) return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B);
        return false;
    });
    b.identity("s2-graded-jacobi", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto A = rand_graded(rng, 2);
        const auto B = rand_graded(rng, 2);
        const auto C = rand_graded(rng, 2);
        const int a = A.grade(), bb = B.grade(), cc = C.grade();
        auto t1 = schouten(A, schouten(B, C));
        auto t2 = schouten(B, schouten(C, A));
        auto t3 = schouten(C, schouten(A, B));
        const auto total = (detail::sign_pow((a - 1) * (cc - 1)) > 0 ? t1 : -t1) +
                           (detail::sign_pow((bb - 1) * (a - 1)) > 0 ? t2 : -t2) +
                           (detail::sign_pow((cc - 1) * (bb - 1)) > 0 ? t3 : -t3);
        if (is_zero_probabilistic(total, eq)) return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B) + "; C = " + to_text(C);
        return false;
    });
    b.identity("s3-wedge-rule", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto A = rand_graded(rng, 2);
        const auto B = rand_graded(rng, 1);
        const auto C = rand_graded(rng, 1);
        const int a = A.grade(), cc = C.grade();
        auto t2 = wedge(schouten(A, B), C);
        if (detail::sign_pow((a - 1) * cc) < 0) t2 = -t2;
        if (equal_probabilistic(schouten(A, wedge(B, C)), wedge(B, schouten(A, C)) + t2, eq))
            return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B) + "; C = " + to_text(C);
        return false;
    });
    b.identity("s4-wedge-rule", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto A = rand_graded(rng, 1);
        const auto B = rand_graded(rng, 1);
        const auto C = rand_graded(rng, 2);
        const int a = A.grade(), cc = C.grade();
        auto t2 = wedge(A, schouten(B, C));
        if (detail::sign_pow(a * (cc - 1)) < 0) t2 = -t2;
        if (equal_probabilistic(schouten(wedge(A, B), C), wedge(schouten(A, C), B) + t2, eq))
            return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B) + "; C = " + to_text(C);
        return false;
    });
    b.identity("interior-characterization", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = 1 + detail::pick_grade(rng, std::min(1, n - 1));
        const int bb = 1 + detail::pick_grade(rng, std::min(1, n - 1));
        const auto A = random_multivector(chart, a, rng, g);
        const auto B = random_multivector(chart, bb, rng, g);
        const auto AB = schouten(A, B);
        const auto AwB = wedge(A, B);
        const int p = cs % (n + 1);
        const auto eta = random_form(chart, p, rng, g);
        const auto t1 = interior_by_vector(A, exterior_derivative(interior_by_vector(B, eta)));
        const auto t2 = interior_by_vector(B, exterior_derivative(interior_by_vector(A, eta)));
        const auto t3 = interior_by_vector(AwB, exterior_derivative(eta));
        const auto t4 = exterior_derivative(interior_by_vector(AwB, eta));
        const auto rhs = t1 + (detail::sign_pow((a - 1) * (bb - 1)) > 0 ? -t2 : t2) +
                         (detail::sign_pow((a - 1) * bb) > 0 ? -t3 : t3) +
                         (detail::sign_pow(a * (bb - 1)) > 0 ? -t4 : t4);
        if (equal_probabilistic(interior_by_vector(AB, eta), rhs, eq)) return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B) + "; eta = " + to_text(eta);
        return false;
    });
    b.identity("hamiltonian-bracket", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const ScalarExpr f = random_scalar(chart, rng, g);
        const auto lhs = hamiltonian(pi, f);
        const auto rhs = -schouten(MultiVectorField::scalar(chart, f), pi.bivector());
        if (equal_probabilistic(lhs, rhs, eq)) return true;
        note = "f = " + to_text(f, chart);
        return false;
    });
    b.identity("implementations-agree", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto A = rand_graded(rng, 2);
        const auto B = rand_graded(rng, 2);
        if (A.grade() + B.grade() < 1) return true;
        if (equal_probabilistic(schouten(A, B), schouten_leibniz(A, B), eq)) return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B);
        return false;
    });
    b.identity("sharp-homomorphism", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const ScalarExpr f = random_scalar(chart, rng, g);
        const ScalarExpr h = random_scalar(chart, rng, g);
        const auto br = koszul_bracket(pi, differential(chart, f), differential(chart, h));
        const auto lhs = sharp1(pi, br);
        const auto rhs = schouten(hamiltonian(pi, f), hamiltonian(pi, h));
        if (equal_probabilistic(lhs, rhs, eq)) return true;
        note = "f = " + to_text(f, chart) + "; g = " + to_text(h, chart);
        return false;
    });
    return b.take();
}

inline SuiteReport suite_canonical(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("canonical", opts);
    const Chart& chart = lc.chart;
    const PoissonBivector& pi = lc.pi;
    const VolumeForm& vol = lc.volume;
    const int n = chart.dim;
    const GenOptions g = opts.gen();

    b.identity("d-squared", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto eta = random_form(chart, k, rng, g);
        if (is_zero_probabilistic(exterior_derivative(exterior_derivative(eta)), eq)) return true;
        note = "eta = " + to_text(eta);
        return false;
    });
    b.identity("coboundary-squared", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % (n + 1);
        const auto A = random_multivector(chart, a, rng, g);
        if (is_zero_probabilistic(coboundary(pi, coboundary(pi, A)), eq)) return true;
        note = "A = " + to_text(A);
        return false;
    });
    b.identity("delta-squared", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto eta = random_form(chart, k, rng, g);
        if (is_zero_probabilistic(delta_brylinski(pi, delta_brylinski(pi, eta)), eq)) return true;
        note = "eta = " + to_text(eta);
        return false;
    });
    b.identity("curl-squared", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % (n + 1);
        const auto A = random_multivector(chart, a, rng, g);
        if (is_zero_probabilistic(curl(vol, curl(vol, A)), eq)) return true;
        note = "A = " + to_text(A);
        return false;
    });
    b.identity("sharp-chain-map", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % n;
        const auto eta = random_form(chart, k, rng, g);
        const auto lhs = sharp_k(pi, exterior_derivative(eta));
        const auto rhs = coboundary(pi, sharp_k(pi, eta));
        if (equal_probabilistic(lhs, rhs, eq)) return true;
        note = "eta = " + to_text(eta);
        return false;
    });
    b.identity("coboundary-grade0-hamiltonian", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const ScalarExpr f = random_scalar(chart, rng, g);
        if (equal_probabilistic(coboundary(pi, MultiVectorField::scalar(chart, f)),
                                hamiltonian(pi, f), eq))
            return true;
        note = "f = " + to_text(f, chart);
        return false;
    });
    b.identity("delta-on-exact", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const ScalarExpr f = random_scalar(chart, rng, g);
        const ScalarExpr h = random_scalar(chart, rng, g);
        const auto lhs = delta_brylinski(pi, f * differential(chart, h));
        if (equal_probabilistic(chart, lhs.scalar_part(), poisson_bracket(pi, f, h), eq))
            return true;
        note = "f = " + to_text(f, chart) + "; g = " + to_text(h, chart);
        return false;
    });
    return b.take();
}

inline SuiteReport suite_curl_modular(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("curl-modular", opts);
    const Chart& chart = lc.chart;
    const PoissonBivector& pi = lc.pi;
    const VolumeForm& vol = lc.volume;
    const int n = chart.dim;
    const GenOptions g = opts.gen();

    b.identity("mu-maps-inverse", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % (n + 1);
        const auto A = random_multivector(chart, a, rng, g);
        const auto eta = random_form(chart, a, rng, g);
        if (equal_probabilistic(mu_sharp(vol, mu_flat(vol, A)), A, eq) &&
            equal_probabilistic(mu_flat(vol, mu_sharp(vol, eta)), eta, eq))
            return true;
        note = "A = " + to_text(A) + "; eta = " + to_text(eta);
        return false;
    });
    b.identity("modular-field-consistency", [&](int, Rng&, const ProbEq& eq, std::string& note) {
        const auto xi = modular_vector_field(pi, vol);
        const auto lhs = lie_derivative_by_bivector(pi.bivector(), vol.mu());
        const auto rhs = interior_by_vector(xi, vol.mu());
        if (equal_probabilistic(lhs, rhs, eq)) return true;
        note = "Xi = " + to_text(xi);
        return false;
    }, 1);
    b.identity("curl-of-modular-field", [&](int, Rng&, const ProbEq& eq, std::string& note) {
        const auto xi = modular_vector_field(pi, vol);
        if (is_zero_probabilistic(curl(vol, xi), eq)) return true;
        note = "Xi = " + to_text(xi);
        return false;
    }, 1);
    b.identity("lambda0-is-modular-derivative", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const ScalarExpr f = random_scalar(chart, rng, g);
        const auto lam = modular_operator(pi, vol, MultiVectorField::scalar(chart, f));
        const auto xi = modular_vector_field(pi, vol);
        if (equal_probabilistic(chart, lam.scalar_part(), apply_vector(xi, f), eq)) return true;
        note = "F = " + to_text(f, chart);
        return false;
    });
    b.identity("lambda-schouten-formula", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % (n + 1);
        const auto A = random_multivector(chart, a, rng, g);
        const auto lhs = modular_operator(pi, vol, A);
        auto rhs = schouten(modular_vector_field(pi, vol), A);
        if (detail::sign_pow(a) < 0) rhs = -rhs;
        if (equal_probabilistic(lhs, rhs, eq)) return true;
        note = "A = " + to_text(A);
        return false;
    });
    b.identity("curl-schouten-compatibility", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % (std::min(2, n) + 1);
        const int bb = 1 + detail::pick_grade(rng, std::min(1, n - 1));
        const auto A = random_multivector(chart, a, rng, g);
        const auto B = random_multivector(chart, bb, rng, g);
        if (koszul_curl_identity_check(vol, A, B, eq)) return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B);
        return false;
    });
    return b.take();
}

inline SuiteReport suite_connection(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("connection", opts);
    if (!lc.connection) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "no connection declared";
        return r;
    }
    const ContravariantConnection& d = *lc.connection;
    const Chart& chart = lc.chart;
    const PoissonBivector& pi = lc.pi;
    const GenOptions g = opts.gen();

    b.identity("is-poisson-connection", [&](int, Rng&, const ProbEq& eq, std::string&) {
        return is_poisson_connection(d, eq);
    }, 1);
    b.identity("is-torsion-free", [&](int, Rng&, const ProbEq& eq, std::string&) {
        return is_torsion_free(d, eq);
    }, 1);
    b.identity("direction-linearity", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const ScalarExpr f = random_scalar(chart, rng, g);
        const auto eta = random_form(chart, 1, rng, g);
        const auto alpha = random_form(chart, 1, rng, g);
        if (equal_probabilistic(d_form(d, f * eta, alpha), f * d_form(d, eta, alpha), eq))
            return true;
        note = "f = " + to_text(f, chart) + "; eta = " + to_text(eta);
        return false;
    });
    b.identity("leibniz-wedge", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % chart.dim;
        const auto eta = random_form(chart, 1, rng, g);
        const auto A = random_multivector(chart, a, rng, g);
        const auto B = random_multivector(chart, 1, rng, g);
        const auto lhs = d_multivector(d, eta, wedge(A, B));
        const auto rhs = wedge(d_multivector(d, eta, A), B) + wedge(A, d_multivector(d, eta, B));
        if (equal_probabilistic(lhs, rhs, eq)) return true;
        note = "A = " + to_text(A) + "; B = " + to_text(B);
        return false;
    });
    b.identity("interior-commutation", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = 1 + cs % chart.dim;
        const auto eta = random_form(chart, 1, rng, g);
        const auto alpha = random_form(chart, 1, rng, g);
        const auto A = random_multivector(chart, a, rng, g);
        const auto lhs = d_multivector(d, eta, interior_by_form(alpha, A));
        const auto rhs = interior_by_form(alpha, d_multivector(d, eta, A)) +
                         interior_by_form(d_form(d, eta, alpha), A);
        if (equal_probabilistic(lhs, rhs, eq)) return true;
        note = "alpha = " + to_text(alpha) + "; A = " + to_text(A);
        return false;
    });
    b.identity("koszul-exact-forms", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const ScalarExpr f = random_scalar(chart, rng, g);
        const ScalarExpr h = random_scalar(chart, rng, g);
        const auto br = koszul_bracket(pi, differential(chart, f), differential(chart, h));
        if (equal_probabilistic(br, -differential(chart, poisson_bracket(pi, f, h)), eq))
            return true;
        note = "f = " + to_text(f, chart) + "; g = " + to_text(h, chart);
        return false;
    });
    b.identity("torsion-tensorial", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto alpha = random_form(chart, 1, rng, g);
        const auto beta = random_form(chart, 1, rng, g);
        const ScalarExpr f = random_scalar(chart, rng, g);
        if (equal_probabilistic(torsion(d, f * alpha, beta), f * torsion(d, alpha, beta), eq) &&
            equal_probabilistic(torsion(d, alpha, f * beta), f * torsion(d, alpha, beta), eq))
            return true;
        note = "alpha = " + to_text(alpha) + "; beta = " + to_text(beta);
        return false;
    });
    b.identity("curvature-antisymmetric-tensorial", [&](int, Rng& rng, const ProbEq& eq,
                                                        std::string& note) {
        const auto alpha = random_form(chart, 1, rng, g);
        const auto beta = random_form(chart, 1, rng, g);
        const auto A = random_multivector(chart, 1, rng, g);
        const ScalarExpr f = random_scalar(chart, rng, g);
        if (equal_probabilistic(curvature(d, alpha, beta, A), -curvature(d, beta, alpha, A), eq) &&
            equal_probabilistic(curvature(d, alpha, beta, f * A),
                                f * curvature(d, alpha, beta, A), eq))
            return true;
        note = "alpha = " + to_text(alpha) + "; A = " + to_text(A);
        return false;
    });
    return b.take();
}

inline SuiteReport suite_thm4(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("thm4", opts);
    if (!lc.connection) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "no connection declared";
        return r;
    }
    const ContravariantConnection& d = *lc.connection;
    const ConnectionChecks checks = check_connection(d, opts.eq(0xF00D));
    if (!checks.ok()) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "connection is not Poisson/torsion-free";
        return r;
    }
    const Chart& chart = lc.chart;
    const int n = chart.dim;
    const GenOptions g = opts.gen();

    b.identity("local-coboundary-formula", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % n;
        const auto A = random_multivector(chart, a, rng, g);
        if (equal_probabilistic(coboundary_via_connection(d, A, checks), coboundary(lc.pi, A), eq))
            return true;
        note = "A = " + to_text(A);
        return false;
    });
    b.identity("frame-independence", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % n;
        const auto A = random_multivector(chart, a, rng, g);
        const auto frame = random_invertible_matrix(n, rng);
        if (equal_probabilistic(coboundary_via_connection_frame(d, A, frame, checks),
                                coboundary_via_connection(d, A, checks), eq))
            return true;
        note = "A = " + to_text(A);
        return false;
    });
    return b.take();
}

inline SuiteReport suite_star(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("star", opts);
    if (!lc.symplectic) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "no symplectic block declared";
        return r;
    }
    const SymplecticStructure& s = *lc.symplectic;
    const Chart& chart = lc.chart;
    const int n = chart.dim;
    const GenOptions g = opts.gen();

    b.identity("star-basics", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const ScalarExpr f = random_scalar(chart, rng, g);
        if (equal_probabilistic(star(s, DifferentialForm::scalar(chart, f)),
                                f * s.liouville().mu(), eq) &&
            equal_probabilistic(chart, star(s, s.liouville().mu()).scalar_part(),
                                ScalarExpr::integer(1), eq))
            return true;
        note = "f = " + to_text(f, chart);
        return false;
    });
    b.identity("star-involution", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto eta = random_form(chart, k, rng, g);
        if (equal_probabilistic(star(s, star(s, eta)), eta, eq)) return true;
        note = "eta = " + to_text(eta);
        return false;
    });
    b.identity("star-pairing-lemma", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto alpha = random_form(chart, k, rng, g);
        const auto beta = random_form(chart, n - k, rng, g);
        if (equal_probabilistic(pi_k(s.pi(), star(s, alpha), beta) * s.liouville().mu(),
                                wedge(alpha, beta), eq))
            return true;
        note = "alpha = " + to_text(alpha) + "; beta = " + to_text(beta);
        return false;
    });
    b.identity("wedge-star-prop", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto alpha = random_form(chart, k, rng, g);
        const auto beta = random_form(chart, k, rng, g);
        const auto ws = wedge(alpha, star(s, beta));
        auto flip = wedge(beta, star(s, alpha));
        if (detail::sign_pow(k) < 0) flip = -flip;
        if (equal_probabilistic(ws, pi_k(s.pi(), alpha, beta) * s.liouville().mu(), eq) &&
            equal_probabilistic(ws, flip, eq))
            return true;
        note = "alpha = " + to_text(alpha) + "; beta = " + to_text(beta);
        return false;
    });
    b.identity("mu-sharp-star", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto alpha = random_form(chart, k, rng, g);
        if (equal_probabilistic(mu_sharp(s.liouville(), alpha), sharp_k(s.pi(), star(s, alpha)),
                                eq))
            return true;
        note = "alpha = " + to_text(alpha);
        return false;
    });
    b.identity("mu-flat-star", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto K = random_multivector(chart, k, rng, g);
        if (equal_probabilistic(mu_flat(s.liouville(), K), star(s, flat_k(s, K)), eq)) return true;
        note = "K = " + to_text(K);
        return false;
    });
    b.identity("star-wedge-contraction", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto alpha = random_form(chart, 1, rng, g);
        const auto eta = random_form(chart, k, rng, g);
        auto rhs = interior_by_vector(sharp1(s.pi(), alpha), star(s, eta));
        if (detail::sign_pow(k) < 0) rhs = -rhs;
        if (equal_probabilistic(star(s, wedge(alpha, eta)), rhs, eq)) return true;
        note = "alpha = " + to_text(alpha) + "; eta = " + to_text(eta);
        return false;
    });
    b.identity("flat-sharp-inverse", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto eta = random_form(chart, k, rng, g);
        const auto K = random_multivector(chart, k, rng, g);
        if (equal_probabilistic(flat_k(s, sharp_k(s.pi(), eta)), eta, eq) &&
            equal_probabilistic(sharp_k(s.pi(), flat_k(s, K)), K, eq))
            return true;
        note = "eta = " + to_text(eta) + "; K = " + to_text(K);
        return false;
    });
    b.identity("omega-k-dualities", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = 1 + cs % n;
        const auto X = random_multivector(chart, k, rng, g);
        const auto Y = random_multivector(chart, k, rng, g);
        const auto alpha = random_form(chart, k, rng, g);
        const auto beta = random_form(chart, k, rng, g);
        if (equal_probabilistic(chart, omega_k(s, X, Y), pairing(flat_k(s, X), Y), eq) &&
            equal_probabilistic(chart, omega_k(s, sharp_k(s.pi(), alpha), sharp_k(s.pi(), beta)),
                                pi_k(s.pi(), alpha, beta), eq))
            return true;
        note = "X = " + to_text(X) + "; alpha = " + to_text(alpha);
        return false;
    });
    b.identity("delta-via-star-agrees", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto eta = random_form(chart, k, rng, g);
        if (equal_probabilistic(delta_via_star(s, eta), delta_brylinski(s.pi(), eta), eq))
            return true;
        note = "eta = " + to_text(eta);
        return false;
    });
    b.identity("liouville-normalized", [&](int, Rng&, const ProbEq& eq, std::string&) {
        return equal_probabilistic(chart, pi_k(s.pi(), s.liouville().mu(), s.liouville().mu()),
                                   ScalarExpr::integer(1), eq);
    }, 1);
    return b.take();
}

inline SuiteReport suite_thm5_curl(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("thm5-curl", opts);
    if (!lc.symplectic || !lc.connection) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "needs both a symplectic block and a connection";
        return r;
    }
    const SymplecticStructure& s = *lc.symplectic;
    const ContravariantConnection& d = *lc.connection;
    const ConnectionChecks checks = check_connection(d, opts.eq(0xBEEF));
    if (!checks.ok()) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "connection is not Poisson/torsion-free";
        return r;
    }
    const Chart& chart = lc.chart;
    const int n = chart.dim;
    const GenOptions g = opts.gen();

    b.identity("nabla-parallel-omega", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto X = random_multivector(chart, 1, rng, g);
        const auto Y = random_multivector(chart, 1, rng, g);
        const auto Z = random_multivector(chart, 1, rng, g);
        const ScalarExpr lhs = apply_vector(X, pairing(flat1(s, Y), Z));
        const ScalarExpr rhs = pairing(flat1(s, nabla_vector(s, d, X, Y)), Z) +
                               pairing(flat1(s, Y), nabla_vector(s, d, X, Z));
        if (equal_probabilistic(chart, lhs, rhs, eq)) return true;
        note = "X = " + to_text(X) + "; Y = " + to_text(Y) + "; Z = " + to_text(Z);
        return false;
    });
    b.identity("nabla-pi-k-compat", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = 1 + cs % n;
        const auto X = random_multivector(chart, 1, rng, g);
        const auto alpha = random_form(chart, k, rng, g);
        const auto beta = random_form(chart, k, rng, g);
        const ScalarExpr lhs = pi_k(s.pi(), nabla_form(s, d, X, alpha), beta) +
                               pi_k(s.pi(), alpha, nabla_form(s, d, X, beta));
        if (equal_probabilistic(chart, lhs, apply_vector(X, pi_k(s.pi(), alpha, beta)), eq))
            return true;
        note = "X = " + to_text(X) + "; alpha = " + to_text(alpha);
        return false;
    });
    b.identity("nabla-mu-zero", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto X = random_multivector(chart, 1, rng, g);
        if (is_zero_probabilistic(nabla_form(s, d, X, s.liouville().mu()), eq)) return true;
        note = "X = " + to_text(X);
        return false;
    });
    b.identity("nabla-star-commute", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto X = random_multivector(chart, 1, rng, g);
        const auto eta = random_form(chart, k, rng, g);
        if (equal_probabilistic(nabla_form(s, d, X, star(s, eta)),
                                star(s, nabla_form(s, d, X, eta)), eq))
            return true;
        note = "X = " + to_text(X) + "; eta = " + to_text(eta);
        return false;
    });
    b.identity("nabla-torsion-free", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto X = random_multivector(chart, 1, rng, g);
        const auto Y = random_multivector(chart, 1, rng, g);
        const auto t = nabla_vector(s, d, X, Y) - nabla_vector(s, d, Y, X) - schouten(X, Y);
        if (is_zero_probabilistic(t, eq)) return true;
        note = "X = " + to_text(X) + "; Y = " + to_text(Y);
        return false;
    });
    b.identity("flat-commutes-with-d", [&](int, Rng& rng, const ProbEq& eq, std::string& note) {
        const auto alpha = random_form(chart, 1, rng, g);
        const auto X = random_multivector(chart, 1, rng, g);
        if (equal_probabilistic(d_form(d, alpha, flat1(s, X)),
                                flat1(s, d_multivector(d, alpha, X)), eq))
            return true;
        note = "alpha = " + to_text(alpha) + "; X = " + to_text(X);
        return false;
    });
    b.identity("curl-local-agrees", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = 1 + cs % n;
        const auto K = random_multivector(chart, k, rng, g);
        if (equal_probabilistic(curl_local(s, d, K, checks), curl(s.liouville(), K), eq))
            return true;
        note = "K = " + to_text(K);
        return false;
    });
    b.identity("delta-local-agrees", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int k = cs % (n + 1);
        const auto eta = random_form(chart, k, rng, g);
        if (equal_probabilistic(delta_local(s, d, eta, checks), delta_brylinski(s.pi(), eta), eq))
            return true;
        note = "eta = " + to_text(eta);
        return false;
    });

    // Darboux corollary: only when omega pairs coordinates with constant +/-1.
    std::vector<std::pair<int, int>> pairs;
    bool darboux = true;
    {
        std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
        for (int i = 1; i <= n && darboux; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            int partner = 0;
            for (int j = i + 1; j <= n; ++j) {
                const ScalarExpr w = s.omega_entry(i, j);
                if (w.is_zero_literal()) continue;
                if (!w.is_const() || !(w.value() == Rational(1)) || partner != 0 ||
                    used[static_cast<std::size_t>(j)]) {
                    darboux = false;
                    break;
                }
                partner = j;
            }
            if (partner == 0) darboux = false;
            if (darboux) {
                used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(partner)] = true;
                pairs.emplace_back(i, partner);
            }
        }
    }
    if (darboux) {
        b.identity("darboux-corollary", [&, pairs](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
            const int k = 1 + cs % n;
            const auto K = random_multivector(chart, k, rng, g);
            MultiVectorField cor(chart, k - 1);
            for (const auto& [p, q] : pairs) {
                cor = cor + interior_by_form(basis_form(chart, p),
                                             d_multivector(d, basis_form(chart, q), K));
                cor = cor - interior_by_form(basis_form(chart, q),
                                             d_multivector(d, basis_form(chart, p), K));
            }
            if (equal_probabilistic(curl_local(s, d, K, checks), cor, eq)) return true;
            note = "K = " + to_text(K);
            return false;
        });
    } else {
        b.skipped("darboux-corollary", "omega is not in Darboux form");
    }
    return b.take();
}

inline SuiteReport suite_thm5_main(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("thm5-main", opts);
    if (!lc.symplectic || !lc.connection) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "needs both a symplectic block and a connection";
        return r;
    }
    const SymplecticStructure& s = *lc.symplectic;
    const ContravariantConnection& d = *lc.connection;
    const ConnectionChecks checks = check_connection(d, opts.eq(0xCAFE));
    if (!checks.ok()) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "connection is not Poisson/torsion-free";
        return r;
    }
    const Chart& chart = lc.chart;
    const int n = chart.dim;
    const GenOptions g = opts.gen();

    b.identity("curvature-identity", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % (std::min(3, n) + 1);
        const auto A = random_multivector(chart, a, rng, g);
        const auto sides = curvature_identity_sides(s, d, A, checks);
        if (equal_probabilistic(sides.lhs, sides.rhs, eq)) return true;
        note = "A = " + to_text(A);
        return false;
    });
    b.identity("liouville-modular-zero", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const int a = cs % (n + 1);
        const auto A = random_multivector(chart, a, rng, g);
        if (is_zero_probabilistic(modular_operator(s.pi(), s.liouville(), A), eq)) return true;
        note = "A = " + to_text(A);
        return false;
    });
    return b.take();
}

inline SuiteReport suite_thm5_volume(const LoadedChart& lc, const VerifyOptions& opts) {
    detail::SuiteBuilder b("thm5-volume", opts);
    if (!lc.symplectic || !lc.connection) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "needs both a symplectic block and a connection";
        return r;
    }
    const SymplecticStructure& s = *lc.symplectic;
    const ContravariantConnection& d = *lc.connection;
    const ConnectionChecks checks = check_connection(d, opts.eq(0xFEED));
    if (!checks.ok()) {
        auto r = b.take();
        r.skipped = true;
        r.skip_reason = "connection is not Poisson/torsion-free";
        return r;
    }
    const Chart& chart = lc.chart;
    const int n = chart.dim;
    const GenOptions g = opts.gen();

    b.identity("three-routes-changed-volume", [&](int cs, Rng& rng, const ProbEq& eq, std::string& note) {
        const ScalarExpr f = random_positive(chart, rng, g);
        const int a = cs % (std::min(2, n) + 1);
        const auto A = random_multivector(chart, a, rng, g);
        const auto nu = s.liouville().scaled(f, eq);
        const auto explicit_route = modular_changed_volume(s, d, f, A, checks, eq);
        const auto direct_route = modular_operator(s.pi(), nu, A);
        auto schouten_route = schouten(modular_vector_field(s.pi(), nu), A);
        if (detail::sign_pow(a) < 0) schouten_route = -schouten_route;
        if (equal_probabilistic(explicit_route, direct_route, eq) &&
            equal_probabilistic(explicit_route, schouten_route, eq))
            return true;
        note = "f = " + to_text(f, chart) + "; A = " + to_text(A);
        return false;
    });
    return b.take();
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {
        "exterior", "schouten",  "canonical", "curl-modular", "connection",
        "thm4",     "star",      "thm5-curl", "thm5-main",    "thm5-volume"};
    return names;
}

inline SuiteReport run_suite(const std::string& name, const LoadedChart& lc,
                             const VerifyOptions& opts) {
    if (name == "exterior") return suite_exterior(lc, opts);
    if (name == "schouten") return suite_schouten(lc, opts);
    if (name == "canonical") return suite_canonical(lc, opts);
    if (name == "curl-modular") return suite_curl_modular(lc, opts);
    if (name == "connection") return suite_connection(lc, opts);
    if (name == "thm4") return suite_thm4(lc, opts);
    if (name == "star") return suite_star(lc, opts);
    if (name == "thm5-curl") return suite_thm5_curl(lc, opts);
    if (name == "thm5-main") return suite_thm5_main(lc, opts);
    if (name == "thm5-volume") return suite_thm5_volume(lc, opts);
    throw Error("unknown verification suite '" + name + "'");
}

inline std::vector<SuiteReport> run_verify(const std::string& suite, const LoadedChart& lc,
                                           const VerifyOptions& opts) {
    std::vector<SuiteReport> out;
    if (suite == "all") {
        for (const auto& name : verify_suite_names()) out.push_back(run_suite(name, lc, opts));
    } else {
        out.push_back(run_suite(suite, lc, opts));
    }
    return out;
}

}  // namespace contracalc
