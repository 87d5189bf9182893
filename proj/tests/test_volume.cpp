#include <catch2/catch.hpp>

#include "contracalc/random_gen.hpp"
#include "contracalc/volume.hpp"

using namespace contracalc;

namespace {

const Chart kXY = Chart::make({"x", "y"});
const Chart kXYZ = Chart::make({"x", "y", "z"});

ScalarExpr ex(const std::string& t, const Chart& c) { return parse_expr(t, c); }
MultiVectorField vec(const std::string& t, const Chart& c) { return parse_multivector(t, c); }

PoissonBivector phi_pi(const std::string& phi) {
    MultiVectorField w(kXY, 2);
    w.add_term({1, 2}, ex(phi, kXY));
    return PoissonBivector::checked(w);
}

PoissonBivector fgh_pi() {
    MultiVectorField w(kXYZ, 2);
    w.add_term({1, 2}, ex("z", kXYZ));
    w.add_term({2, 3}, ex("x", kXYZ));
    w.add_term({1, 3}, ex("-y", kXYZ));
    return PoissonBivector::checked(w);
}

int sign_pow(int e) { return e % 2 == 0 ? 1 : -1; }

}  // namespace

TEST_CASE("volume dualities") {
    const auto mu = VolumeForm::standard(kXY);
    SECTION("mu_flat(d/dx) = dy") {
        const auto r = mu_flat(mu, basis_vector(kXY, 1));
        CHECK(r.coefficient({2}).is_one_literal());
        CHECK(r.coefficient({1}).is_zero_literal());
    }
    SECTION("mu_flat(mu_hat) = <mu, mu_hat> = 1") {
        CHECK(mu_flat(mu, mu.mu_hat()).scalar_part().is_one_literal());
    }
    SECTION("mu_flat on functions multiplies the volume") {
        const ScalarExpr f = ex("x + y^2", kXY);
        const auto r = mu_flat(mu, MultiVectorField::scalar(kXY, f));
        CHECK(equal_probabilistic(kXY, r.coefficient({1, 2}), f));
    }
    SECTION("mu_sharp(dy) = d/dx and mu_sharp(mu) = 1") {
        const auto r = mu_sharp(mu, basis_form(kXY, 2));
        CHECK(r.coefficient({1}).is_one_literal());
        CHECK(mu_sharp(mu, mu.mu()).scalar_part().is_one_literal());
    }
    SECTION("mu_sharp and mu_flat are mutually inverse, including weighted volumes") {
        const auto w = VolumeForm::make(kXYZ, ex("1 + x^2 + z^2", kXYZ));
        Rng rng(17);
        for (int c = 0; c < 8; ++c) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(c));
            const int g = static_cast<int>(sub.below(4));
            const auto A = random_multivector(kXYZ, g, sub);
            CHECK(equal_probabilistic(mu_sharp(w, mu_flat(w, A)), A, ProbEq{}.with_seed(10 + c)));
            const auto eta = random_form(kXYZ, g, sub);
            CHECK(equal_probabilistic(mu_flat(w, mu_sharp(w, eta)), eta, ProbEq{}.with_seed(20 + c)));
        }
    }
    SECTION("identically zero volume coefficients are rejected") {
        CHECK_THROWS_AS(VolumeForm::make(kXY, ex("x - x", kXY)), ValidationError);
    }
}

TEST_CASE("curl: paper examples") {
    SECTION("standard volume: curl is the divergence") {
        const auto mu3 = VolumeForm::standard(kXYZ);
        const auto X = vec("x^2*e[1] + x*y*e[2] + z^3*e[3]", kXYZ);
        const ScalarExpr div = ex("2*x + x + 3*z^2", kXYZ);
        CHECK(equal_probabilistic(kXYZ, curl(mu3, X).scalar_part(), div));
    }
    SECTION("weighted plane: curl X = div X + (1/phi) X(phi)") {
        const ScalarExpr phi = ex("1 + x^2 + y^2", kXY);
        const auto mu = VolumeForm::make(kXY, phi);
        const auto X = vec("(x*y)*e[1] + (y^2)*e[2]", kXY);
        const ScalarExpr f = ex("x*y", kXY), g = ex("y^2", kXY);
        const ScalarExpr expect =
            partial(f, 1) + partial(g, 2) + (f * partial(phi, 1) + g * partial(phi, 2)) / phi;
        CHECK(equal_probabilistic(kXY, curl(mu, X).scalar_part(), expect));
    }
    SECTION("rotational R^3 bivector: the displayed three-component curl") {
        const auto mu3 = VolumeForm::standard(kXYZ);
        Rng rng(5);
        for (int c = 0; c < 4; ++c) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(c));
            const ScalarExpr f = random_polynomial(kXYZ, sub);
            const ScalarExpr g = random_polynomial(kXYZ, sub);
            const ScalarExpr h = random_polynomial(kXYZ, sub);
            MultiVectorField w(kXYZ, 2);
            w.add_term({1, 2}, f);
            w.add_term({2, 3}, g);
            w.add_term({1, 3}, -h);
            MultiVectorField expect(kXYZ, 1);
            expect.add_term({1}, partial(f, 2) - partial(h, 3));
            expect.add_term({2}, partial(g, 3) - partial(f, 1));
            expect.add_term({3}, partial(h, 1) - partial(g, 2));
            CHECK(equal_probabilistic(curl(mu3, w), expect, ProbEq{}.with_seed(30 + c)));
        }
    }
    SECTION("curl of grade 0 is zero") {
        CHECK(curl(VolumeForm::standard(kXY), MultiVectorField::scalar(kXY, ex("x", kXY)))
                  .is_zero_literal());
    }
}

TEST_CASE("curl squares to zero") {
    const auto w = VolumeForm::make(kXYZ, ex("1 + z^2", kXYZ));
    Rng rng(9);
    for (int c = 0; c < 8; ++c) {
        Rng sub = rng.fork(static_cast<std::uint64_t>(c));
        const int g = static_cast<int>(sub.below(4));
        const auto A = random_multivector(kXYZ, g, sub);
        CHECK(is_zero_probabilistic(curl(w, curl(w, A)), ProbEq{}.with_seed(40 + c)));
    }
}

TEST_CASE("modular vector field") {
    SECTION("2d: Xi = -phi_y d/dx + phi_x d/dy for Pi = phi dx^dy, mu standard") {
        const ScalarExpr phi = ex("x^2*y + y + 1", kXY);
        const auto pi = phi_pi("x^2*y + y + 1");
        const auto mu = VolumeForm::standard(kXY);
        const auto xi = modular_vector_field(pi, mu);
        MultiVectorField expect(kXY, 1);
        expect.add_term({1}, -partial(phi, 2));
        expect.add_term({2}, partial(phi, 1));
        CHECK(equal_probabilistic(xi, expect));
        // Lambda^0 F = Xi F = phi_x F_y - phi_y F_x
        const ScalarExpr F = ex("x*y^2", kXY);
        const ScalarExpr expect0 =
            partial(phi, 1) * partial(F, 2) - partial(phi, 2) * partial(F, 1);
        const auto lam0 = modular_operator(pi, mu, MultiVectorField::scalar(kXY, F));
        CHECK(equal_probabilistic(kXY, lam0.scalar_part(), expect0));
    }
    SECTION("modular field of a constant structure vanishes") {
        const auto xi = modular_vector_field(phi_pi("3"), VolumeForm::standard(kXY));
        CHECK(is_zero_probabilistic(xi));
    }
    SECTION("defining property L_Pi mu = i(Xi) mu, weighted volumes included") {
        struct Case {
            PoissonBivector pi;
            VolumeForm vol;
        };
        const std::vector<Case> cases = {
            {phi_pi("1 + x^2"), VolumeForm::standard(kXY)},
            {phi_pi("x*y + 2"), VolumeForm::make(kXY, ex("1 + y^2", kXY))},
            {fgh_pi(), VolumeForm::standard(kXYZ)},
            {fgh_pi(), VolumeForm::make(kXYZ, ex("1 + x^2", kXYZ))},
        };
        int seed = 0;
        for (const auto& [pi, vol] : cases) {
            const auto xi = modular_vector_field(pi, vol);
            const auto lhs = lie_derivative_by_bivector(pi.bivector(), vol.mu());
            const auto rhs = interior_by_vector(xi, vol.mu());
            CHECK(equal_probabilistic(lhs, rhs, ProbEq{}.with_seed(50 + seed++)));
            CHECK(is_zero_probabilistic(curl(vol, xi), ProbEq{}.with_seed(60 + seed)));
        }
    }
    SECTION("R^3 rotational structure: Xi = -curl(Pi) and Lambda^0 F = Xi F") {
        const auto pi = fgh_pi();
        const auto mu = VolumeForm::standard(kXYZ);
        const auto xi = modular_vector_field(pi, mu);
        CHECK(equal_probabilistic(xi, -curl(mu, pi.bivector())));
        const ScalarExpr F = ex("x^2 - y*z", kXYZ);
        const auto lam0 = modular_operator(pi, mu, MultiVectorField::scalar(kXYZ, F));
        CHECK(equal_probabilistic(kXYZ, lam0.scalar_part(), apply_vector(xi, F)));
    }
}

TEST_CASE("modular operator") {
    SECTION("Lambda^1 X matches both closed forms on the plane") {
        const auto pi = phi_pi("x^3 + y^2 + 2");
        const ScalarExpr phi = ex("x^3 + y^2 + 2", kXY);
        const auto mu = VolumeForm::standard(kXY);
        const ScalarExpr f = ex("x*y", kXY), g = ex("y^3 - x", kXY);
        MultiVectorField X(kXY, 1);
        X.add_term({1}, f);
        X.add_term({2}, g);
        const auto lam1 = modular_operator(pi, mu, X);

        // display 1: explicit second partials
        MultiVectorField d1(kXY, 1);
        d1.add_term({1}, partial(phi, 2) * partial(f, 1) - partial(f, 2) * partial(phi, 1) -
                             f * partial(partial(phi, 2), 1) - g * partial(partial(phi, 2), 2));
        d1.add_term({2}, -(partial(phi, 1) * partial(g, 2)) + partial(g, 1) * partial(phi, 2) +
                             f * partial(partial(phi, 1), 1) + g * partial(partial(phi, 1), 2));
        CHECK(equal_probabilistic(lam1, d1));

        // display 2: -(Xi f + L_X phi_y) dx + (-Xi g + L_X phi_x) dy
        const auto xi = modular_vector_field(pi, mu);
        MultiVectorField d2(kXY, 1);
        d2.add_term({1}, -(apply_vector(xi, f) + apply_vector(X, partial(phi, 2))));
        d2.add_term({2}, -apply_vector(xi, g) + apply_vector(X, partial(phi, 1)));
        CHECK(equal_probabilistic(lam1, d2));
    }
    SECTION("Lambda^2 Pi = 0 on the rotational R^3 structure") {
        const auto pi = fgh_pi();
        const auto lam2 = modular_operator(pi, VolumeForm::standard(kXYZ), pi.bivector());
        CHECK(is_zero_probabilistic(lam2));
    }
    SECTION("Lambda^a A = (-1)^a [Xi, A] for grades 0..n") {
        struct Case {
            PoissonBivector pi;
            VolumeForm vol;
        };
        const std::vector<Case> cases = {
            {phi_pi("1 + x^2"), VolumeForm::make(kXY, ex("2 + y^2", kXY))},
            {fgh_pi(), VolumeForm::make(kXYZ, ex("1 + z^2", kXYZ))},
        };
        Rng rng(77);
        int seed = 0;
        for (const auto& [pi, vol] : cases) {
            const auto xi = modular_vector_field(pi, vol);
            const Chart& chart = pi.chart();
            for (int g = 0; g <= chart.dim; ++g) {
                Rng sub = rng.fork(static_cast<std::uint64_t>(seed));
                const auto A = random_multivector(chart, g, sub);
                const auto lhs = modular_operator(pi, vol, A);
                auto rhs = schouten(xi, A);
                if (sign_pow(g) < 0) rhs = -rhs;
                CHECK(equal_probabilistic(lhs, rhs, ProbEq{}.with_seed(70 + seed)));
                ++seed;
            }
        }
    }
}

TEST_CASE("curl/Schouten compatibility identities") {
    SECTION("f and Pi: reduces to H_f = curl(f Pi) - f curl(Pi)") {
        const auto pi = phi_pi("1 + x^2 + y^2");
        const auto mu = VolumeForm::standard(kXY);
        const ScalarExpr f = ex("x^2 - y", kXY);
        const auto lhs = hamiltonian(pi, f);
        const auto rhs = curl(mu, f * pi.bivector()) - f * curl(mu, pi.bivector());
        CHECK(equal_probabilistic(lhs, rhs));
        CHECK(koszul_curl_identity_check(mu, MultiVectorField::scalar(kXY, f), pi.bivector()));
    }
    SECTION("random vector fields on R^3") {
        const auto mu = VolumeForm::make(kXYZ, ex("1 + y^2", kXYZ));
        Rng rng(88);
        for (int c = 0; c < 5; ++c) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(c));
            const auto A = random_multivector(kXYZ, 1, sub);
            const auto B = random_multivector(kXYZ, 1, sub);
            CHECK(koszul_curl_identity_check(mu, A, B, ProbEq{}.with_seed(80 + c)));
        }
    }
    SECTION("constant bivectors: 0 = 0") {
        const auto mu = VolumeForm::standard(kXYZ);
        const auto B = vec("e[1,2]", kXYZ);
        CHECK(koszul_curl_identity_check(mu, B, B));
    }
    SECTION("mixed grades on R^3") {
        const auto mu = VolumeForm::standard(kXYZ);
        Rng rng(99);
        for (int c = 0; c < 5; ++c) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(c));
            const int a = static_cast<int>(sub.below(3));
            const int b = 1 + static_cast<int>(sub.below(2));
            const auto A = random_multivector(kXYZ, a, sub);
            const auto B = random_multivector(kXYZ, b, sub);
            CHECK(koszul_curl_identity_check(mu, A, B, ProbEq{}.with_seed(90 + c)));
        }
    }
}
