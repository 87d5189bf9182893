// Acceptance suite: runs every acceptance criterion and prints one pass/fail
// line per criterion. Exit code 0 iff all criteria pass.
//
// Usage: acceptance --cli PATH --fixtures DIR [--only N]

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "contracalc/verify.hpp"

using namespace contracalc;

namespace {

std::string g_cli;
std::string g_fixtures;

struct SubprocessResult {
    int exit_code = -1;
    std::string output;
};

SubprocessResult run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    SubprocessResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

LoadedChart fixture(const std::string& name) {
    return load_chart_file(g_fixtures + "/" + name + ".chart.json");
}

int sign_pow(int e) { return e % 2 == 0 ? 1 : -1; }

struct Criterion {
    int number;
    std::string summary;
    std::function<bool(std::string&)> run;
};

// ---------------------------------------------------------------------------
// 1. Paper examples, exact
// ---------------------------------------------------------------------------

bool criterion_paper_examples(std::string& why) {
    GenOptions g;
    // curl with the standard volume is the divergence, m = 2, 3, 4
    for (const int m : {2, 3, 4}) {
        std::vector<std::string> names;
        for (int i = 1; i <= m; ++i) names.push_back("c" + std::to_string(i));
        const Chart chart = Chart::make(names);
        const auto mu = VolumeForm::standard(chart);
        Rng rng(static_cast<std::uint64_t>(100 + m));
        MultiVectorField x(chart, 1);
        ScalarExpr div = ScalarExpr::integer(0);
        for (int i = 1; i <= m; ++i) {
            const ScalarExpr xi = random_polynomial(chart, rng, g);
            x.add_term({i}, xi);
            div = div + partial(xi, i);
        }
        if (!equal_probabilistic(chart, curl(mu, x).scalar_part(), div, ProbEq{})) {
            why = "divergence example failed on dimension " + std::to_string(m);
            return false;
        }
    }

    // curl with volume omega = phi dx^dy: div X + (1/phi) X phi
    const Chart xy = Chart::make({"x", "y"});
    {
        const ScalarExpr phi = parse_expr("1 + x^2", xy);
        const auto om = VolumeForm::make(xy, phi);
        Rng rng(7);
        for (int c = 0; c < 4; ++c) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(c));
            const ScalarExpr f = random_polynomial(xy, sub, g);
            const ScalarExpr h = random_polynomial(xy, sub, g);
            MultiVectorField x(xy, 1);
            x.add_term({1}, f);
            x.add_term({2}, h);
            const ScalarExpr expect = partial(f, 1) + partial(h, 2) +
                                      (f * partial(phi, 1) + h * partial(phi, 2)) / phi;
            if (!equal_probabilistic(xy, curl(om, x).scalar_part(), expect,
                                     ProbEq{}.with_seed(10 + c))) {
                why = "weighted-plane curl example failed";
                return false;
            }
        }
    }

    // R^3 curl of Pi: the displayed three-component formula, on the shipped
    // fixture and on random exact structures f = K_z, g = K_x, h = K_y
    {
        const Chart xyz = Chart::make({"x", "y", "z"});
        const auto mu3 = VolumeForm::standard(xyz);
        Rng rng(11);
        for (int c = 0; c < 5; ++c) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(c));
            ScalarExpr f, gg, h;
            if (c == 0) {
                f = parse_expr("z", xyz);
                gg = parse_expr("x", xyz);
                h = parse_expr("y", xyz);
            } else {
                const ScalarExpr k = random_polynomial(xyz, sub, g);
                f = partial(k, 3);
                gg = partial(k, 1);
                h = partial(k, 2);
            }
            MultiVectorField w(xyz, 2);
            w.add_term({1, 2}, f);
            w.add_term({2, 3}, gg);
            w.add_term({1, 3}, -h);
            if (!jacobi_check(w)) {
                why = "generated R^3 structure is not Poisson";
                return false;
            }
            MultiVectorField expect(xyz, 1);
            expect.add_term({1}, partial(f, 2) - partial(h, 3));
            expect.add_term({2}, partial(gg, 3) - partial(f, 1));
            expect.add_term({3}, partial(h, 1) - partial(gg, 2));
            if (!equal_probabilistic(curl(mu3, w), expect, ProbEq{}.with_seed(20 + c))) {
                why = "R^3 curl display failed";
                return false;
            }
        }
    }

    // Lambda^0 and Lambda^1 on the plane with mu = dx^dy
    {
        Rng rng(13);
        for (int c = 0; c < 3; ++c) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(c));
            const ScalarExpr phi =
                c == 0 ? parse_expr("1 + x^2", xy) : random_polynomial(xy, sub, g);
            if (is_identically_zero(xy, phi)) continue;
            MultiVectorField w(xy, 2);
            w.add_term({1, 2}, phi);
            const auto pi = PoissonBivector::checked(w);
            const auto mu = VolumeForm::standard(xy);
            const ScalarExpr bigf = random_polynomial(xy, sub, g);
            const ScalarExpr expect0 =
                partial(phi, 1) * partial(bigf, 2) - partial(phi, 2) * partial(bigf, 1);
            const auto lam0 = modular_operator(pi, mu, MultiVectorField::scalar(xy, bigf));
            if (!equal_probabilistic(xy, lam0.scalar_part(), expect0, ProbEq{}.with_seed(30 + c))) {
                why = "Lambda^0 display failed";
                return false;
            }
            const ScalarExpr f = random_polynomial(xy, sub, g);
            const ScalarExpr h = random_polynomial(xy, sub, g);
            MultiVectorField x(xy, 1);
            x.add_term({1}, f);
            x.add_term({2}, h);
            MultiVectorField expect1(xy, 1);
            expect1.add_term({1}, partial(phi, 2) * partial(f, 1) -
                                      partial(f, 2) * partial(phi, 1) -
                                      f * partial(partial(phi, 2), 1) -
                                      h * partial(partial(phi, 2), 2));
            expect1.add_term({2}, -(partial(phi, 1) * partial(h, 2)) +
                                      partial(h, 1) * partial(phi, 2) +
                                      f * partial(partial(phi, 1), 1) +
                                      h * partial(partial(phi, 1), 2));
            if (!equal_probabilistic(modular_operator(pi, mu, x), expect1,
                                     ProbEq{}.with_seed(40 + c))) {
                why = "Lambda^1 display failed";
                return false;
            }
        }
    }

    // Lambda^2 Pi = 0 on the R^3 structure
    {
        const auto r3 = fixture("r3-fgh");
        const auto lam2 = modular_operator(r3.pi, r3.volume, r3.pi.bivector());
        if (!is_zero_probabilistic(lam2)) {
            why = "Lambda^2 Pi != 0 on the R^3 structure";
            return false;
        }
    }

    // closing example: omega = (1/phi) dx^dy, nu = dx^dy; the explicit
    // connection formula reproduces the Lambda^1 display above
    {
        Rng rng(17);
        for (int c = 0; c < 3; ++c) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(c));
            const ScalarExpr phi = c == 0 ? parse_expr("1 + x^2", xy)
                                          : random_positive(xy, sub, g);
            DifferentialForm om(xy, 2);
            om.add_term({1, 2}, ScalarExpr::integer(1) / phi);
            const auto s = SymplecticStructure::from_omega(om);
            const auto d = build_2d_canonical(s.pi());
            const auto checks = check_connection(d);
            if (!checks.ok()) {
                why = "closing-example connection failed its checks";
                return false;
            }
            const ScalarExpr f = random_polynomial(xy, sub, g);
            const ScalarExpr h = random_polynomial(xy, sub, g);
            MultiVectorField x(xy, 1);
            x.add_term({1}, f);
            x.add_term({2}, h);
            const auto lam = modular_changed_volume(s, d, phi, x, checks);
            MultiVectorField expect(xy, 1);
            expect.add_term({1}, partial(phi, 2) * partial(f, 1) -
                                     partial(f, 2) * partial(phi, 1) -
                                     f * partial(partial(phi, 2), 1) -
                                     h * partial(partial(phi, 2), 2));
            expect.add_term({2}, -(partial(phi, 1) * partial(h, 2)) +
                                     partial(h, 1) * partial(phi, 2) +
                                     f * partial(partial(phi, 1), 1) +
                                     h * partial(partial(phi, 1), 2));
            if (!equal_probabilistic(lam, expect, ProbEq{}.with_seed(50 + c))) {
                why = "changed-volume formula does not match the direct modular formula";
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// 2. Chain-complex laws, >= 50 random tensors per grade per fixture
// ---------------------------------------------------------------------------

bool criterion_chain_laws(std::string& why) {
    const std::vector<std::string> fixtures = {"r2-standard", "r2-phi", "r3-fgh", "r4-darboux",
                                               "r4-darboux-s"};
    constexpr int kCases = 50;
    GenOptions g;
    g.max_terms = 2;
    for (const auto& name : fixtures) {
        const auto lc = fixture(name);
        const int n = lc.chart.dim;
        for (int grade = 0; grade <= n; ++grade) {
            for (int c = 0; c < kCases; ++c) {
                Rng rng =
                    Rng(detail::fnv1a(name) ^ static_cast<std::uint64_t>(grade * 1000 + c)).fork(2);
                const ProbEq eq = ProbEq{}.with_seed(rng.next());
                const auto a = random_multivector(lc.chart, grade, rng, g);
                const auto eta = random_form(lc.chart, grade, rng, g);
                if (!is_zero_probabilistic(
                        exterior_derivative(exterior_derivative(eta)), eq) ||
                    !is_zero_probabilistic(coboundary(lc.pi, coboundary(lc.pi, a)), eq) ||
                    !is_zero_probabilistic(delta_brylinski(lc.pi, delta_brylinski(lc.pi, eta)),
                                           eq) ||
                    !is_zero_probabilistic(curl(lc.volume, curl(lc.volume, a)), eq)) {
                    why = "chain law failed on " + name + " grade " + std::to_string(grade);
                    return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// 3. Schouten suite, >= 50 random triples
// ---------------------------------------------------------------------------

bool criterion_schouten(std::string& why) {
    const auto lc = fixture("r3-fgh");
    const Chart& chart = lc.chart;
    const int n = chart.dim;
    GenOptions g;
    g.max_terms = 2;
    constexpr int kCases = 50;
    for (int c = 0; c < kCases; ++c) {
        Rng rng = Rng(0x5c40 + static_cast<std::uint64_t>(c)).fork(3);
        const ProbEq eq = ProbEq{}.with_seed(rng.next());
        const int a = static_cast<int>(rng.below(3));
        const int b = static_cast<int>(rng.below(3));
        const int cc = static_cast<int>(rng.below(2));
        const auto A = random_multivector(chart, a, rng, g);
        const auto B = random_multivector(chart, b, rng, g);
        const auto C = random_multivector(chart, cc, rng, g);

        if (a + b >= 1) {
            auto rhs = schouten(B, A);
            if (sign_pow((a - 1) * (b - 1)) > 0) rhs = -rhs;
            if (!equal_probabilistic(schouten(A, B), rhs, eq)) {
                why = "S1 failed";
                return false;
            }
            if (!equal_probabilistic(schouten(A, B), schouten_leibniz(A, B), eq)) {
                why = "implementations disagree";
                return false;
            }
        }
        {
            auto t1 = schouten(A, schouten(B, C));
            auto t2 = schouten(B, schouten(C, A));
            auto t3 = schouten(C, schouten(A, B));
            const auto total = (sign_pow((a - 1) * (cc - 1)) > 0 ? t1 : -t1) +
                               (sign_pow((b - 1) * (a - 1)) > 0 ? t2 : -t2) +
                               (sign_pow((cc - 1) * (b - 1)) > 0 ? t3 : -t3);
            if (!is_zero_probabilistic(total, eq)) {
                why = "S2 failed";
                return false;
            }
        }
        {
            const auto lhs = schouten(A, wedge(B, C));
            auto t2 = wedge(schouten(A, B), C);
            if (sign_pow((a - 1) * cc) < 0) t2 = -t2;
            if (!equal_probabilistic(lhs, wedge(B, schouten(A, C)) + t2, eq)) {
                why = "S3 failed";
                return false;
            }
        }
        {
            const auto lhs = schouten(wedge(A, B), C);
            auto t2 = wedge(A, schouten(B, C));
            if (sign_pow(a * (cc - 1)) < 0) t2 = -t2;
            if (!equal_probabilistic(lhs, wedge(schouten(A, C), B) + t2, eq)) {
                why = "S4 failed";
                return false;
            }
        }
        {
            const ScalarExpr f = random_polynomial(chart, rng, g);
            if (!equal_probabilistic(
                    hamiltonian(lc.pi, f),
                    -schouten(MultiVectorField::scalar(chart, f), lc.pi.bivector()), eq)) {
                why = "H_f = -[f, Pi] failed";
                return false;
            }
        }
        // interior-product characterization on a random valid degree
        {
            const int ga = 1 + static_cast<int>(rng.below(2));
            const int gb = 1 + static_cast<int>(rng.below(2));
            const auto Ah = random_multivector(chart, ga, rng, g);
            const auto Bh = random_multivector(chart, gb, rng, g);
            const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(n + 1)));
            const auto eta = random_form(chart, p, rng, g);
            const auto AB = schouten(Ah, Bh);
            const auto AwB = wedge(Ah, Bh);
            const auto t1 =
                interior_by_vector(Ah, exterior_derivative(interior_by_vector(Bh, eta)));
            const auto t2 =
                interior_by_vector(Bh, exterior_derivative(interior_by_vector(Ah, eta)));
            const auto t3 = interior_by_vector(AwB, exterior_derivative(eta));
            const auto t4 = exterior_derivative(interior_by_vector(AwB, eta));
            const auto rhs = t1 + (sign_pow((ga - 1) * (gb - 1)) > 0 ? -t2 : t2) +
                             (sign_pow((ga - 1) * gb) > 0 ? -t3 : t3) +
                             (sign_pow(ga * (gb - 1)) > 0 ? -t4 : t4);
            if (!equal_probabilistic(interior_by_vector(AB, eta), rhs, eq)) {
                why = "interior characterization failed";
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// 4. Modular suite on all fixtures
// ---------------------------------------------------------------------------

bool criterion_modular(std::string& why) {
    const std::vector<std::string> fixtures = {"r2-standard", "r2-phi", "r3-fgh", "r4-darboux",
                                               "r4-darboux-s"};
    GenOptions g;
    g.max_terms = 2;
    for (const auto& name : fixtures) {
        const auto lc = fixture(name);
        const Chart& chart = lc.chart;
        const int n = chart.dim;
        const auto xi = modular_vector_field(lc.pi, lc.volume);
        const ProbEq eq = ProbEq{}.with_seed(detail::fnv1a(name));
        // Xi = -curl(Pi) agrees with the Lie-derivative characterization
        if (!equal_probabilistic(lie_derivative_by_bivector(lc.pi.bivector(), lc.volume.mu()),
                                 interior_by_vector(xi, lc.volume.mu()), eq)) {
            why = "modular field characterization failed on " + name;
            return false;
        }
        if (!is_zero_probabilistic(curl(lc.volume, xi), eq)) {
            why = "curl of the modular field is nonzero on " + name;
            return false;
        }
        Rng rng(detail::fnv1a(name) ^ 0x31415);
        for (int c = 0; c < 8; ++c) {
            Rng sub = rng.fork(static_cast<std::uint64_t>(c));
            const ProbEq ceq = ProbEq{}.with_seed(detail::fnv1a(name) + 100 + c);
            const ScalarExpr f = random_polynomial(chart, sub, g);
            const auto lam0 = modular_operator(lc.pi, lc.volume, MultiVectorField::scalar(chart, f));
            if (!equal_probabilistic(chart, lam0.scalar_part(), apply_vector(xi, f), ceq)) {
                why = "Lambda^0 = Xi F failed on " + name;
                return false;
            }
            const int a = static_cast<int>(sub.below(static_cast<std::uint64_t>(n + 1)));
            const auto A = random_multivector(chart, a, sub, g);
            auto rhs = schouten(xi, A);
            if (sign_pow(a) < 0) rhs = -rhs;
            if (!equal_probabilistic(modular_operator(lc.pi, lc.volume, A), rhs, ceq)) {
                why = "Lambda^a = (-1)^a [Xi, A] failed on " + name;
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// 5. Theorem 4: the local coboundary formula
// ---------------------------------------------------------------------------

bool criterion_thm4(std::string& why) {
    const std::vector<std::string> fixtures = {"r2-standard", "r2-phi", "r4-darboux",
                                               "r4-darboux-s"};
    GenOptions g;
    g.max_terms = 2;
    for (const auto& name : fixtures) {
        const auto lc = fixture(name);
        if (!lc.connection) {
            why = name + " has no connection";
            return false;
        }
        const auto checks = check_connection(*lc.connection);
        if (!checks.ok()) {
            why = name + " connection failed its admissibility checks";
            return false;
        }
        const int n = lc.chart.dim;
        Rng rng(detail::fnv1a(name) ^ 0xFACE);
        for (int grade = 0; grade <= n - 1; ++grade) {
            for (int c = 0; c < 6; ++c) {
                Rng sub = rng.fork(static_cast<std::uint64_t>(grade * 100 + c));
                const ProbEq eq = ProbEq{}.with_seed(detail::fnv1a(name) + 200 + c);
                const auto A = random_multivector(lc.chart, grade, sub, g);
                if (!equal_probabilistic(coboundary_via_connection(*lc.connection, A, checks),
                                         coboundary(lc.pi, A), eq)) {
                    why = "local formula disagrees on " + name + " grade " + std::to_string(grade);
                    return false;
                }
                const auto frame = random_invertible_matrix(n, sub);
                if (!equal_probabilistic(
                        coboundary_via_connection_frame(*lc.connection, A, frame, checks),
                        coboundary_via_connection(*lc.connection, A, checks), eq)) {
                    why = "frame independence failed on " + name;
                    return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// 6, 7, 8, 9: verification suites at acceptance strength
// ---------------------------------------------------------------------------

bool run_suite_on(const std::string& fixture_name, const std::string& suite, int cases,
                  std::string& why) {
    const auto lc = fixture(fixture_name);
    VerifyOptions opts;
    opts.cases = cases;
    const auto reports = run_verify(suite, lc, opts);
    for (const auto& r : reports) {
        if (r.skipped) {
            why = "suite " + suite + " skipped on " + fixture_name + ": " + r.skip_reason;
            return false;
        }
        for (const auto& id : r.identities)
            if (!id.ok()) {
                why = "identity " + id.name + " failed on " + fixture_name +
                      (id.failure_notes.empty() ? "" : " (" + id.failure_notes.front() + ")");
                return false;
            }
    }
    return true;
}

bool criterion_star(std::string& why) {
    for (const auto& name : {"r2-standard", "r2-phi", "r4-darboux", "r4-darboux-s"})
        if (!run_suite_on(name, "star", 12, why)) return false;
    return true;
}

bool criterion_induced_connection(std::string& why) {
    for (const auto& name : {"r2-standard", "r2-phi", "r4-darboux", "r4-darboux-s"})
        if (!run_suite_on(name, "thm5-curl", 8, why)) return false;
    return true;
}

bool criterion_thm5_main(std::string& why) {
    // >= 25 instances per grade on the two curved fixtures
    for (const auto& name : {"r2-phi", "r4-darboux-s"}) {
        const auto lc = fixture(name);
        const auto checks = check_connection(*lc.connection);
        if (!checks.ok()) {
            why = std::string(name) + " connection failed its checks";
            return false;
        }
        const int n = lc.chart.dim;
        GenOptions g;
        g.max_terms = 2;
        bool saw_nonzero = false;
        for (int grade = 0; grade <= std::min(3, n); ++grade) {
            for (int c = 0; c < 25; ++c) {
                Rng rng = Rng(detail::fnv1a(name) + static_cast<std::uint64_t>(grade * 31 + c))
                              .fork(8);
                const ProbEq eq = ProbEq{}.with_seed(rng.next());
                const auto A = random_multivector(lc.chart, grade, rng, g);
                const auto sides = curvature_identity_sides(*lc.symplectic, *lc.connection, A,
                                                            checks);
                if (!equal_probabilistic(sides.lhs, sides.rhs, eq)) {
                    why = "curvature identity failed on " + std::string(name) + " grade " +
                          std::to_string(grade);
                    return false;
                }
                if (!saw_nonzero && grade == 1 && c < 3)
                    saw_nonzero = !is_zero_probabilistic(sides.lhs, eq);
            }
        }
        if (!saw_nonzero) {
            why = std::string(name) + " produced no nonzero curvature instance";
            return false;
        }
    }
    // flat connections: both sides identically zero
    for (const auto& name : {"r2-standard", "r4-darboux"}) {
        const auto lc = fixture(name);
        const auto checks = check_connection(*lc.connection);
        Rng rng(detail::fnv1a(name) ^ 0xFFA);
        const auto A = random_multivector(lc.chart, 1, rng, GenOptions{});
        const auto sides = curvature_identity_sides(*lc.symplectic, *lc.connection, A, checks);
        if (!is_zero_probabilistic(sides.lhs) || !is_zero_probabilistic(sides.rhs)) {
            why = "flat connection gave nonzero sides on " + std::string(name);
            return false;
        }
    }
    return true;
}

bool criterion_changed_volume(std::string& why) {
    for (const auto& name : {"r2-standard", "r2-phi", "r4-darboux", "r4-darboux-s"})
        if (!run_suite_on(name, "thm5-volume", 10, why)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// 10. CLI contract
// ---------------------------------------------------------------------------

bool criterion_cli(std::string& why) {
    namespace fs = std::filesystem;
    // verify all exits 0 on every shipped fixture
    for (const auto& name :
         {"r2-standard", "r2-phi", "r3-fgh", "r4-darboux", "r4-darboux-s"}) {
        const auto r = run_cli("verify --suite all --cases 2 --chart " + g_fixtures + "/" + name +
                               ".chart.json");
        if (r.exit_code != 0) {
            why = std::string("verify all failed on ") + name + ": " + r.output.substr(0, 400);
            return false;
        }
    }

    // mutating one Christoffel entry of r2-phi must fail validate, naming the check
    {
        std::ifstream in(g_fixtures + "/r2-phi.chart.json");
        nlohmann::json doc;
        in >> doc;
        doc["connection"][0]["expr"] = "-3*x";
        const fs::path tmp = fs::temp_directory_path() / "contracalc-mutated.chart.json";
        std::ofstream out(tmp);
        out << doc.dump(2);
        out.close();
        const auto r = run_cli("validate --chart " + tmp.string());
        fs::remove(tmp);
        if (r.exit_code != 1) {
            why = "validate on a mutated connection exited " + std::to_string(r.exit_code);
            return false;
        }
        if (r.output.find("connection-poisson") == std::string::npos &&
            r.output.find("connection-torsion-free") == std::string::npos) {
            why = "validate output does not name the violated connection check";
            return false;
        }
    }

    // byte-identical JSON reports for identical seeds
    {
        const std::string args = "verify --suite schouten --cases 3 --seed 42 --format json "
                                 "--chart " +
                                 g_fixtures + "/r2-phi.chart.json";
        const auto r1 = run_cli(args);
        const auto r2 = run_cli(args);
        if (r1.exit_code != 0 || r1.output != r2.output) {
            why = "JSON verify reports are not byte-identical across runs";
            return false;
        }
    }

    // spot-check the compute surface and exit codes
    {
        const auto r = run_cli("compute star --input dx[1] --chart " + g_fixtures +
                               "/r2-standard.chart.json");
        if (r.exit_code != 0 || r.output.find("dx[1]") == std::string::npos) {
            why = "compute star dx[1] did not print dx[1]";
            return false;
        }
        // modular-vector on the R^3 fixture prints the negated curl of Pi
        const auto mv = run_cli("compute modular-vector --chart " + g_fixtures +
                                "/r3-fgh.chart.json");
        if (mv.exit_code != 0) {
            why = "compute modular-vector failed";
            return false;
        }
        const auto r3 = fixture("r3-fgh");
        std::string text = mv.output;
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
        const auto printed = parse_multivector(text, r3.chart);
        if (!equal_probabilistic(printed, -curl(r3.volume, r3.pi.bivector()))) {
            why = "modular-vector output is not the negated curl of Pi";
            return false;
        }
        const auto missing = run_cli("validate --chart /nonexistent.chart.json");
        if (missing.exit_code != 3) {
            why = "missing file did not exit with the I/O code";
            return false;
        }
        const auto usage = run_cli("compute frobnicate --chart " + g_fixtures +
                                   "/r2-standard.chart.json");
        if (usage.exit_code != 2) {
            why = "unknown operator did not exit with the usage code";
            return false;
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) g_cli = argv[++i];
        else if (arg == "--fixtures" && i + 1 < argc) g_fixtures = argv[++i];
        else if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    if (g_cli.empty() || g_fixtures.empty()) {
        std::cerr << "usage: acceptance --cli PATH --fixtures DIR [--only N]\n";
        return 2;
    }

    const std::vector<Criterion> criteria = {
        {1, "paper examples reproduced exactly", criterion_paper_examples},
        {2, "chain-complex laws d^2, del^2, delta^2, curl^2 = 0", criterion_chain_laws},
        {3, "Schouten bracket suite", criterion_schouten},
        {4, "modular vector field and modular operator suite", criterion_modular},
        {5, "local coboundary formula and frame independence", criterion_thm4},
        {6, "star operator suite", criterion_star},
        {7, "induced covariant derivative and local curl/delta formulas",
         criterion_induced_connection},
        {8, "curvature identity for the modular operator", criterion_thm5_main},
        {9, "changed-volume modular operator, three routes", criterion_changed_volume},
        {10, "CLI contract", criterion_cli},
    };

    bool all_ok = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.number != only) continue;
        std::string why;
        bool ok = false;
        try {
            ok = c.run(why);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        all_ok = all_ok && ok;
        std::printf("%s  criterion %2d: %s%s\n", ok ? "PASS" : "FAIL", c.number,
                    c.summary.c_str(), ok || why.empty() ? "" : ("  [" + why + "]").c_str());
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
