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
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "contracalc/verify.hpp"

namespace {

using namespace contracalc;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct RunConfig {
    std::string chart_path;
    int trials = 8;
    std::uint64_t seed = 0;
    int max_degree = 3;
    std::string format = "text";

    ProbEq eq() const {
        ProbEq p;
        p.trials = trials;
        p.seed = seed;
        return p;
    }
};

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

int cmd_validate(const RunConfig& cfg) {
    std::vector<CheckLine> checks;
    bool ok = true;
    std::optional<LoadedChart> loaded;
    try {
        loaded = load_chart_file(cfg.chart_path, cfg.eq());
        for (const char* name : {"coords", "poisson-index-range", "jacobi", "volume-nonvanishing"})
            checks.push_back({name, true, ""});
        if (loaded->doc.connection) checks.push_back({"connection-index-range", true, ""});
        if (loaded->symplectic)
            for (const char* name : {"symplectic-dimension", "omega-nondegenerate", "omega-closed",
                                     "liouville-normalization", "poisson-omega-consistency"})
                checks.push_back({name, true, ""});
    } catch (const ValidationError& e) {
        checks.push_back({e.invariant, false, e.what()});
        ok = false;
    }

    if (loaded && loaded->connection) {
        const auto status = check_connection(*loaded->connection, cfg.eq());
        checks.push_back({"connection-poisson", status.poisson, ""});
        checks.push_back({"connection-torsion-free", status.torsion_free, ""});
        ok = ok && status.ok();
    }

    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["command"] = "validate";
        j["chart"] = cfg.chart_path;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json e;
            e["name"] = c.name;
            e["status"] = c.pass ? "pass" : "fail";
            if (!c.detail.empty()) e["detail"] = c.detail;
            j["checks"].push_back(e);
        }
        j["ok"] = ok;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& c : checks)
            std::cout << "check " << c.name << ": " << (c.pass ? "pass" : "FAIL")
                      << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
        std::cout << (ok ? "validation passed" : "validation FAILED") << "\n";
    }
    return ok ? kExitOk : kExitVerificationFailure;
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

void require_inputs(const std::vector<std::string>& inputs, std::size_t want,
                    const std::string& op) {
    if (inputs.size() != want)
        throw Error("operator '" + op + "' needs " + std::to_string(want) + " --input operand(s)");
}

template <typename Tag>
AltTensor<Tag> reinterpret_zero(AltTensor<Tag> t, int grade) {
    if (t.is_zero_literal() && grade >= 0) return AltTensor<Tag>::zero(t.chart(), grade);
    return t;
}

int cmd_compute(const RunConfig& cfg, const std::string& op, const std::vector<std::string>& inputs,
                int grade, const std::string& volume_override) {
    const LoadedChart lc = load_chart_file(cfg.chart_path, cfg.eq());
    const Chart& chart = lc.chart;
    const VolumeForm vol = volume_override.empty()
                               ? lc.volume
                               : VolumeForm::make(chart, parse_expr(volume_override, chart),
                                                  cfg.eq());

    const auto need_symplectic = [&]() -> const SymplecticStructure& {
        if (!lc.symplectic) throw Error("operator '" + op + "' needs a symplectic block");
        return *lc.symplectic;
    };
    const auto need_connection = [&]() -> const ContravariantConnection& {
        if (!lc.connection) throw Error("operator '" + op + "' needs a connection");
        return *lc.connection;
    };

    std::string result;
    if (op == "schouten") {
        require_inputs(inputs, 2, op);
        const auto a = reinterpret_zero(parse_multivector(inputs[0], chart), grade);
        const auto b = parse_multivector(inputs[1], chart);
        result = to_text(schouten(a, b));
    } else if (op == "coboundary") {
        require_inputs(inputs, 1, op);
        result =
            to_text(coboundary(lc.pi, reinterpret_zero(parse_multivector(inputs[0], chart), grade)));
    } else if (op == "delta") {
        require_inputs(inputs, 1, op);
        result =
            to_text(delta_brylinski(lc.pi, reinterpret_zero(parse_form(inputs[0], chart), grade)));
    } else if (op == "curl") {
        require_inputs(inputs, 1, op);
        result = to_text(curl(vol, reinterpret_zero(parse_multivector(inputs[0], chart), grade)));
    } else if (op == "modular-vector") {
        require_inputs(inputs, 0, op);
        result = to_text(modular_vector_field(lc.pi, vol));
    } else if (op == "modular-op") {
        require_inputs(inputs, 1, op);
        result = to_text(modular_operator(
            lc.pi, vol, reinterpret_zero(parse_multivector(inputs[0], chart), grade)));
    } else if (op == "star") {
        require_inputs(inputs, 1, op);
        result =
            to_text(star(need_symplectic(), reinterpret_zero(parse_form(inputs[0], chart), grade)));
    } else if (op == "nabla") {
        require_inputs(inputs, 2, op);
        const auto x = parse_multivector(inputs[0], chart);
        const auto eta = reinterpret_zero(parse_form(inputs[1], chart), grade);
        result = to_text(nabla_form(need_symplectic(), need_connection(), x, eta));
    } else if (op == "curvature") {
        require_inputs(inputs, 3, op);
        const auto alpha = parse_form(inputs[0], chart);
        const auto beta = parse_form(inputs[1], chart);
        const auto a = reinterpret_zero(parse_multivector(inputs[2], chart), grade);
        result = to_text(curvature(need_connection(), alpha, beta, a));
    } else {
        throw Error("unknown operator '" + op + "'");
    }

    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["command"] = "compute";
        j["operator"] = op;
        j["result"] = result;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << result << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, const std::string& suite, int cases) {
    const LoadedChart lc = load_chart_file(cfg.chart_path, cfg.eq());
    VerifyOptions opts;
    opts.trials = cfg.trials;
    opts.seed = cfg.seed;
    opts.max_degree = cfg.max_degree;
    if (cases > 0) opts.cases = cases;

    const std::vector<SuiteReport> reports = run_verify(suite, lc, opts);
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.ok();

    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["command"] = "verify";
        j["suite"] = suite;
        j["chart"] = cfg.chart_path;
        j["seed"] = cfg.seed;
        j["trials"] = cfg.trials;
        j["suites"] = nlohmann::ordered_json::array();
        for (const auto& r : reports) {
            nlohmann::ordered_json js;
            js["suite"] = r.suite;
            if (r.skipped) {
                js["skipped"] = r.skip_reason;
            } else {
                js["identities"] = nlohmann::ordered_json::array();
                for (const auto& id : r.identities) {
                    nlohmann::ordered_json ji;
                    ji["name"] = id.name;
                    if (id.skipped) {
                        ji["skipped"] = id.skip_reason;
                    } else {
                        ji["cases"] = id.cases;
                        ji["failures"] = id.failures;
                        if (!id.failure_notes.empty()) ji["failing_inputs"] = id.failure_notes;
                    }
                    js["identities"].push_back(ji);
                }
            }
            j["suites"].push_back(js);
        }
        if (!ok) j["chart_spec"] = save_chart_json(lc);  // reusable fixture echo
        j["ok"] = ok;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& r : reports) {
            if (r.skipped) {
                std::cout << "suite " << r.suite << ": skipped (" << r.skip_reason << ")\n";
                continue;
            }
            std::cout << "suite " << r.suite << ":\n";
            for (const auto& id : r.identities) {
                if (id.skipped) {
                    std::cout << "  " << id.name << ": skipped (" << id.skip_reason << ")\n";
                    continue;
                }
                std::cout << "  " << id.name << ": " << id.cases << " cases, " << id.failures
                          << " failures" << (id.failures == 0 ? "" : "  FAIL") << "\n";
                for (const auto& note : id.failure_notes) std::cout << "    " << note << "\n";
            }
        }
        if (!ok) std::cout << "failing chart spec:\n" << save_chart_json(lc);
        std::cout << (ok ? "verification passed" : "verification FAILED") << "\n";
    }
    return ok ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contracalc: exact contravariant calculus on Poisson and symplectic charts"};
    app.require_subcommand(1);

    RunConfig cfg;
    const auto add_common = [&cfg](CLI::App* cmd) {
        cmd->add_option("--chart", cfg.chart_path, "chart spec file (.chart.json)")->required();
        cmd->add_option("--trials", cfg.trials, "equality-test trials")
            ->envname("CONTRACALC_TRIALS")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", cfg.seed, "random seed");
        cmd->add_option("--max-degree", cfg.max_degree, "max degree of generated inputs")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* validate = app.add_subcommand("validate", "run all chart-spec invariant checks");
    add_common(validate);

    auto* compute = app.add_subcommand("compute", "apply one operator to operand tensors");
    std::string op;
    std::vector<std::string> inputs;
    int grade = -1;
    std::string volume_override;
    compute
        ->add_option("operator", op,
                     "one of: schouten, coboundary, delta, curl, modular-vector, "
                     "modular-op, star, nabla, curvature")
        ->required();
    add_common(compute);
    compute->add_option("--input", inputs, "operand in tensor text syntax (repeatable)");
    compute->add_option("--grade", grade, "grade of a zero operand");
    compute->add_option("--volume", volume_override, "volume coefficient override");

    auto* verify = app.add_subcommand("verify", "run named identity suites");
    std::string suite = "all";
    int cases = 0;
    add_common(verify);
    verify->add_option("--suite", suite, "identity suite or 'all'");
    verify->add_option("--cases", cases, "cases per identity")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(cfg);
        if (app.got_subcommand(compute)) return cmd_compute(cfg, op, inputs, grade, volume_override);
        if (app.got_subcommand(verify)) {
            if (suite != "all") {
                const auto& names = verify_suite_names();
                if (std::find(names.begin(), names.end(), suite) == names.end())
                    throw Error("unknown verification suite '" + suite + "'");
            }
            return cmd_verify(cfg, suite, cases);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
