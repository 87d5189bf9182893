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
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "contracalc/symplectic.hpp"

namespace contracalc {

// ---------------------------------------------------------------------------
// The .chart.json document model
//
// {
//   "dim": 2,
//   "coords": ["x", "y"],
//   "poisson": [{"i": 1, "j": 2, "expr": "1 + x^2"}],          // i < j
//   "volume": {"expr": "1"},                                    // optional
//   "connection": [{"i":1, "j":2, "k":1, "expr": "-2*x"}],      // optional, sparse
//   "symplectic": {"source": "invert-poisson"}                  // optional
//     or {"omega": [{"i":1, "j":2, "expr": "..."}]}
// }
// ---------------------------------------------------------------------------

struct BivectorEntry {
    int i = 0, j = 0;
    std::string expr;
};

struct ConnectionEntry {
    int i = 0, j = 0, k = 0;
    std::string expr;
};

struct SymplecticSpec {
    bool invert_poisson = true;
    std::vector<BivectorEntry> omega;  // used when !invert_poisson
};

struct ChartSpecDoc {
    int dim = 0;
    std::vector<std::string> coords;
    std::vector<BivectorEntry> poisson;
    std::string volume = "1";
    std::optional<std::vector<ConnectionEntry>> connection;
    std::optional<SymplecticSpec> symplectic;
};

/// Everything a chart file declares, validated and instantiated.
struct LoadedChart {
    Chart chart;
    PoissonBivector pi;
    VolumeForm volume;
    std::optional<ContravariantConnection> connection;
    std::optional<SymplecticStructure> symplectic;
    ChartSpecDoc doc;
};

// ---------------------------------------------------------------------------
// JSON <-> document
// ---------------------------------------------------------------------------

namespace detail {

inline int require_int(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number_integer())
        throw ValidationError("schema", std::string("missing integer field '") + field + "'");
    return j[field].get<int>();
}

inline std::string require_string(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_string())
        throw ValidationError("schema", std::string("missing string field '") + field + "'");
    return j[field].get<std::string>();
}

inline std::vector<BivectorEntry> parse_bivector_entries(const nlohmann::json& j,
                                                         const char* what) {
    if (!j.is_array()) throw ValidationError("schema", std::string(what) + " must be an array");
    std::vector<BivectorEntry> out;
    for (const auto& e : j)
        out.push_back({require_int(e, "i"), require_int(e, "j"), require_string(e, "expr")});
    return out;
}

}  // namespace detail

inline ChartSpecDoc doc_from_json(const nlohmann::json& j) {
    ChartSpecDoc doc;
    doc.dim = detail::require_int(j, "dim");
    if (!j.contains("coords") || !j["coords"].is_array())
        throw ValidationError("schema", "missing array field 'coords'");
    for (const auto& c : j["coords"]) {
        if (!c.is_string()) throw ValidationError("schema", "coords must be strings");
        doc.coords.push_back(c.get<std::string>());
    }
    if (!j.contains("poisson"))
        throw ValidationError("schema", "missing 'poisson' block");
    doc.poisson = detail::parse_bivector_entries(j["poisson"], "poisson");
    if (j.contains("volume")) doc.volume = detail::require_string(j["volume"], "expr");
    if (j.contains("connection")) {
        if (!j["connection"].is_array())
            throw ValidationError("schema", "connection must be an array");
        std::vector<ConnectionEntry> entries;
        for (const auto& e : j["connection"])
            entries.push_back({detail::require_int(e, "i"), detail::require_int(e, "j"),
                               detail::require_int(e, "k"), detail::require_string(e, "expr")});
        doc.connection = std::move(entries);
    }
    if (j.contains("symplectic")) {
        const auto& s = j["symplectic"];
        SymplecticSpec spec;
        if (s.contains("source")) {
            const std::string source = detail::require_string(s, "source");
            if (source != "invert-poisson")
                throw ValidationError("schema", "unknown symplectic source '" + source + "'");
            spec.invert_poisson = true;
        } else if (s.contains("omega")) {
            spec.invert_poisson = false;
            spec.omega = detail::parse_bivector_entries(s["omega"], "omega");
        } else {
            throw ValidationError("schema", "symplectic block needs 'source' or 'omega'");
        }
        doc.symplectic = std::move(spec);
    }
    return doc;
}

inline nlohmann::ordered_json json_from_doc(const ChartSpecDoc& doc) {
    nlohmann::ordered_json j;
    j["dim"] = doc.dim;
    j["coords"] = doc.coords;
    auto entries = doc.poisson;
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    j["poisson"] = nlohmann::ordered_json::array();
    for (const auto& e : entries)
        j["poisson"].push_back({{"i", e.i}, {"j", e.j}, {"expr", e.expr}});
    j["volume"] = {{"expr", doc.volume}};
    if (doc.connection) {
        auto conn = *doc.connection;
        std::sort(conn.begin(), conn.end(), [](const auto& a, const auto& b) {
            return std::tuple(a.i, a.j, a.k) < std::tuple(b.i, b.j, b.k);
        });
        j["connection"] = nlohmann::ordered_json::array();
        for (const auto& e : conn)
            j["connection"].push_back({{"i", e.i}, {"j", e.j}, {"k", e.k}, {"expr", e.expr}});
    }
    if (doc.symplectic) {
        if (doc.symplectic->invert_poisson) {
            j["symplectic"] = {{"source", "invert-poisson"}};
        } else {
            auto omega = doc.symplectic->omega;
            std::sort(omega.begin(), omega.end(), [](const auto& a, const auto& b) {
                return std::pair(a.i, a.j) < std::pair(b.i, b.j);
            });
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& e : omega)
                arr.push_back({{"i", e.i}, {"j", e.j}, {"expr", e.expr}});
            j["symplectic"] = {{"omega", arr}};
        }
    }
    return j;
}

// ---------------------------------------------------------------------------
// Document -> validated objects
// ---------------------------------------------------------------------------

inline LoadedChart load_chart_doc(const ChartSpecDoc& doc, const ProbEq& opts = {}) {
    if (doc.dim != static_cast<int>(doc.coords.size()))
        throw ValidationError("coords", "dim does not match the number of coordinate names");
    const Chart chart = Chart::make(doc.coords);
    const int n = chart.dim;

    MultiVectorField w(chart, 2);
    for (const auto& e : doc.poisson) {
        if (e.i < 1 || e.j < 1 || e.i > n || e.j > n || e.i >= e.j)
            throw ValidationError("poisson-index-range",
                                  "poisson entry needs 1 <= i < j <= dim");
        w.add_term({e.i, e.j}, parse_expr(e.expr, chart));
    }
    PoissonBivector pi = PoissonBivector::checked(std::move(w), opts);

    VolumeForm volume = VolumeForm::make(chart, parse_expr(doc.volume, chart), opts);

    std::optional<ContravariantConnection> connection;
    if (doc.connection) {
        auto d = ContravariantConnection::zero(pi);
        for (const auto& e : *doc.connection) {
            if (e.i < 1 || e.j < 1 || e.k < 1 || e.i > n || e.j > n || e.k > n)
                throw ValidationError("connection-index-range",
                                      "connection entry indices must lie in 1..dim");
            d.set_gamma(e.i, e.j, e.k, parse_expr(e.expr, chart));
        }
        connection = std::move(d);
    }

    std::optional<SymplecticStructure> symplectic;
    if (doc.symplectic) {
        if (doc.symplectic->invert_poisson) {
            symplectic = SymplecticStructure::from_pi(pi, opts);
        } else {
            DifferentialForm omega(chart, 2);
            for (const auto& e : doc.symplectic->omega) {
                if (e.i < 1 || e.j < 1 || e.i > n || e.j > n || e.i >= e.j)
                    throw ValidationError("poisson-index-range",
                                          "omega entry needs 1 <= i < j <= dim");
                omega.add_term({e.i, e.j}, parse_expr(e.expr, chart));
            }
            symplectic = SymplecticStructure::from_omega(std::move(omega), opts);
            if (!equal_probabilistic(symplectic->pi().bivector(), pi.bivector(), opts))
                throw ValidationError("poisson-omega-consistency",
                                      "declared poisson bivector is not the inverse of omega");
        }
    }

    return LoadedChart{chart, std::move(pi), std::move(volume), std::move(connection),
                       std::move(symplectic), doc};
}

inline LoadedChart load_chart_json(const std::string& text, const ProbEq& opts = {}) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    return load_chart_doc(doc_from_json(j), opts);
}

inline LoadedChart load_chart_file(const std::string& path, const ProbEq& opts = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_chart_json(buffer.str(), opts);
}

/// Canonical re-serialization from the validated objects: expressions are
/// reprinted with the canonical printer, entries sorted. load(save(x))
/// rebuilds x with identical expression trees.
inline ChartSpecDoc save_chart_doc(const LoadedChart& loaded) {
    ChartSpecDoc doc;
    const Chart& chart = loaded.chart;
    doc.dim = chart.dim;
    doc.coords = chart.coords;
    for (const auto& [idx, f] : loaded.pi.bivector().coeffs())
        doc.poisson.push_back({idx[0], idx[1], to_text(f, chart)});
    doc.volume = to_text(loaded.volume.coefficient(), chart);
    if (loaded.connection) {
        std::vector<ConnectionEntry> entries;
        for (const auto& [i, j, k, g] : loaded.connection->entries())
            entries.push_back({i, j, k, to_text(g, chart)});
        doc.connection = std::move(entries);
    }
    if (loaded.symplectic) {
        SymplecticSpec spec;
        spec.invert_poisson = loaded.doc.symplectic && loaded.doc.symplectic->invert_poisson;
        if (!spec.invert_poisson)
            for (const auto& [idx, f] : loaded.symplectic->omega().coeffs())
                spec.omega.push_back({idx[0], idx[1], to_text(f, chart)});
        doc.symplectic = std::move(spec);
    }
    return doc;
}

inline std::string save_chart_json(const LoadedChart& loaded) {
    return json_from_doc(save_chart_doc(loaded)).dump(2) + "\n";
}

inline void save_chart_file(const LoadedChart& loaded, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << save_chart_json(loaded);
}

}  // namespace contracalc
