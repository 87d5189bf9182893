#include <catch2/catch.hpp>

#include "contracalc/chartspec.hpp"

using namespace contracalc;

namespace {

LoadedChart load(const std::string& text) { return load_chart_json(text); }

const char* kR2Phi = R"({
  "dim": 2,
  "coords": ["x", "y"],
  "poisson": [{"i": 1, "j": 2, "expr": "x^2 + 1"}]
})";

const char* kR3 = R"({
  "dim": 3,
  "coords": ["x", "y", "z"],
  "poisson": [
    {"i": 1, "j": 2, "expr": "z"},
    {"i": 2, "j": 3, "expr": "x"},
    {"i": 1, "j": 3, "expr": "-y"}
  ]
})";

const char* kR4 = R"({
  "dim": 4,
  "coords": ["x1", "y1", "x2", "y2"],
  "poisson": [
    {"i": 1, "j": 2, "expr": "1"},
    {"i": 3, "j": 4, "expr": "1"}
  ],
  "volume": {"expr": "1"},
  "connection": [],
  "symplectic": {"source": "invert-poisson"}
})";

}  // namespace

TEST_CASE("loading the three reference documents", "[chartspec]") {
    SECTION("2d phi chart loads and passes jacobi") {
        const auto c = load(kR2Phi);
        CHECK(c.chart.dim == 2);
        CHECK(c.pi.jacobi_checked());
        CHECK(equal_probabilistic(c.chart, c.pi.entry(1, 2), parse_expr("x^2+1", c.chart)));
        CHECK(equal_probabilistic(c.chart, c.volume.coefficient(), ScalarExpr::integer(1)));
        CHECK_FALSE(c.connection.has_value());
        CHECK_FALSE(c.symplectic.has_value());
    }
    SECTION("rotational R^3 chart loads") {
        const auto c = load(kR3);
        CHECK(c.chart.dim == 3);
        CHECK(c.pi.jacobi_checked());
    }
    SECTION("R^3 with f = y, g = h = 0 loads") {
        const auto c = load(R"({"dim":3,"coords":["x","y","z"],
                                "poisson":[{"i":1,"j":2,"expr":"y"}]})");
        CHECK(c.pi.jacobi_checked());
    }
    SECTION("R^4 darboux with symplectic block") {
        const auto c = load(kR4);
        REQUIRE(c.symplectic.has_value());
        REQUIRE(c.connection.has_value());
        CHECK(check_connection(*c.connection).ok());
        CHECK(equal_probabilistic(c.symplectic->omega(),
                                  parse_form("dx[1,2] + dx[3,4]", c.chart)));
    }
}

TEST_CASE("validation failures carry the invariant name", "[chartspec]") {
    const auto invariant_of = [](const std::string& text) -> std::string {
        try {
            load(text);
        } catch (const ValidationError& e) {
            return e.invariant;
        }
        return "";
    };
    SECTION("jacobi") {
        CHECK(invariant_of(R"({"dim":3,"coords":["x","y","z"],
                               "poisson":[{"i":1,"j":2,"expr":"z"},
                                          {"i":2,"j":3,"expr":"y"}]})") == "jacobi");
    }
    SECTION("index range, including the i<j requirement") {
        CHECK(invariant_of(R"({"dim":2,"coords":["x","y"],
                               "poisson":[{"i":2,"j":1,"expr":"1"}]})") == "poisson-index-range");
        CHECK(invariant_of(R"({"dim":2,"coords":["x","y"],
                               "poisson":[{"i":1,"j":3,"expr":"1"}]})") == "poisson-index-range");
        CHECK(invariant_of(R"({"dim":2,"coords":["x","y"],
                               "poisson":[{"i":1,"j":2,"expr":"1"}],
                               "connection":[{"i":0,"j":1,"k":1,"expr":"x"}]})") ==
              "connection-index-range");
    }
    SECTION("volume and symplectic invariants") {
        CHECK(invariant_of(R"({"dim":2,"coords":["x","y"],
                               "poisson":[{"i":1,"j":2,"expr":"1"}],
                               "volume":{"expr":"x - x"}})") == "volume-nonvanishing");
        CHECK(invariant_of(R"({"dim":3,"coords":["x","y","z"],
                               "poisson":[{"i":1,"j":2,"expr":"1"}],
                               "symplectic":{"source":"invert-poisson"}})") ==
              "symplectic-dimension");
        CHECK(invariant_of(R"({"dim":2,"coords":["x","y"],
                               "poisson":[{"i":1,"j":2,"expr":"1"}],
                               "symplectic":{"omega":[{"i":1,"j":2,"expr":"2"}]}})") ==
              "poisson-omega-consistency");
    }
    SECTION("schema and expression errors") {
        CHECK(invariant_of(R"({"dim":2,"coords":["x","y"]})") == "schema");
        CHECK_THROWS_AS(load("{not json"), ParseError);
        CHECK_THROWS_AS(load(R"({"dim":2,"coords":["x","y"],
                                 "poisson":[{"i":1,"j":2,"expr":"q + 1"}]})"),
                        ParseError);
    }
}

TEST_CASE("save/load round trip is exact on expression trees", "[chartspec]") {
    const auto roundtrip = [](const std::string& text) {
        const auto first = load(text);
        const std::string serialized = save_chart_json(first);
        const auto second = load(serialized);
        CHECK(second.pi.bivector().coeffs().size() == first.pi.bivector().coeffs().size());
        for (const auto& [idx, f] : first.pi.bivector().coeffs())
            CHECK(second.pi.bivector().coefficient(idx).identical_to(f));
        CHECK(second.volume.coefficient().identical_to(first.volume.coefficient()));
        CHECK(second.connection.has_value() == first.connection.has_value());
        if (first.connection) {
            const auto e1 = first.connection->entries();
            const auto e2 = second.connection->entries();
            REQUIRE(e1.size() == e2.size());
            for (std::size_t t = 0; t < e1.size(); ++t) {
                CHECK(std::get<0>(e1[t]) == std::get<0>(e2[t]));
                CHECK(std::get<3>(e1[t]).identical_to(std::get<3>(e2[t])));
            }
        }
        // serialization is canonical: a second save is byte identical
        CHECK(save_chart_json(second) == serialized);
    };
    roundtrip(kR2Phi);
    roundtrip(kR3);
    roundtrip(kR4);
    roundtrip(R"json({"dim":2,"coords":["x","y"],
                  "poisson":[{"i":1,"j":2,"expr":"x^2 + 1"}],
                  "volume":{"expr":"1 + y^2"},
                  "connection":[{"i":1,"j":2,"k":1,"expr":"-2*x"},
                                {"i":2,"j":2,"k":2,"expr":"2*x"}],
                  "symplectic":{"omega":[{"i":1,"j":2,"expr":"1/(x^2+1)"}]}})json");
}
