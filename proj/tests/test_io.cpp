#include "logcy/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace logcy;

namespace {

ClassVector cv(const AmbientLattice& L, std::vector<Int> c) { return ClassVector(L, std::move(c)); }

}  // namespace

TEST_CASE("divisor files round-trip byte for byte") {
    std::mt19937_64 rng(77);
    for (auto& model : minimal_model_corpus(-3, 3)) {
        DivisorConfig D = model.config;
        if (D.lattice.rank() <= 2) D.areas = positive_areas(D);
        std::string text = divisor_to_string(D);
        auto parsed = divisor_from_string(text);
        CHECK(divisor_to_string(parsed) == text);
        CHECK(parsed.classes == D.classes);
        CHECK(parsed.edges == D.edges);
        CHECK(parsed.areas == D.areas);
    }
    // configurations with markings, via a reduction
    auto r2 = AmbientLattice::rational(2);
    auto torus = make_config(r2, {cv(r2, {3, -1, -1})});
    auto trace = reduce_to_minimal(torus);
    std::string text = divisor_to_string(trace.final);
    auto parsed = divisor_from_string(text);
    CHECK(divisor_to_string(parsed) == text);
    CHECK(parsed.markings.size() == trace.final.markings.size());
}

TEST_CASE("rationals are serialized exactly") {
    auto r0 = AmbientLattice::rational(0);
    auto D = make_config(r0, {cv(r0, {1}), cv(r0, {2})});
    D.areas = AreaVector{{Rat(22, 7)}};
    auto text = divisor_to_string(D);
    CHECK(text.find("22/7") != std::string::npos);
    auto parsed = divisor_from_string(text);
    CHECK(parsed.areas->values[0] == Rat(22, 7));
}

TEST_CASE("parse errors carry field context") {
    CHECK_THROWS_AS(divisor_from_string("{"), ParseError);
    CHECK_THROWS_AS(divisor_from_string("[]"), ParseError);
    CHECK_THROWS_AS(divisor_from_string(R"({"components": []})"), ParseError);
    CHECK_THROWS_AS(divisor_from_string(R"({"ambient": {"kind": "weird"}, "components": []})"), ParseError);

    try {
        divisor_from_string(
            R"({"ambient": {"kind": "rational", "n": 1}, "components": [{"name": "C1", "class": [3]}]})");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("components[1]") != std::string::npos);
    }

    try {
        divisor_from_string(
            R"({"ambient": {"kind": "rational", "n": 0}, "components": [{"class": [3]}], "edges": [[1, 5]]})");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("edges[1]") != std::string::npos);
    }
}

TEST_CASE("component indices in files are 1-based") {
    std::string text = R"({
      "ambient": {"kind": "rational", "n": 0},
      "components": [{"name": "A", "class": [1]}, {"name": "B", "class": [2]}],
      "edges": [[1, 2], [1, 2]],
      "markings": [{"center": {"component": 2}, "origin": [1]}]
    })";
    auto D = divisor_from_string(text);
    CHECK(validate(D).ok());
    CHECK(D.edges[0] == Edge{0, 1});
    REQUIRE(D.markings.size() == 1);
    CHECK(std::get<SmoothPoint>(D.markings[0].center).component == 1);
}

TEST_CASE("trace files replay to the final configuration") {
    auto sp = AmbientLattice::sphere_product();
    auto D = make_config(sp, {cv(sp, {1, 1}), cv(sp, {1, 0}), cv(sp, {0, 1})});
    std::mt19937_64 rng(3);
    for (int i = 0; i < 3; ++i) D = random_blowup(D, rng).config;
    auto trace = reduce_to_minimal(D);
    auto text = trace_to_string(trace);
    auto replayed = replay_trace(D, text);
    CHECK(replayed.lattice == trace.final.lattice);
    CHECK(replayed.classes == trace.final.classes);
    CHECK(replayed.edges == trace.final.edges);
    CHECK(divisor_to_string(replayed) == divisor_to_string(trace.final));

    // summary line carries the label and flags
    CHECK(text.find("\"label\"") != std::string::npos);
    CHECK(text.find("\"exhaustive\":true") != std::string::npos);
}

TEST_CASE("dot export shows the paper's vertex labels") {
    auto sp = AmbientLattice::sphere_product();
    // C4 with b = 1: square with labels 2, 0, 0, -2
    auto D = make_config(sp, {cv(sp, {1, -1}), cv(sp, {1, 1}), cv(sp, {0, 1}), cv(sp, {0, 1})});
    auto dot = dot_export(D);
    CHECK(dot.rfind("graph", 0) == 0);
    CHECK(dot.find("[label=\"2\"]") != std::string::npos);
    CHECK(dot.find("[label=\"-2\"]") != std::string::npos);
    size_t zeros = 0;
    for (size_t pos = 0; (pos = dot.find("[label=\"0\"]", pos)) != std::string::npos; ++pos) ++zeros;
    CHECK(zeros == 2);
    // 4 edges of the square
    size_t edges = 0;
    for (size_t pos = 0; (pos = dot.find(" -- ", pos)) != std::string::npos; ++pos) ++edges;
    CHECK(edges == 4);
}

TEST_CASE("bigon export repeats the double edge") {
    auto r0 = AmbientLattice::rational(0);
    auto B2 = make_config(r0, {cv(r0, {1}), cv(r0, {2})});
    auto dot = dot_export(B2);
    size_t edges = 0;
    for (size_t pos = 0; (pos = dot.find(" -- ", pos)) != std::string::npos; ++pos) ++edges;
    CHECK(edges == 2);
}
